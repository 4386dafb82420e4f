#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "vslicer/basis.hpp"
#include "vslicer/errors.hpp"
#include "vslicer/lattice.hpp"
#include "vslicer/sampling.hpp"

using namespace vslicer;

namespace {

double gso_radius(const LatticeBasis& b) {
    double s = 0.0;
    for (double x : b.gso().bstar_sq) s += x;
    return std::sqrt(s);
}

void check_list_shape(const ShortVectorList& l) {
    REQUIRE(l.size() % 2 == 0);
    for (std::size_t i = 0; i < l.size(); ++i) {
        CHECK(l.norms_sq[i] > 0.0);
        CHECK(l.norms_sq[i] == doctest::Approx(norm_sq(l.vectors[i])));
        if (i > 0) CHECK(l.norms_sq[i] >= l.norms_sq[i - 1] * (1.0 - 1e-12));
    }
    for (std::size_t i = 0; i < l.size(); i += 2) {
        for (std::size_t k = 0; k < l.vectors[i].size(); ++k) CHECK(l.vectors[i + 1][k] == -l.vectors[i][k]);
    }
}

}  // namespace

TEST_CASE("basis construction and queries") {
    const LatticeBasis b(2, {2.0, 0.0, 1.0, 3.0});
    CHECK(b.det_abs() == doctest::Approx(6.0));
    CHECK(b.combine(std::vector<long long>{1, -2}) == RealVec{0.0, -6.0});
    const RealVec c = b.coordinates(RealVec{5.0, 6.0});
    CHECK(c[0] == doctest::Approx(1.5));
    CHECK(c[1] == doctest::Approx(2.0));
    CHECK(b.contains(RealVec{3.0, 3.0}));
    CHECK_FALSE(b.contains(RealVec{3.0, 3.5}));
    CHECK(b.scaled(2.0).det_abs() == doctest::Approx(24.0));
    CHECK_THROWS_AS(LatticeBasis(2, {1.0, 2.0, 2.0, 4.0}), InputError);
    CHECK_THROWS_AS(LatticeBasis(2, {1.0, 2.0, 2.0}), InputError);
    CHECK_THROWS_AS(LatticeBasis(2, {1.0, std::nan(""), 0.0, 1.0}), InputError);
    CHECK(LatticeBasis::identity(5).det_abs() == doctest::Approx(1.0));
    CHECK_FALSE(b.lambda1().has_value());
}

TEST_CASE("gram-schmidt reconstructs the basis") {
    const int d = 4;
    const std::vector<double> rows{3, 1, 0, 2, 1, 4, 1, 0, 0, 2, 5, 1, 1, 0, 1, 6};
    const GramSchmidt g = gram_schmidt(d, rows);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < i; ++j) CHECK(std::abs(dot(g.bstar_row(i), g.bstar_row(j))) < 1e-10);
        for (int k = 0; k < d; ++k) {
            double x = g.bstar_row(i)[k];
            for (int j = 0; j < i; ++j) x += g.mu_at(i, j) * g.bstar_row(j)[k];
            CHECK(x == doctest::Approx(rows[i * d + k]));
        }
    }
}

TEST_CASE("LLL output is reduced and spans the same lattice") {
    RandomStream r(1);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + static_cast<int>(r.uniform_index(9));
        std::vector<double> rows(static_cast<std::size_t>(d) * d);
        for (double& x : rows) x = std::round(200.0 * (r.uniform01() - 0.5));
        for (int i = 0; i < d; ++i) rows[i * d + i] += 500.0;  // keep it non-singular
        const LatticeBasis orig(d, rows);
        const std::vector<double> red = lll_reduce(d, rows, 0.99);
        CHECK(is_lll_reduced(d, red, 0.99));
        const LatticeBasis rb(d, red);
        CHECK(rb.det_abs() == doctest::Approx(orig.det_abs()).epsilon(1e-9));
        for (int i = 0; i < d; ++i) CHECK(orig.contains(rb.row(i), 1e-6));
    }
    CHECK_FALSE(is_lll_reduced(2, std::vector<double>{1.0, 0.0, 10.0, 1.0}));
}

TEST_CASE("random lattices") {
    RandomStream a(5), b(5);
    const LatticeBasis x = random_lattice(8, a);
    const LatticeBasis y = random_lattice(8, b);
    CHECK(x.rows() == y.rows());
    RandomStream r(6);
    for (int d : {2, 3, 10, 24}) {
        const LatticeBasis l = random_lattice(d, r);
        CHECK(std::abs(l.det_abs() - 1.0) < 1e-6);
        CHECK(is_lll_reduced(d, l.rows(), 0.99, 1e-6));
    }
    CHECK_THROWS_AS(random_lattice(1, r), InputError);
    CHECK_THROWS_AS(random_lattice(41, r), InputError);
}

TEST_CASE("random planar lattices have lambda1 near the heuristic radius") {
    RandomStream r(7);
    // Hermite's constant caps lambda1 / gh at sqrt(2 pi / sqrt 3) ~ 1.905. Below,
    // the expected count of nonzero points in a ball of rho * gh is rho^2, so
    // P(lambda1 < gh / 2) <= 1/8.
    int small = 0;
    const int n = 400;
    for (int seed = 0; seed < n; ++seed) {
        const LatticeBasis l = random_lattice(2, r);
        const ShortVectorList s = enumerate_short_vectors(l, 2);
        const double ratio = std::sqrt(s.norms_sq[0]) / gh_radius(l);
        CHECK(ratio <= std::sqrt(2.0 * std::numbers::pi / std::sqrt(3.0)) + 1e-9);
        small += ratio < 0.5;
    }
    CHECK(small <= n / 8 + 3 * std::sqrt(n / 8.0));
}

TEST_CASE("list size rule") {
    CHECK(list_size(1.15, 12) == 26);
    CHECK(list_size(2.0, 12) == 4096);
    CHECK(list_size(2.0, 18) == 262144);
    CHECK(list_size(1.5, 11) == 86);
    CHECK(list_size(1.6, 8) == 44);  // round(42.9) = 43, made even
    CHECK(list_size(1.2, 10) == 22);
    for (double a : {1.01, 1.1, 1.3, 1.7}) {
        for (int d = 2; d <= 30; ++d) {
            const std::size_t n = list_size(a, d);
            CHECK(n % 2 == 0);
            CHECK(n >= static_cast<std::size_t>(2 * (d + 1)));
            CHECK(static_cast<double>(n) >= std::round(std::pow(a, d)));
            CHECK(static_cast<double>(n) <= std::max(std::round(std::pow(a, d)), 2.0 * (d + 1)) + 1.0);
        }
    }
}

TEST_CASE("short vectors of Z^2") {
    const LatticeBasis z2 = LatticeBasis::identity(2);
    const ShortVectorList four = enumerate_short_vectors(z2, 4);
    REQUIRE(four.size() == 4);
    for (double n : four.norms_sq) CHECK(n == doctest::Approx(1.0));
    CHECK(four.vectors[0] == RealVec{0.0, 1.0});  // coefficient order (0,1) < (1,0)
    const ShortVectorList eight = enumerate_short_vectors(z2, 8);
    REQUIRE(eight.size() == 8);
    for (std::size_t i = 4; i < 8; ++i) CHECK(eight.norms_sq[i] == doctest::Approx(2.0));
    CHECK(eight.lambda1 == doctest::Approx(1.0));
    CHECK(eight.alpha_effective == doctest::Approx(std::sqrt(2.0)));
    check_list_shape(eight);
    CHECK_THROWS_AS(enumerate_short_vectors(z2, 3), InputError);
    CHECK_THROWS_AS(enumerate_short_vectors(z2, 0), InputError);
}

TEST_CASE("property: enumeration is complete against the boxed oracle") {
    RandomStream r(8);
    for (int d : {2, 3, 4, 5, 6, 8}) {
        const LatticeBasis l = random_lattice(d, r);
        const ShortVectorList s = enumerate_short_vectors(l, 2 * (d + 4));
        check_list_shape(s);
        const double radius = std::sqrt(s.norms_sq.back());
        const std::vector<double> brute = oracle::short_norms_sq(d, l.rows(), radius * (1.0 + 1e-9));
        // Everything at or below the last norm is present, and nothing shorter was skipped.
        CHECK(brute.size() >= s.size());
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.norms_sq[i] == doctest::Approx(brute[i]).epsilon(1e-10));
        if (brute.size() > s.size()) CHECK(brute[s.size()] >= s.norms_sq.back() * (1.0 - 1e-9));
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(l.contains(s.vectors[i]));

        const ShortVectorList w = enumerate_within_radius(l, radius * 1.2);
        const std::vector<double> bw = oracle::short_norms_sq(d, l.rows(), radius * 1.2);
        REQUIRE(w.size() == bw.size());
        for (std::size_t i = 0; i < w.size(); ++i) CHECK(w.norms_sq[i] == doctest::Approx(bw[i]).epsilon(1e-10));
    }
}

TEST_CASE("enumeration at d = 10 matches a coefficient-box search") {
    RandomStream r(9);
    const LatticeBasis l = random_lattice(10, r);
    const ShortVectorList s = enumerate_short_vectors(l, 40);
    const double radius = std::sqrt(s.norms_sq.back());
    const std::vector<double> brute = oracle::short_norms_sq(10, l.rows(), radius * (1.0 + 1e-9));
    REQUIRE(brute.size() >= s.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.norms_sq[i] == doctest::Approx(brute[i]).epsilon(1e-10));
}

TEST_CASE("tie-breaking is reproducible") {
    const LatticeBasis z3 = LatticeBasis::identity(3);
    const ShortVectorList a = enumerate_short_vectors(z3, 18);
    const ShortVectorList b = enumerate_short_vectors(z3, 18);
    CHECK(a.coeffs == b.coeffs);
    // 6 unit vectors then the first 12 of the 12 at sqrt 2.
    for (std::size_t i = 0; i < 6; ++i) CHECK(a.norms_sq[i] == doctest::Approx(1.0));
    for (std::size_t i = 6; i < 18; ++i) CHECK(a.norms_sq[i] == doctest::Approx(2.0));
    // A cut through a shell keeps the lexicographically smallest canonical pairs.
    const ShortVectorList c = enumerate_short_vectors(z3, 8);
    CHECK(c.coeffs[6] == std::vector<long long>{0, 1, -1});
}

TEST_CASE("relevant vectors") {
    for (int d = 1; d <= 8; ++d) {
        const ShortVectorList rv = relevant_vectors(LatticeBasis::identity(d));
        CAPTURE(d);
        REQUIRE(rv.size() == static_cast<std::size_t>(2 * d));
        for (double n : rv.norms_sq) CHECK(n == doctest::Approx(1.0));
    }
    // Planar: 6 for a hexagonal-ish shape, 4 for a rectangle.
    CHECK(relevant_vectors(LatticeBasis(2, {1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0})).size() == 6);
    CHECK(relevant_vectors(LatticeBasis(2, {1.0, 0.0, 0.5, 0.7})).size() == 6);
    CHECK(relevant_vectors(LatticeBasis(2, {1.0, 0.0, 0.0, 1.7})).size() == 4);
    RandomStream r(10);
    for (int d : {2, 3, 4, 5}) {
        const LatticeBasis l = random_lattice(d, r);
        const ShortVectorList rv = relevant_vectors(l);
        check_list_shape(rv);
        CHECK(rv.size() <= static_cast<std::size_t>(2 * ((1 << d) - 1)));
        CHECK(rv.size() >= static_cast<std::size_t>(2 * d));
        CHECK(rv.size() == oracle::relevant_count(d, l.rows(), gso_radius(l)));
    }
    CHECK_THROWS_AS(relevant_vectors(LatticeBasis::identity(13)), ResourceError);
}

TEST_CASE("exact CVP") {
    const LatticeBasis z2 = LatticeBasis::identity(2);
    CHECK(cvp_exact(z2, RealVec{0.6, 0.2}) == RealVec{1.0, 0.0});
    CHECK(cvp_exact(z2, RealVec{-3.0, 7.0}) == RealVec{-3.0, 7.0});
    // Tie at (0.5, 0): coefficient (0, 0) precedes (1, 0).
    CHECK(cvp_exact(z2, RealVec{0.5, 0.0}) == RealVec{0.0, 0.0});
    CHECK(cvp_exact_solve(z2, RealVec{0.5, 0.0}).dist_sq == doctest::Approx(0.25));
    CHECK_THROWS_AS(cvp_exact(LatticeBasis::identity(13), RealVec(13, 0.1)), ResourceError);
    CHECK_THROWS_AS(cvp_exact(z2, RealVec{0.1}), InputError);
}

TEST_CASE("property: CVP agrees with brute force and beats random lattice vectors") {
    RandomStream r(11);
    for (int d : {2, 4, 6}) {
        const LatticeBasis l = random_lattice(d, r);
        for (int k = 0; k < 100; ++k) {
            RealVec t(static_cast<std::size_t>(d));
            for (double& x : t) x = 6.0 * (r.uniform01() - 0.5);
            const CvpSolution sol = cvp_exact_solve(l, t);
            CHECK(l.contains(sol.vector));
            CHECK(sol.dist_sq == doctest::Approx(oracle::dist_sq(sol.vector, t)));
            const RealVec babai = l.combine(std::span<const long long>(babai_coefficients(l, t)));
            const double brute = oracle::cvp_dist_sq(d, l.rows(), t, std::sqrt(oracle::dist_sq(babai, t)));
            CHECK(sol.dist_sq == doctest::Approx(brute).epsilon(1e-10));
            if (k < 10) {
                for (int j = 0; j < 1000; ++j) {
                    std::vector<long long> z(static_cast<std::size_t>(d));
                    for (long long& c : z) c = static_cast<long long>(r.uniform_index(9)) - 4;
                    CHECK(sol.dist_sq <= oracle::dist_sq(l.combine(std::span<const long long>(z)), t) * (1.0 + 1e-12));
                }
            }
        }
    }
}

TEST_CASE("gaussian heuristic radius") {
    CHECK(gh_radius(LatticeBasis::identity(2)) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)));
    const LatticeBasis b(3, {1.0, 0.2, 0.0, 0.0, 1.3, 0.4, 0.1, 0.0, 0.8});
    CHECK(gh_radius(b.scaled(2.5)) == doctest::Approx(2.5 * gh_radius(b)));
    long long count = 0;
    for (int x = -10; x <= 10; ++x) {
        for (int y = -10; y <= 10; ++y) count += x * x + y * y <= 100;
    }
    CHECK(count == 317);
    CHECK(std::abs(count / (std::numbers::pi * 100.0) - 1.0) < 0.02);
}

TEST_CASE("property: lattice point counts follow the Gaussian heuristic") {
    RandomStream r(12);
    for (int d = 2; d <= 6; ++d) {
        const LatticeBasis l = random_lattice(d, r);
        const double gh = gh_radius(l);
        for (double f : {2.0, 4.0, 6.0}) {
            const ShortVectorList w = enumerate_within_radius(l, f * gh);
            const double expected = std::pow(f, d);  // vol(R B) / det with R = f gh
            const double ratio = (static_cast<double>(w.size()) + 1.0) / expected;
            CAPTURE(d);
            CAPTURE(f);
            CHECK(ratio >= 0.5);
            CHECK(ratio <= 2.0);
        }
    }
}

TEST_CASE("basis text format round-trips") {
    RandomStream r(13);
    const LatticeBasis l = random_lattice(6, r);
    std::stringstream io;
    write_basis(io, l);
    const LatticeBasis back = read_basis(io);
    CHECK(back.rows() == l.rows());
    std::istringstream bad1("2\n1 0\n0\n");
    CHECK_THROWS_AS(read_basis(bad1), InputError);
    std::istringstream bad2("2\n1 0\n0 1\n7\n");
    CHECK_THROWS_AS(read_basis(bad2), InputError);
    std::istringstream bad3("x\n");
    CHECK_THROWS_AS(read_basis(bad3), InputError);
    CHECK_THROWS_AS(read_basis_file("/nonexistent/basis.txt"), InputError);
}
