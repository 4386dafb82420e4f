#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vslicer/errors.hpp"
#include "vslicer/lattice.hpp"
#include "vslicer/slicer.hpp"

using namespace vslicer;

namespace {

ShortVectorList unit_list(int d) { return enumerate_short_vectors(LatticeBasis::identity(d), 2 * d); }

RealVec random_target(int d, RandomStream& r, double spread = 4.0) {
    RealVec t(static_cast<std::size_t>(d));
    for (double& x : t) x = spread * (r.uniform01() - 0.5);
    return t;
}

}  // namespace

TEST_CASE("iterative slicer hand traces") {
    const ShortVectorList l = unit_list(2);
    const SlicerOutcome o = iterative_slice(l, RealVec{0.6, 0.0});
    CHECK(o.t_reduced[0] == doctest::Approx(-0.4));
    CHECK(o.t_reduced[1] == doctest::Approx(0.0));
    CHECK(o.s == RealVec{1.0, 0.0});
    CHECK(o.s_coeffs == std::vector<long long>{1, 0});
    CHECK(o.reductions == 1);
    CHECK(o.passes == 2);
    CHECK(o.norm_trace.size() == 2);

    const SlicerOutcome z = iterative_slice(l, RealVec{0.0, 0.0});
    CHECK(z.reductions == 0);
    CHECK(z.t_reduced == RealVec{0.0, 0.0});
    CHECK_THROWS_AS(iterative_slice(l, RealVec{0.0}), InputError);
    CHECK_THROWS_AS(iterative_slice(ShortVectorList{}, RealVec{0.0, 1.0}), InputError);
}

TEST_CASE("property: slicer invariants") {
    RandomStream r(1);
    for (int d : {3, 5, 8}) {
        const LatticeBasis b = random_lattice(d, r);
        const ShortVectorList l = enumerate_short_vectors(b, list_size(1.1, d));
        for (int k = 0; k < 200; ++k) {
            const RealVec t = random_target(d, r, 8.0);
            const SlicerOutcome o = iterative_slice(l, t);
            // Coset membership and reconstruction of s.
            CHECK(b.contains(sub(t, o.t_reduced), 1e-6));
            const RealVec s = b.combine(std::span<const long long>(o.s_coeffs));
            for (int i = 0; i < d; ++i) CHECK(s[i] == doctest::Approx(o.s[i]).epsilon(1e-9));
            // Strictly decreasing trace, one entry per reduction plus the start.
            CHECK(o.norm_trace.size() == static_cast<std::size_t>(o.reductions + 1));
            for (std::size_t i = 1; i < o.norm_trace.size(); ++i) CHECK(o.norm_trace[i] < o.norm_trace[i - 1]);
            // Terminal.
            CHECK_FALSE(reducible(l, o.t_reduced));
            // Pure function of (L, t).
            CHECK(iterative_slice(l, t).t_reduced == o.t_reduced);
        }
    }
}

TEST_CASE("slicer with all relevant vectors solves CVP") {
    RandomStream r(2);
    for (int d : {2, 4, 6, 8}) {
        const LatticeBasis b = random_lattice(d, r);
        const ShortVectorList rv = relevant_vectors(b);
        for (int k = 0; k < 50; ++k) {
            const RealVec t = random_target(d, r, 10.0);
            const SlicerOutcome o = iterative_slice(rv, t);
            CHECK(norm(o.t_reduced) == doctest::Approx(std::sqrt(cvp_exact_solve(b, t).dist_sq)).epsilon(1e-9));
        }
    }
}

TEST_CASE("randomized slicer") {
    RandomStream r(3);
    const LatticeBasis b = random_lattice(6, r);
    const ShortVectorList rv = relevant_vectors(b);
    const CosetSampler sampler(b);
    for (int k = 0; k < 30; ++k) {
        const RealVec t = random_target(6, r, 6.0);
        RandomStream rs(100 + k);
        const SlicerOutcome o = randomized_slice(sampler, rv, t, 1, default_width(b), rs);
        CHECK(norm(sub(t, o.s)) == doctest::Approx(std::sqrt(cvp_exact_solve(b, t).dist_sq)).epsilon(1e-9));
        CHECK(b.contains(o.s, 1e-6));
        CHECK(o.best_dist_trace.size() == 1);
    }

    // At vanishing width the rerandomization is nearest-plane rounding, so
    // one round is the plain slicer applied to the rounded target.
    const ShortVectorList l = enumerate_short_vectors(b, list_size(1.1, 6));
    const RealVec t0 = random_target(6, r);
    const std::vector<long long> z = babai_coefficients(b, t0);
    const RealVec rounded = sub(t0, b.combine(std::span<const long long>(z)));
    RandomStream rs(5);
    const SlicerOutcome a = randomized_slice(b, l, t0, 1, 1e-12, rs);
    const SlicerOutcome c = iterative_slice(l, rounded);
    CHECK(norm(sub(t0, a.s)) == doctest::Approx(norm(c.t_reduced)));

    RandomStream bad(1);
    CHECK_THROWS_AS(randomized_slice(b, l, t0, 0, 1.0, bad), InputError);
}

TEST_CASE("property: budget monotonicity under paired streams") {
    RandomStream r(4);
    const LatticeBasis b = random_lattice(8, r);
    const ShortVectorList l = enumerate_short_vectors(b, list_size(1.05, 8));
    const CosetSampler sampler(b);
    for (int k = 0; k < 50; ++k) {
        const RealVec t = uniform_fundamental_target(b, r);
        RandomStream rs(1000 + k);
        const SlicerOutcome o = randomized_slice(sampler, l, t, 12, default_width(b), rs);
        REQUIRE(o.best_dist_trace.size() == 12);
        for (std::size_t i = 1; i < 12; ++i) CHECK(o.best_dist_trace[i] <= o.best_dist_trace[i - 1]);
        CHECK(norm(sub(t, o.s)) == doctest::Approx(o.best_dist_trace.back()));
        // Prefix: a smaller budget with the same stream gives the same trace.
        RandomStream rs2(1000 + k);
        const SlicerOutcome p = randomized_slice(sampler, l, t, 5, default_width(b), rs2);
        for (std::size_t i = 0; i < 5; ++i) CHECK(p.best_dist_trace[i] == o.best_dist_trace[i]);
    }
    const std::vector<SuccessStats> st = success_by_budget(b, l, {1, 2, 4, 8}, 400, default_width(b), RandomStream(9));
    for (std::size_t i = 1; i < st.size(); ++i) CHECK(st[i].successes >= st[i - 1].successes);
}

TEST_CASE("success probability") {
    RandomStream r(5);
    // Every relevant vector is in the list: guaranteed success.
    const LatticeBasis b6 = random_lattice(6, r);
    const ShortVectorList rv = relevant_vectors(b6);
    const double need = std::sqrt(rv.norms_sq.back() / rv.norms_sq.front());
    const ShortVectorList big = enumerate_within_radius(b6, std::sqrt(rv.norms_sq.back()) * (1.0 + 1e-9));
    const SuccessStats full = success_by_budget(b6, big, {1}, 300, default_width(b6), RandomStream(1)).front();
    CHECK(full.p_hat == 1.0);
    CHECK(need >= 1.0);

    const LatticeBasis b10 = random_lattice(10, r);
    const SuccessStats s = estimate_success_probability(b10, 1.2, 500, default_width(b10), RandomStream(2));
    CHECK(s.trials == 500);
    CHECK(s.p_hat == doctest::Approx(static_cast<double>(s.successes) / 500.0));
    CHECK(s.ci95.first <= s.p_hat);
    CHECK(s.ci95.second >= s.p_hat);
    CHECK(s.list_size == list_size(1.2, 10));
    CHECK(s.dim == 10);
    // Thread count does not change the outcome.
    CHECK(estimate_success_probability(b10, 1.2, 200, 1.5, RandomStream(3), 1).successes ==
          estimate_success_probability(b10, 1.2, 200, 1.5, RandomStream(3), 3).successes);

    CHECK_THROWS_AS(estimate_success_probability(b10, 1.2, 0, 1.0, RandomStream(2)), InputError);
    CHECK_THROWS_AS(estimate_success_probability(b10, 1.2, 99, 1.0, RandomStream(2)), InputError);
    RandomStream r13(6);
    const LatticeBasis b13 = random_lattice(13, r13);
    CHECK_THROWS_AS(estimate_success_probability(b13, 1.1, 100, 1.0, RandomStream(2)), ResourceError);
}

TEST_CASE("wilson interval") {
    const auto [lo, hi] = wilson_interval(50, 100);
    CHECK(lo == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(hi == doctest::Approx(0.5962).epsilon(1e-3));
    const auto [l0, h0] = wilson_interval(0, 100);
    CHECK(l0 == 0.0);
    CHECK(h0 > 0.0);
    const auto [l1, h1] = wilson_interval(100, 100);
    CHECK(h1 == doctest::Approx(1.0));
    CHECK(l1 < 1.0);
}

TEST_CASE("phase scan") {
    const LatticeBasis z8 = LatticeBasis::identity(8);
    const std::vector<double> grid{0.2, 0.6, 1.0, 1.4, 1.8, 2.2, 3.0, 3.4};
    const std::vector<PhasePoint> pts = phase_scan(z8, 1.0 + 1e-9, grid, 400, RandomStream(1));
    REQUIRE(pts.size() == grid.size());
    const double gh = gh_radius(z8);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts[i].norm == grid[i]);
        if (pts[i].missing) {
            CHECK(std::isnan(pts[i].probability));
            continue;
        }
        CHECK(pts[i].samples == 400);
        if (grid[i] + pts[i].bin_width < 0.5 / gh) CHECK(pts[i].probability == 0.0);
        if (grid[i] >= 3.0) CHECK(pts[i].probability >= 0.99);
        if (i > 0 && !pts[i - 1].missing) {
            const double s = std::sqrt(0.25 / 400.0);
            CHECK(pts[i].probability >= pts[i - 1].probability - 3.0 * s);
        }
    }
    CHECK_THROWS_AS(phase_scan(z8, 1.1, {1.0, 0.5}, 10, RandomStream(1)), InputError);
    CHECK_THROWS_AS(phase_scan(LatticeBasis::identity(17), 1.1, {1.0}, 10, RandomStream(1)), ResourceError);
}
