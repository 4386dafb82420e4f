#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <utility>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "vslicer/basis.hpp"
#include "vslicer/errors.hpp"
#include "vslicer/lattice.hpp"

namespace vslicer {

namespace {

std::size_t at(int dim, int i, int j) { return static_cast<std::size_t>(i) * dim + j; }

// Gauss-Jordan inverse with partial pivoting; returns an empty vector if singular.
std::vector<double> invert(int dim, std::vector<double> a) {
    std::vector<double> inv(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) inv[at(dim, i, i)] = 1.0;
    for (int col = 0; col < dim; ++col) {
        int piv = col;
        for (int r = col + 1; r < dim; ++r) {
            if (std::fabs(a[at(dim, r, col)]) > std::fabs(a[at(dim, piv, col)])) piv = r;
        }
        if (a[at(dim, piv, col)] == 0.0) return {};
        if (piv != col) {
            for (int j = 0; j < dim; ++j) {
                std::swap(a[at(dim, piv, j)], a[at(dim, col, j)]);
                std::swap(inv[at(dim, piv, j)], inv[at(dim, col, j)]);
            }
        }
        const double p = 1.0 / a[at(dim, col, col)];
        for (int j = 0; j < dim; ++j) {
            a[at(dim, col, j)] *= p;
            inv[at(dim, col, j)] *= p;
        }
        for (int r = 0; r < dim; ++r) {
            if (r == col) continue;
            const double f = a[at(dim, r, col)];
            if (f == 0.0) continue;
            for (int j = 0; j < dim; ++j) {
                a[at(dim, r, j)] -= f * a[at(dim, col, j)];
                inv[at(dim, r, j)] -= f * inv[at(dim, col, j)];
            }
        }
    }
    return inv;
}

}  // namespace

GramSchmidt gram_schmidt(int dim, std::span<const double> rows) {
    GramSchmidt g;
    g.dim = dim;
    g.mu.assign(static_cast<std::size_t>(dim) * dim, 0.0);
    g.bstar.assign(rows.begin(), rows.end());
    g.bstar_sq.assign(static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i) {
        g.mu[at(dim, i, i)] = 1.0;
        const VecView bi = rows.subspan(at(dim, i, 0), static_cast<std::size_t>(dim));
        double* out = g.bstar.data() + at(dim, i, 0);
        for (int j = 0; j < i; ++j) {
            const VecView bj = g.bstar_row(j);
            const double m = dot(bi, bj) / g.bstar_sq[static_cast<std::size_t>(j)];
            g.mu[at(dim, i, j)] = m;
            for (int k = 0; k < dim; ++k) out[k] -= m * bj[k];
        }
        g.bstar_sq[static_cast<std::size_t>(i)] = norm_sq(g.bstar_row(i));
    }
    return g;
}

LatticeBasis::LatticeBasis(int dim, std::vector<double> rows) : dim_(dim), rows_(std::move(rows)) {
    if (dim_ < 1) throw InputError("LatticeBasis: dimension must be >= 1");
    if (rows_.size() != static_cast<std::size_t>(dim_) * dim_) {
        throw InputError("LatticeBasis: expected a " + std::to_string(dim_) + "x" + std::to_string(dim_) +
                         " matrix");
    }
    for (double x : rows_) {
        if (!std::isfinite(x)) throw InputError("LatticeBasis: non-finite entry");
    }
    gso_ = gram_schmidt(dim_, rows_);
    double log_det = 0.0;
    for (int i = 0; i < dim_; ++i) {
        const double bsq = gso_.bstar_sq[static_cast<std::size_t>(i)];
        const double rsq = norm_sq(row(i));
        if (!(bsq > 0.0) || !(rsq > 0.0)) throw InputError("LatticeBasis: rows are linearly dependent");
        // A row whose orthogonal part is below rounding noise lies in the span of the earlier rows.
        if (bsq < 1e-20 * rsq) throw InputError("LatticeBasis: rows are numerically linearly dependent");
        log_det += 0.5 * std::log(bsq);
    }
    det_abs_ = std::exp(log_det);
    inverse_ = invert(dim_, rows_);
    if (inverse_.empty()) throw InputError("LatticeBasis: singular matrix");
}

LatticeBasis LatticeBasis::identity(int dim) {
    std::vector<double> rows(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) rows[at(dim, i, i)] = 1.0;
    return LatticeBasis(dim, std::move(rows));
}

RealVec LatticeBasis::combine(std::span<const double> coeffs) const {
    RealVec out(static_cast<std::size_t>(dim_), 0.0);
    for (int i = 0; i < dim_; ++i) {
        const double c = coeffs[static_cast<std::size_t>(i)];
        if (c == 0.0) continue;
        for (int k = 0; k < dim_; ++k) out[static_cast<std::size_t>(k)] += c * rows_[at(dim_, i, k)];
    }
    return out;
}

RealVec LatticeBasis::combine(std::span<const long long> coeffs) const {
    RealVec out(static_cast<std::size_t>(dim_), 0.0);
    for (int i = 0; i < dim_; ++i) {
        const auto c = static_cast<double>(coeffs[static_cast<std::size_t>(i)]);
        if (c == 0.0) continue;
        for (int k = 0; k < dim_; ++k) out[static_cast<std::size_t>(k)] += c * rows_[at(dim_, i, k)];
    }
    return out;
}

RealVec LatticeBasis::coordinates(VecView x) const {
    if (static_cast<int>(x.size()) != dim_) throw InputError("coordinates: dimension mismatch");
    // x = c^T B  =>  c^T = x^T B^{-1}
    RealVec c(static_cast<std::size_t>(dim_), 0.0);
    for (int k = 0; k < dim_; ++k) {
        const double xk = x[static_cast<std::size_t>(k)];
        if (xk == 0.0) continue;
        for (int i = 0; i < dim_; ++i) c[static_cast<std::size_t>(i)] += xk * inverse_[at(dim_, k, i)];
    }
    return c;
}

bool LatticeBasis::contains(VecView x, double tol) const {
    for (double c : coordinates(x)) {
        if (std::fabs(c - std::round(c)) > tol) return false;
    }
    return true;
}

LatticeBasis LatticeBasis::scaled(double c) const {
    if (!(c > 0.0)) throw InputError("LatticeBasis::scaled: factor must be positive");
    std::vector<double> rows = rows_;
    for (double& x : rows) x *= c;
    LatticeBasis out(dim_, std::move(rows));
    if (lambda1_) out.set_lambda1(*lambda1_ * c);
    return out;
}

namespace {

// One LLL pass over scalar type T (double, or multiprecision for knapsack
// bases). Row k of the GSO is recomputed from the explicit b* vectors by
// modified Gram-Schmidt whenever k is visited, so large entries do not
// cancel to zero the way the incremental Gram update does.
template <class T>
void lll_pass(int dim, std::vector<T>& b, double delta) {
    using std::abs;
    using std::round;
    const auto n = static_cast<std::size_t>(dim);
    std::vector<T> mu(n * n, T(0));
    std::vector<T> bstar(n * n, T(0));
    std::vector<T> bsq(n, T(0));
    auto m = [&](int i, int j) -> T& { return mu[at(dim, i, j)]; };

    auto compute_row = [&](int k) {
        T* r = bstar.data() + at(dim, k, 0);
        for (int c = 0; c < dim; ++c) r[c] = b[at(dim, k, c)];
        for (int j = 0; j < k; ++j) {
            const T* sj = bstar.data() + at(dim, j, 0);
            T s(0);
            for (int c = 0; c < dim; ++c) s += r[c] * sj[c];
            const T mkj = s / bsq[static_cast<std::size_t>(j)];
            m(k, j) = mkj;
            for (int c = 0; c < dim; ++c) r[c] -= mkj * sj[c];
        }
        T s(0);
        for (int c = 0; c < dim; ++c) s += r[c] * r[c];
        if (!(s > 0)) throw DegenerateError("lll_reduce: basis vectors are linearly dependent");
        bsq[static_cast<std::size_t>(k)] = s;
    };
    // Size reduction, repeated while large quotients leave |mu| above 1/2.
    auto size_reduce = [&](int k) {
        for (int pass = 0; pass < 64; ++pass) {
            bool changed = false;
            for (int l = k - 1; l >= 0; --l) {
                if (abs(m(k, l)) <= 0.5) continue;
                const T q = round(m(k, l));
                for (int c = 0; c < dim; ++c) b[at(dim, k, c)] -= q * b[at(dim, l, c)];
                for (int i = 0; i < l; ++i) m(k, i) -= q * m(l, i);
                m(k, l) -= q;
                changed = true;
            }
            if (!changed) return;
            compute_row(k);
        }
    };

    compute_row(0);
    int k = 1;
    long long iterations = 0;
    while (k < dim) {
        if (++iterations > 50'000'000) throw ResourceError("lll_reduce: iteration limit exceeded");
        compute_row(k);
        size_reduce(k);
        const T mkk = m(k, k - 1);
        if (bsq[static_cast<std::size_t>(k)] < (delta - mkk * mkk) * bsq[static_cast<std::size_t>(k - 1)]) {
            for (int c = 0; c < dim; ++c) std::swap(b[at(dim, k, c)], b[at(dim, k - 1, c)]);
            if (k == 1) {
                compute_row(0);
            } else {
                --k;
            }
            continue;
        }
        ++k;
    }
}

}  // namespace

std::vector<double> lll_reduce(int dim, std::vector<double> rows, double delta) {
    if (rows.size() != static_cast<std::size_t>(dim) * dim) throw InputError("lll_reduce: bad matrix shape");
    if (!(delta > 0.25 && delta < 1.0)) throw InputError("lll_reduce: delta must lie in (1/4, 1)");
    if (dim == 1) return rows;
    // The incremental GSO drifts on badly scaled inputs; repeat until a
    // from-scratch check confirms the result.
    for (int attempt = 0; attempt < 32; ++attempt) {
        lll_pass(dim, rows, delta);
        if (is_lll_reduced(dim, rows, delta, 1e-6)) return rows;
    }
    throw ResourceError("lll_reduce: floating-point reduction failed to converge");
}

bool is_lll_reduced(int dim, std::span<const double> rows, double delta, double eps) {
    const GramSchmidt g = gram_schmidt(dim, rows);
    for (int i = 1; i < dim; ++i) {
        for (int j = 0; j < i; ++j) {
            if (std::fabs(g.mu_at(i, j)) > 0.5 + eps) return false;
        }
        const double m = g.mu_at(i, i - 1);
        if (g.bstar_sq[static_cast<std::size_t>(i)] <
            (delta - m * m) * g.bstar_sq[static_cast<std::size_t>(i - 1)] * (1.0 - eps)) {
            return false;
        }
    }
    return true;
}

double gh_radius(int dim, double det_abs) {
    if (dim < 1 || !(det_abs > 0.0)) throw InputError("gh_radius: invalid lattice");
    return std::exp2((std::log2(det_abs) - log2_unit_ball_volume(dim)) / dim);
}

double gh_radius(const LatticeBasis& basis) { return gh_radius(basis.dim(), basis.det_abs()); }

void write_basis(std::ostream& out, const LatticeBasis& basis) {
    const int d = basis.dim();
    out << d << '\n';
    for (int i = 0; i < d; ++i) {
        const VecView r = basis.row(i);
        for (int j = 0; j < d; ++j) {
            if (j) out << ' ';
            out << std::setprecision(17) << r[static_cast<std::size_t>(j)];
        }
        out << '\n';
    }
}

LatticeBasis read_basis(std::istream& in) {
    long long d = 0;
    if (!(in >> d) || d < 1 || d > 4096) throw InputError("basis file: missing or invalid dimension line");
    const auto dim = static_cast<int>(d);
    std::vector<double> rows(static_cast<std::size_t>(dim) * dim);
    for (double& x : rows) {
        if (!(in >> x)) throw InputError("basis file: expected " + std::to_string(dim * dim) + " entries");
    }
    std::string trailing;
    if (in >> trailing) throw InputError("basis file: unexpected trailing content '" + trailing + "'");
    return LatticeBasis(dim, std::move(rows));
}

LatticeBasis read_basis_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open basis file '" + path + "'");
    return read_basis(in);
}

void write_basis_file(const std::string& path, const LatticeBasis& basis) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write basis file '" + path + "'");
    write_basis(out, basis);
}

LatticeBasis random_lattice(int d, RandomStream& rng) {
    if (d < 2 || d > 40) throw InputError("random_lattice: d must lie in [2, 40]");
    using boost::multiprecision::mpfr_float;
    using boost::multiprecision::mpz_int;
    // q is the first prime above 2^(10 d), so reduced vectors have entries
    // near 2^10 and norms are effectively continuous. Exact integer steps
    // need 10 d bits; the rest is headroom for the GSO.
    const unsigned bits = 10u * static_cast<unsigned>(d);
    // Decimal digits; the default is process-wide, so restore it afterwards.
    const unsigned saved = mpfr_float::default_precision();
    mpfr_float::default_precision(static_cast<unsigned>(std::ceil((bits + 128u) * 0.30103)) + 1u);
    struct Restore {
        unsigned p;
        ~Restore() { mpfr_float::default_precision(p); }
    } restore{saved};

    mpz_int q = mpz_int(1) << bits;
    mpz_nextprime(q.backend().data(), q.backend().data());

    const auto n = static_cast<std::size_t>(d);
    std::vector<mpfr_float> rows(n * n, mpfr_float(0));
    rows[0] = mpfr_float(q);
    for (int i = 1; i < d; ++i) {
        // 64 spare bits make the reduction mod q uniform to 2^-64.
        mpz_int a = 0;
        for (unsigned w = 0; w < bits / 64 + 2; ++w) a = (a << 64) | mpz_int(rng.engine()());
        a %= q;
        rows[at(d, i, 0)] = mpfr_float(a);
        rows[at(d, i, i)] = 1;
    }
    lll_pass(d, rows, 0.99);
    const mpfr_float scale = exp(-log(mpfr_float(q)) / d);
    std::vector<double> out(n * n);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<double>(mpfr_float(rows[k] * scale));
    // The double image is reduced only up to rounding; a final double pass
    // fixes any boundary cases and leaves the lattice unchanged.
    return LatticeBasis(d, lll_reduce(d, std::move(out), 0.99));
}

std::size_t list_size(double alpha, int d) {
    if (!(alpha > 0.0) || d < 1) throw InputError("list_size: invalid alpha or dimension");
    const double raw = std::round(std::pow(alpha, d));
    if (!(raw < 1e12)) throw ResourceError("list_size: alpha^d is too large");
    std::size_t n = std::max(static_cast<std::size_t>(raw), static_cast<std::size_t>(2 * (d + 1)));
    if (n % 2 != 0) ++n;
    return n;
}

}  // namespace vslicer
