#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vslicer/errors.hpp"
#include "vslicer/lattice.hpp"

namespace vslicer {

namespace {

// Depth-first Schnorr-Euchner style enumeration of all x in Z^d with
// ||sum_i x_i b_i - t||^2 <= bound, where t has Gram-Schmidt coordinates tau.
// The visitor may shrink the bound.
class Enumerator {
public:
    Enumerator(const GramSchmidt& g, std::vector<double> bstar_sq, std::vector<double> tau,
               bool half_space, std::uint64_t budget)
        : g_(g),
          dim_(g.dim),
          bsq_(std::move(bstar_sq)),
          tau_(std::move(tau)),
          half_(half_space),
          budget_(budget),
          x_(static_cast<std::size_t>(dim_), 0) {}

    template <class Visitor>
    void run(double& bound, Visitor&& visit) {
        bound_ = &bound;
        recurse(dim_ - 1, 0.0, true, visit);
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    template <class Visitor>
    void recurse(int level, double partial, bool higher_zero, Visitor& visit) {
        double center = tau_[static_cast<std::size_t>(level)];
        for (int i = level + 1; i < dim_; ++i) {
            const long long xi = x_[static_cast<std::size_t>(i)];
            if (xi != 0) center -= static_cast<double>(xi) * g_.mu_at(i, level);
        }
        const double b = bsq_[static_cast<std::size_t>(level)];
        const bool only_nonneg = half_ && higher_zero;
        const long long start = only_nonneg ? std::max<long long>(0, std::llround(center)) : std::llround(center);

        auto visit_value = [&](long long x) {
            if (++nodes_ > budget_) {
                throw ResourceError("enumeration node budget (" + std::to_string(budget_) + ") exceeded");
            }
            const double y = static_cast<double>(x) - center;
            const double nd = partial + y * y * b;
            if (nd > *bound_) return false;
            x_[static_cast<std::size_t>(level)] = x;
            if (level == 0) {
                visit(x_, nd, *bound_);
            } else {
                recurse(level - 1, nd, higher_zero && x == 0, visit);
            }
            return true;
        };
        // Upward from the rounded center, then downward. Each direction stops
        // at the first value outside the bound (the partial distance is convex in x).
        for (long long x = start;; ++x) {
            if (!visit_value(x)) {
                if (x > center) break;
            }
        }
        const long long lowest = only_nonneg ? 0 : std::numeric_limits<long long>::min();
        for (long long x = start - 1; x >= lowest; --x) {
            if (!visit_value(x)) {
                if (x < center) break;
            }
        }
        x_[static_cast<std::size_t>(level)] = 0;
    }

    const GramSchmidt& g_;
    int dim_;
    std::vector<double> bsq_;
    std::vector<double> tau_;
    bool half_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<long long> x_;
    double* bound_ = nullptr;
};

std::vector<double> gso_coordinates(const GramSchmidt& g, VecView t, double lattice_scale) {
    std::vector<double> tau(static_cast<std::size_t>(g.dim));
    for (int j = 0; j < g.dim; ++j) {
        tau[static_cast<std::size_t>(j)] =
            dot(t, g.bstar_row(j)) / (g.bstar_sq[static_cast<std::size_t>(j)] * lattice_scale);
    }
    return tau;
}

struct PairEntry {
    std::vector<long long> coeffs;  // canonical representative
    RealVec vec;
    double nsq;
};

bool pair_less(const PairEntry& a, const PairEntry& b) {
    if (a.nsq != b.nsq) return a.nsq < b.nsq;
    return a.coeffs < b.coeffs;
}

// Canonical representative of {v, -v}: first non-zero coefficient positive.
void canonicalize(PairEntry& e) {
    for (long long c : e.coeffs) {
        if (c == 0) continue;
        if (c < 0) {
            for (long long& x : e.coeffs) x = -x;
            for (double& x : e.vec) x = -x;
        }
        return;
    }
}

ShortVectorList assemble(int dim, std::vector<PairEntry> pairs) {
    std::sort(pairs.begin(), pairs.end(), pair_less);
    ShortVectorList out;
    out.dim = dim;
    out.vectors.reserve(2 * pairs.size());
    out.coeffs.reserve(2 * pairs.size());
    out.norms_sq.reserve(2 * pairs.size());
    for (PairEntry& p : pairs) {
        RealVec neg = scaled(p.vec, -1.0);
        std::vector<long long> negc(p.coeffs.size());
        std::transform(p.coeffs.begin(), p.coeffs.end(), negc.begin(), [](long long c) { return -c; });
        out.vectors.push_back(std::move(p.vec));
        out.coeffs.push_back(std::move(p.coeffs));
        out.norms_sq.push_back(p.nsq);
        out.vectors.push_back(std::move(neg));
        out.coeffs.push_back(std::move(negc));
        out.norms_sq.push_back(p.nsq);
    }
    if (!out.norms_sq.empty()) {
        out.lambda1 = std::sqrt(out.norms_sq.front());
        out.alpha_effective = std::sqrt(out.norms_sq.back()) / out.lambda1;
    }
    return out;
}

std::vector<PairEntry> pairs_within_radius(const LatticeBasis& basis, double radius, std::uint64_t budget) {
    const GramSchmidt& g = basis.gso();
    const int d = basis.dim();
    Enumerator en(g, g.bstar_sq, std::vector<double>(static_cast<std::size_t>(d), 0.0), true, budget);
    const double r2 = radius * radius;
    double bound = r2 * (1.0 + 1e-9);
    std::vector<PairEntry> pairs;
    en.run(bound, [&](const std::vector<long long>& x, double, double&) {
        if (std::all_of(x.begin(), x.end(), [](long long c) { return c == 0; })) return;
        PairEntry e{x, basis.combine(std::span<const long long>(x)), 0.0};
        e.nsq = norm_sq(e.vec);
        if (e.nsq > r2 * (1.0 + 1e-12)) return;
        canonicalize(e);
        pairs.push_back(std::move(e));
    });
    return pairs;
}

}  // namespace

ShortVectorList enumerate_within_radius(const LatticeBasis& basis, double radius, std::uint64_t node_budget) {
    if (!(radius > 0.0)) throw InputError("enumerate_within_radius: radius must be positive");
    return assemble(basis.dim(), pairs_within_radius(basis, radius, node_budget));
}

ShortVectorList enumerate_short_vectors(const LatticeBasis& basis, std::size_t count_target,
                                        std::uint64_t node_budget) {
    if (count_target < 2 || count_target % 2 != 0) {
        throw InputError("enumerate_short_vectors: count_target must be even and >= 2");
    }
    const int d = basis.dim();
    const std::size_t pairs_needed = count_target / 2;
    // Expected number of lattice points in radius R is about (R / gh)^d.
    double radius = gh_radius(basis) * std::pow(1.3 * static_cast<double>(count_target), 1.0 / d);
    for (;;) {
        std::vector<PairEntry> pairs = pairs_within_radius(basis, radius, node_budget);
        if (pairs.size() >= pairs_needed) {
            std::sort(pairs.begin(), pairs.end(), pair_less);
            pairs.resize(pairs_needed);
            return assemble(d, std::move(pairs));
        }
        const double found = std::max<double>(1.0, 2.0 * static_cast<double>(pairs.size()));
        const double growth = std::max(2.0, 1.3 * static_cast<double>(count_target) / found);
        radius *= std::pow(growth, 1.0 / d);
    }
}

ShortVectorList relevant_vectors(const LatticeBasis& basis) {
    const int d = basis.dim();
    if (d > kMaxExactDim) {
        throw ResourceError("relevant_vectors: dimension " + std::to_string(d) + " exceeds " +
                            std::to_string(kMaxExactDim));
    }
    const GramSchmidt& g = basis.gso();
    std::vector<double> bsq2(g.bstar_sq);
    for (double& b : bsq2) b *= 4.0;

    std::vector<PairEntry> relevant;
    const std::uint32_t cosets = 1U << d;
    for (std::uint32_t mask = 1; mask < cosets; ++mask) {
        std::vector<long long> c(static_cast<std::size_t>(d), 0);
        for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = (mask >> i) & 1U;
        const RealVec p = basis.combine(std::span<const long long>(c));
        // Minimize ||p + 2 B y|| = ||2 B y - (-p)|| over y.
        const RealVec minus_p = scaled(p, -1.0);
        Enumerator en(g, bsq2, gso_coordinates(g, minus_p, 2.0), false, kEnumerationNodeBudget);
        double best = norm_sq(p);
        double bound = best * (1.0 + 1e-9);
        std::vector<PairEntry> cands;
        en.run(bound, [&](const std::vector<long long>& y, double, double& bnd) {
            PairEntry e;
            e.coeffs.resize(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) {
                e.coeffs[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)] + 2 * y[static_cast<std::size_t>(i)];
            }
            e.vec = basis.combine(std::span<const long long>(e.coeffs));
            e.nsq = norm_sq(e.vec);
            if (e.nsq < best) {
                best = e.nsq;
                bnd = best * (1.0 + 1e-9);
            }
            if (e.nsq <= best * (1.0 + 1e-9)) cands.push_back(std::move(e));
        });
        std::erase_if(cands, [&](const PairEntry& e) { return e.nsq > best * (1.0 + 1e-9); });
        if (cands.size() == 2) {
            PairEntry e = std::move(cands.front());
            canonicalize(e);
            relevant.push_back(std::move(e));
        }
    }
    return assemble(d, std::move(relevant));
}

std::vector<long long> babai_coefficients(const LatticeBasis& basis, VecView t) {
    const int d = basis.dim();
    if (static_cast<int>(t.size()) != d) throw InputError("babai_coefficients: dimension mismatch");
    const GramSchmidt& g = basis.gso();
    RealVec cur(t.begin(), t.end());
    std::vector<long long> x(static_cast<std::size_t>(d), 0);
    for (int i = d - 1; i >= 0; --i) {
        const long long xi = std::llround(dot(cur, g.bstar_row(i)) / g.bstar_sq[static_cast<std::size_t>(i)]);
        x[static_cast<std::size_t>(i)] = xi;
        if (xi != 0) {
            const VecView b = basis.row(i);
            for (int k = 0; k < d; ++k) cur[static_cast<std::size_t>(k)] -= static_cast<double>(xi) * b[k];
        }
    }
    return x;
}

CvpSolution cvp_exact_solve(const LatticeBasis& basis, VecView t, std::uint64_t node_budget) {
    const int d = basis.dim();
    if (d > kMaxExactDim) {
        throw ResourceError("cvp_exact: dimension " + std::to_string(d) + " exceeds " + std::to_string(kMaxExactDim));
    }
    if (static_cast<int>(t.size()) != d) throw InputError("cvp_exact: dimension mismatch");
    const GramSchmidt& g = basis.gso();

    CvpSolution best;
    best.coeffs = babai_coefficients(basis, t);
    best.vector = basis.combine(std::span<const long long>(best.coeffs));
    best.dist_sq = norm_sq(sub(t, best.vector));

    auto tie_tol = [](double v) { return 1e-12 * v + 1e-24; };
    double bound = best.dist_sq * (1.0 + 1e-9) + 1e-18;
    Enumerator en(g, g.bstar_sq, gso_coordinates(g, t, 1.0), false, node_budget);
    en.run(bound, [&](const std::vector<long long>& x, double, double& bnd) {
        RealVec v = basis.combine(std::span<const long long>(x));
        const double dist = norm_sq(sub(t, v));
        const double tol = tie_tol(best.dist_sq);
        const bool closer = dist < best.dist_sq - tol;
        const bool tie_win = !closer && std::fabs(dist - best.dist_sq) <= tol && x < best.coeffs;
        if (closer || tie_win) {
            best.dist_sq = closer ? dist : std::min(dist, best.dist_sq);
            best.coeffs = x;
            best.vector = std::move(v);
            bnd = best.dist_sq * (1.0 + 1e-9) + 1e-18;
        }
    });
    return best;
}

RealVec cvp_exact(const LatticeBasis& basis, VecView t) { return cvp_exact_solve(basis, t).vector; }

}  // namespace vslicer
