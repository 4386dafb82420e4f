#include "vslicer/slicer.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vslicer/errors.hpp"

namespace vslicer {

namespace {

// Strict improvement 2<t,v> - <v,v> > 0, with a relative margin so rounding
// cannot produce a cycle of zero-gain steps.
bool improves(VecView t, VecView v, double vv) { return 2.0 * dot(t, v) - vv > 1e-12 * vv; }

void check_list(const ShortVectorList& list, VecView t, const char* who) {
    if (list.empty()) throw InputError(std::string(who) + ": list must be non-empty");
    if (static_cast<int>(t.size()) != list.dim) throw InputError(std::string(who) + ": dimension mismatch");
}

}  // namespace

bool reducible(const ShortVectorList& list, VecView t) {
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (improves(t, list.vectors[i], list.norms_sq[i])) return true;
    }
    return false;
}

SlicerOutcome iterative_slice(const ShortVectorList& list, VecView t) {
    check_list(list, t, "iterative_slice");
    const std::size_t d = t.size();
    SlicerOutcome out;
    out.t_reduced.assign(t.begin(), t.end());
    out.s_coeffs.assign(d, 0);
    out.norm_trace.push_back(norm(t));
    for (;;) {
        ++out.passes;
        bool reduced = false;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const RealVec& v = list.vectors[i];
            if (!improves(out.t_reduced, v, list.norms_sq[i])) continue;
            for (std::size_t k = 0; k < d; ++k) out.t_reduced[k] -= v[k];
            const std::vector<long long>& c = list.coeffs[i];
            for (std::size_t k = 0; k < d; ++k) out.s_coeffs[k] += c[k];
            ++out.reductions;
            out.norm_trace.push_back(norm(out.t_reduced));
            reduced = true;
            break;
        }
        if (!reduced) break;
    }
    out.s = sub(t, out.t_reduced);
    return out;
}

SlicerOutcome randomized_slice(const CosetSampler& sampler, const ShortVectorList& list, VecView t,
                               int max_rerandomizations, double width_s, RandomStream& rng) {
    check_list(list, t, "randomized_slice");
    if (max_rerandomizations < 1) throw InputError("randomized_slice: max_rerandomizations must be >= 1");
    if (!(width_s >= 0.0)) throw InputError("randomized_slice: width must be non-negative");
    const std::size_t d = t.size();

    SlicerOutcome best;
    best.s.assign(d, 0.0);
    best.s_coeffs.assign(d, 0);
    best.t_reduced.assign(t.begin(), t.end());
    double best_dist_sq = norm_sq(t);  // ||t - s|| with s = 0
    std::int64_t reductions = 0;
    std::int64_t passes = 0;
    std::vector<double> dist_trace;
    dist_trace.reserve(static_cast<std::size_t>(max_rerandomizations));

    for (int k = 0; k < max_rerandomizations; ++k) {
        const CosetSample sample = sampler.sample(t, width_s, rng);
        SlicerOutcome run = iterative_slice(list, sample.point);
        reductions += run.reductions;
        passes += run.passes;
        const double nsq = norm_sq(run.t_reduced);
        if (nsq < best_dist_sq) {
            best_dist_sq = nsq;
            // s = (t - t') + (t' - t'') with t - t' = sum z_i b_i.
            for (std::size_t i = 0; i < d; ++i) run.s_coeffs[i] += sample.shift[i];
            best.s_coeffs = std::move(run.s_coeffs);
            best.s = sub(t, run.t_reduced);
            best.t_reduced = std::move(run.t_reduced);
            best.norm_trace = std::move(run.norm_trace);
        }
        dist_trace.push_back(std::sqrt(best_dist_sq));
    }
    best.reductions = reductions;
    best.passes = passes;
    best.best_dist_trace = std::move(dist_trace);
    return best;
}

SlicerOutcome randomized_slice(const LatticeBasis& basis, const ShortVectorList& list, VecView t,
                               int max_rerandomizations, double width_s, RandomStream& rng) {
    return randomized_slice(CosetSampler(basis), list, t, max_rerandomizations, width_s, rng);
}

double SuccessStats::binomial_sigma() const {
    if (trials == 0) return 0.0;
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
    if (trials <= 0) return {0.0, 1.0};
    const auto n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
    const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

RealVec uniform_fundamental_target(const LatticeBasis& basis, RandomStream& rng) {
    std::vector<double> u(static_cast<std::size_t>(basis.dim()));
    for (double& x : u) x = rng.uniform01();
    return basis.combine(std::span<const double>(u));
}

double default_width(const LatticeBasis& basis) { return 2.0 * gh_radius(basis); }

std::vector<SuccessStats> success_by_budget(const LatticeBasis& basis, const ShortVectorList& list,
                                            const std::vector<int>& budgets, std::int64_t trials,
                                            double width_s, const RandomStream& rng, int threads) {
    if (trials < 100) throw InputError("success probability: trials must be >= 100");
    if (budgets.empty()) throw InputError("success probability: no budgets given");
    for (int k : budgets) {
        if (k < 1) throw InputError("success probability: budgets must be >= 1");
    }
    if (!(width_s > 0.0)) throw InputError("success probability: width must be positive");
    if (basis.dim() > kMaxExactDim) {
        throw ResourceError("success probability: dimension " + std::to_string(basis.dim()) +
                            " exceeds the exact-CVP limit " + std::to_string(kMaxExactDim));
    }
    if (list.dim != basis.dim()) throw InputError("success probability: list and basis dimensions differ");

    const int max_budget = *std::max_element(budgets.begin(), budgets.end());
    const CosetSampler sampler(basis);
    const std::size_t nb = budgets.size();
    std::vector<std::int64_t> successes(nb, 0);
    const int nt = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel num_threads(nt)
    {
        std::vector<std::int64_t> local(nb, 0);
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t k = 0; k < trials; ++k) {
            RandomStream ts = rng.split(static_cast<std::uint64_t>(k));
            const RealVec t = uniform_fundamental_target(basis, ts);
            const double exact = std::sqrt(cvp_exact_solve(basis, t).dist_sq);
            const SlicerOutcome out = randomized_slice(sampler, list, t, max_budget, width_s, ts);
            for (std::size_t b = 0; b < nb; ++b) {
                const double got = out.best_dist_trace[static_cast<std::size_t>(budgets[b] - 1)];
                if (std::fabs(got - exact) <= 1e-9) ++local[b];
            }
        }
#pragma omp critical
        for (std::size_t b = 0; b < nb; ++b) successes[b] += local[b];
    }

    std::vector<SuccessStats> stats(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        SuccessStats& s = stats[b];
        s.trials = trials;
        s.successes = successes[b];
        s.p_hat = static_cast<double>(s.successes) / static_cast<double>(trials);
        s.ci95 = wilson_interval(s.successes, trials);
        s.alpha = list.alpha_effective;
        s.dim = basis.dim();
        s.width_s = width_s;
        s.budget = budgets[b];
        s.list_size = list.size();
    }
    return stats;
}

SuccessStats estimate_success_probability(const LatticeBasis& basis, double alpha, std::int64_t trials,
                                          double width_s, const RandomStream& rng, int threads) {
    if (trials < 100) throw InputError("estimate_success_probability: trials must be >= 100");
    if (!(alpha > 1.0)) throw InputError("estimate_success_probability: alpha must exceed 1");
    if (basis.dim() > kMaxExactDim) {
        throw ResourceError("estimate_success_probability: dimension exceeds the exact-CVP limit");
    }
    const ShortVectorList list = enumerate_short_vectors(basis, list_size(alpha, basis.dim()));
    SuccessStats s = success_by_budget(basis, list, {1}, trials, width_s, rng, threads).front();
    s.alpha = alpha;
    return s;
}

std::vector<PhasePoint> phase_scan(const LatticeBasis& basis, const ShortVectorList& list,
                                   const std::vector<double>& norm_grid, std::int64_t samples_per_point,
                                   const RandomStream& rng, int threads) {
    const int d = basis.dim();
    if (d > 16) throw ResourceError("phase_scan: dimension exceeds 16");
    if (samples_per_point < 1) throw InputError("phase_scan: samples_per_point must be >= 1");
    if (norm_grid.empty()) throw InputError("phase_scan: empty norm grid");
    for (std::size_t i = 0; i < norm_grid.size(); ++i) {
        if (!(norm_grid[i] >= 0.0)) throw InputError("phase_scan: grid values must be non-negative");
        if (i > 0 && !(norm_grid[i] > norm_grid[i - 1])) throw InputError("phase_scan: grid must be increasing");
    }
    const double gh = gh_radius(basis);
    const CosetSampler sampler(basis);
    std::vector<PhasePoint> points(norm_grid.size());
    const auto grid_n = static_cast<std::int64_t>(norm_grid.size());
    const int nt = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for num_threads(nt) schedule(dynamic, 1)
    for (std::int64_t gi = 0; gi < grid_n; ++gi) {
        const auto i = static_cast<std::size_t>(gi);
        PhasePoint& p = points[i];
        p.norm = norm_grid[i];
        p.bin_width = i + 1 < norm_grid.size() ? norm_grid[i + 1] - norm_grid[i]
                                               : (i > 0 ? norm_grid[i] - norm_grid[i - 1] : 0.1);
        const double lo = p.norm * gh;
        const double hi = (p.norm + p.bin_width) * gh;
        // Width whose continuous-Gaussian norm concentrates at the bin centre.
        const double width = std::max(1e-3 * gh, 0.5 * (lo + hi) * std::sqrt(2.0 * std::numbers::pi / d));
        RandomStream ps = rng.split(static_cast<std::uint64_t>(gi));
        std::int64_t hits = 0;
        while (p.samples < samples_per_point && p.attempts < kPhaseScanAttemptLimit) {
            ++p.attempts;
            const RealVec t = uniform_fundamental_target(basis, ps);
            const CosetSample c = sampler.sample(t, width, ps);
            const double r = norm(c.point);
            if (r < lo || r >= hi) continue;
            ++p.samples;
            if (reducible(list, c.point)) ++hits;
        }
        if (p.samples < samples_per_point) {
            p.missing = true;
            p.probability = std::numeric_limits<double>::quiet_NaN();
        } else {
            p.probability = static_cast<double>(hits) / static_cast<double>(p.samples);
        }
    }
    return points;
}

std::vector<PhasePoint> phase_scan(const LatticeBasis& basis, double alpha, const std::vector<double>& norm_grid,
                                   std::int64_t samples_per_point, const RandomStream& rng, int threads) {
    if (!(alpha > 1.0)) throw InputError("phase_scan: alpha must exceed 1");
    const ShortVectorList list = enumerate_short_vectors(basis, list_size(alpha, basis.dim()));
    return phase_scan(basis, list, norm_grid, samples_per_point, rng, threads);
}

}  // namespace vslicer
