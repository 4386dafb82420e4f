#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vslicer/basis.hpp"
#include "vslicer/geometry.hpp"
#include "vslicer/lattice.hpp"
#include "vslicer/random.hpp"
#include "vslicer/sampling.hpp"

namespace vslicer {

struct SlicerOutcome {
    RealVec t_reduced;               // t' at termination
    RealVec s;                       // t - t', a lattice vector
    std::vector<long long> s_coeffs; // basis coefficients of s
    std::int64_t reductions = 0;     // subtraction steps (summed over rerandomizations)
    std::int64_t passes = 0;         // list scans started
    std::vector<double> norm_trace;  // ||t'|| before the first and after every reduction (single run)
    std::vector<double> best_dist_trace;  // randomized only: ||t - s|| after each rerandomization
};

/// Greedy slicer: scan L in stored order, subtract the first v with
/// ||t' - v|| < ||t'||, restart the scan; stop when a full scan finds nothing.
SlicerOutcome iterative_slice(const ShortVectorList& list, VecView t);

/// Rerandomized slicer with a fixed budget of coset samples. Keeps the s
/// minimizing ||t - s||; s starts at 0.
SlicerOutcome randomized_slice(const CosetSampler& sampler, const ShortVectorList& list, VecView t,
                               int max_rerandomizations, double width_s, RandomStream& rng);
SlicerOutcome randomized_slice(const LatticeBasis& basis, const ShortVectorList& list, VecView t,
                               int max_rerandomizations, double width_s, RandomStream& rng);

/// True iff some v in L satisfies ||t - v|| < ||t||.
bool reducible(const ShortVectorList& list, VecView t);

struct SuccessStats {
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    double p_hat = 0.0;
    std::pair<double, double> ci95{0.0, 0.0};  // Wilson score interval
    double alpha = 0.0;
    int dim = 0;
    double width_s = 0.0;
    int budget = 1;
    std::size_t list_size = 0;

    double binomial_sigma() const;
};

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.959963984540054);

/// Uniform point of the fundamental parallelepiped sum_i u_i b_i, u_i in [0, 1).
RealVec uniform_fundamental_target(const LatticeBasis& basis, RandomStream& rng);

/// Default rerandomization width: 2 * gh_radius(basis).
double default_width(const LatticeBasis& basis);

/// Success frequency of single rerandomized reductions against the exact CVP
/// oracle (d <= 12). L is the list_size(alpha, d) shortest vectors. Trial k
/// uses rng.split(k).
SuccessStats estimate_success_probability(const LatticeBasis& basis, double alpha, std::int64_t trials,
                                          double width_s, const RandomStream& rng, int threads = 0);

/// Same, for an explicit list, reporting one SuccessStats per budget.
/// Budgets are paired: trial k draws the same coset samples for every budget,
/// so budget K's run is a prefix of budget K' > K.
std::vector<SuccessStats> success_by_budget(const LatticeBasis& basis, const ShortVectorList& list,
                                            const std::vector<int>& budgets, std::int64_t trials,
                                            double width_s, const RandomStream& rng, int threads = 0);

struct PhasePoint {
    double norm = 0.0;         // lower edge of the bin, in units of gh_radius
    double bin_width = 0.0;
    double probability = 0.0;  // NaN when missing
    std::int64_t samples = 0;
    std::int64_t attempts = 0;
    bool missing = false;
};

inline constexpr std::int64_t kPhaseScanAttemptLimit = 1'000'000;

/// Empirical probability that a coset point with ||t'|| / gh in [r, r + step)
/// can be reduced by some v in L, for each r of the (ascending) grid.
std::vector<PhasePoint> phase_scan(const LatticeBasis& basis, double alpha, const std::vector<double>& norm_grid,
                                   std::int64_t samples_per_point, const RandomStream& rng, int threads = 0);
std::vector<PhasePoint> phase_scan(const LatticeBasis& basis, const ShortVectorList& list,
                                   const std::vector<double>& norm_grid, std::int64_t samples_per_point,
                                   const RandomStream& rng, int threads = 0);

}  // namespace vslicer
