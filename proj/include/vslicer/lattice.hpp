#pragma once

#include <cstdint>
#include <vector>

#include "vslicer/basis.hpp"
#include "vslicer/geometry.hpp"
#include "vslicer/random.hpp"

namespace vslicer {

/// Lattice vectors closed under negation, norm-ascending, with each pair
/// (v, -v) stored adjacently.
struct ShortVectorList {
    int dim = 0;
    std::vector<RealVec> vectors;
    std::vector<std::vector<long long>> coeffs;  // basis coefficients of vectors[i]
    std::vector<double> norms_sq;
    double lambda1 = 0.0;          // shortest norm in the list
    double alpha_effective = 0.0;  // max norm / lambda1

    std::size_t size() const { return vectors.size(); }
    bool empty() const { return vectors.empty(); }
};

/// Knapsack-form basis, LLL-reduced (delta 0.99) and rescaled to determinant 1.
LatticeBasis random_lattice(int d, RandomStream& rng);

/// List size used for approximate Voronoi cells: round(alpha^d) with a floor
/// of 2(d+1), rounded up to an even number so the list is negation-closed.
std::size_t list_size(double alpha, int d);

inline constexpr std::uint64_t kEnumerationNodeBudget = 1'000'000'000ULL;

/// Exactly count_target shortest non-zero vectors (count_target even).
/// Exhaustive enumeration; ties broken by coefficient-lexicographic order.
ShortVectorList enumerate_short_vectors(const LatticeBasis& basis, std::size_t count_target,
                                        std::uint64_t node_budget = kEnumerationNodeBudget);

/// Every lattice vector with norm <= radius, excluding 0, same ordering rules.
ShortVectorList enumerate_within_radius(const LatticeBasis& basis, double radius,
                                        std::uint64_t node_budget = kEnumerationNodeBudget);

/// Voronoi-relevant vectors: unique shortest +-pairs of the cosets of L/2L. d <= 12.
ShortVectorList relevant_vectors(const LatticeBasis& basis);

struct CvpSolution {
    RealVec vector;
    std::vector<long long> coeffs;
    double dist_sq = 0.0;
};

/// Exact closest lattice vector to t (d <= 12). Ties go to the
/// lexicographically smallest coefficient vector.
CvpSolution cvp_exact_solve(const LatticeBasis& basis, VecView t,
                            std::uint64_t node_budget = kEnumerationNodeBudget);
RealVec cvp_exact(const LatticeBasis& basis, VecView t);

/// Nearest-plane (Babai) coefficients for t.
std::vector<long long> babai_coefficients(const LatticeBasis& basis, VecView t);

inline constexpr int kMaxExactDim = 12;

}  // namespace vslicer
