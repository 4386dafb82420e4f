#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "vslicer/geometry.hpp"
#include "vslicer/random.hpp"

namespace vslicer {

/// A finite list L of non-zero vectors; defines V_L = intersection of H_v over L.
class HalfspaceList {
public:
    explicit HalfspaceList(int dim);
    HalfspaceList(int dim, const std::vector<RealVec>& vectors);

    /// Throws InputError on a zero vector, a non-finite entry or a dimension mismatch.
    void add(VecView v);

    int dim() const { return dim_; }
    std::size_t size() const { return norms_sq_.size(); }
    bool empty() const { return norms_sq_.empty(); }

    VecView vector(std::size_t i) const {
        return {data_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    double norm_sq(std::size_t i) const { return norms_sq_[i]; }
    /// Row-major n x d storage.
    std::span<const double> data() const { return data_; }

    /// Every vector multiplied by c > 0.
    HalfspaceList scaled(double c) const;

private:
    int dim_;
    std::vector<double> data_;
    std::vector<double> norms_sq_;
};

/// n uniform points on the unit sphere.
HalfspaceList sphere_list(int d, std::size_t n, RandomStream& rng);
/// n uniform points in radius * B.
HalfspaceList ball_list(int d, std::size_t n, double radius, RandomStream& rng);
/// {+-2 e_i}: V_L is the cube [-1, 1]^d.
HalfspaceList cube_list(int d);

bool contains(const HalfspaceList& list, VecView x);

/// r(u) = min over <u,v> > 0 of ||v||^2 / (2 <u,v>); +infinity if no such v.
double radial_extent(const HalfspaceList& list, VecView u);

struct VolumeEstimate {
    double log2_ratio_per_dim = 0.0;  // (1/d) log2(vol(V_L) / vol(B))
    double std_error = 0.0;           // delta-method, same units
    std::int64_t trials = 0;
    std::int64_t unbounded_rays_hit = 0;

    bool bounded() const { return unbounded_rays_hit == 0; }
};

enum class Backend {
    parallel,          // OpenMP over ray chunks, blocked support-function kernel
    serial_reference,  // one ray at a time through radial_extent
};

struct VolumeOptions {
    Backend backend = Backend::parallel;
    int threads = 0;  // 0: OpenMP default
};

/// Rays per RandomStream substream. Ray k always comes from substream k / kRayChunk.
inline constexpr std::int64_t kRayChunk = 256;

/// vol(V_L) / vol(B) = E_u[r(u)^d] over uniform directions u. rng is not
/// advanced: each ray chunk uses rng.split(chunk).
VolumeEstimate estimate_volume(const HalfspaceList& list, std::int64_t trials, const RandomStream& rng,
                               const VolumeOptions& options = {});

/// Per-ray log2 r(u) for the directions estimate_volume would draw.
std::vector<double> sample_log2_extents(const HalfspaceList& list, std::int64_t trials,
                                        const RandomStream& rng, const VolumeOptions& options = {});

/// Probability that n uniform sphere points give a bounded polytope.
double wendel_probability(int n, int d);

/// Exact test: V_L is bounded iff the vectors positively span R^d, i.e. the
/// origin lies in their convex hull (general position assumed).
bool is_bounded(const HalfspaceList& list);

/// Fraction of `trials` independent n-point sphere lists whose polytope is bounded.
/// Trial k uses rng.split(k).
double boundedness_frequency(int d, int n, std::int64_t trials, const RandomStream& rng, int threads = 0);

}  // namespace vslicer
