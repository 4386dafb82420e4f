#pragma once

#include <vector>

#include "vslicer/basis.hpp"
#include "vslicer/geometry.hpp"
#include "vslicer/random.hpp"

namespace vslicer {

/// Uniform on the unit sphere S^{d-1} (normalized Gaussian).
RealVec sample_sphere(int d, RandomStream& rng);

/// Uniform in radius * B: sphere direction scaled by radius * U^{1/d}.
RealVec sample_ball(int d, double radius, RandomStream& rng);

/// Integer z with Pr[z] proportional to exp(-pi (z - center)^2 / width^2).
/// width == 0 returns the nearest integer to center.
long long sample_discrete_gaussian_1d(double center, double width, RandomStream& rng);

struct CosetGaussianParams {
    RealVec target;  // t
    double width;    // s, with density proportional to exp(-pi ||x||^2 / s^2)
};

struct CosetSample {
    RealVec point;                  // t' in t + L
    std::vector<long long> shift;   // z with t' = t - sum_i z_i b_i
};

/// Randomized nearest-plane (Klein) sampler for D_{t + L, s}. Keeps the
/// Gram-Schmidt data of one basis so repeated draws are cheap.
class CosetSampler {
public:
    explicit CosetSampler(const LatticeBasis& basis);

    CosetSample sample(VecView target, double width, RandomStream& rng) const;

    const LatticeBasis& basis() const { return basis_; }

private:
    LatticeBasis basis_;
};

RealVec sample_coset_gaussian(const LatticeBasis& basis, const CosetGaussianParams& params,
                              RandomStream& rng);

}  // namespace vslicer
