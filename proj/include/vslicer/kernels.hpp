#pragma once

#include <span>
#include <vector>

#include "vslicer/polytope.hpp"

namespace vslicer::kernels {

/// log2 r(u) for `count` unit rays stored row-major in `rays`, written to
/// out[0..count). Unbounded rays give +infinity.
///
/// Uses r(u) = 1 / (2 max_v <u, v / ||v||^2>): the list is inverted once,
/// then each ray needs one dot product per vector and a running max.
class RadialKernel {
public:
    explicit RadialKernel(const HalfspaceList& list);

    void log2_extents(std::span<const double> rays, std::size_t count, std::span<double> out) const;

    int dim() const { return dim_; }

private:
    int dim_;
    std::size_t n_;
    std::size_t padded_;
    std::vector<double> inverted_;  // coordinate-major: inverted_[j * padded_ + i]
};

/// Reference path: radial_extent ray by ray, straight from the definition.
void log2_extents_serial(const HalfspaceList& list, std::span<const double> rays, std::size_t count,
                         std::span<double> out);

}  // namespace vslicer::kernels
