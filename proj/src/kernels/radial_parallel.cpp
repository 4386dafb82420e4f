#include <algorithm>
#include <cmath>
#include <limits>

#include "vslicer/errors.hpp"
#include "vslicer/kernels.hpp"

namespace vslicer::kernels {

namespace {

constexpr std::size_t kLane = 8;
// 1024 vectors x d <= 24 coordinates keeps one block within L2.
constexpr std::size_t kBlock = 1024;
constexpr std::size_t kRays = 4;

}  // namespace

RadialKernel::RadialKernel(const HalfspaceList& list)
    : dim_(list.dim()), n_(list.size()), padded_((list.size() + kLane - 1) / kLane * kLane) {
    // Padding columns are zero vectors: they contribute <u, 0> = 0 to the max,
    // which never changes whether the max is positive.
    inverted_.assign(static_cast<std::size_t>(dim_) * padded_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const VecView v = list.vector(i);
        const double inv = 1.0 / list.norm_sq(i);
        for (int j = 0; j < dim_; ++j) inverted_[static_cast<std::size_t>(j) * padded_ + i] = v[static_cast<std::size_t>(j)] * inv;
    }
}

void RadialKernel::log2_extents(std::span<const double> rays, std::size_t count, std::span<double> out) const {
    const auto d = static_cast<std::size_t>(dim_);
    if (rays.size() < count * d || out.size() < count) throw InputError("RadialKernel: buffer too small");

    std::vector<double> best(count, -std::numeric_limits<double>::infinity());
    alignas(64) double acc[kRays][kBlock];

    for (std::size_t blk = 0; blk < padded_; blk += kBlock) {
        const std::size_t len = std::min(kBlock, padded_ - blk);
        for (std::size_t r0 = 0; r0 < count; r0 += kRays) {
            const std::size_t nr = std::min(kRays, count - r0);
            for (std::size_t k = 0; k < nr; ++k) {
                const double u0 = rays[(r0 + k) * d];
                const double* w = inverted_.data() + blk;
                double* a = acc[k];
#pragma omp simd
                for (std::size_t i = 0; i < len; ++i) a[i] = u0 * w[i];
            }
            for (std::size_t j = 1; j < d; ++j) {
                const double* w = inverted_.data() + j * padded_ + blk;
                for (std::size_t k = 0; k < nr; ++k) {
                    const double uj = rays[(r0 + k) * d + j];
                    double* a = acc[k];
#pragma omp simd
                    for (std::size_t i = 0; i < len; ++i) a[i] += uj * w[i];
                }
            }
            for (std::size_t k = 0; k < nr; ++k) {
                double m = best[r0 + k];
                const double* a = acc[k];
#pragma omp simd reduction(max : m)
                for (std::size_t i = 0; i < len; ++i) m = m > a[i] ? m : a[i];
                best[r0 + k] = m;
            }
        }
    }
    for (std::size_t r = 0; r < count; ++r) {
        out[r] = best[r] > 0.0 ? -1.0 - std::log2(best[r]) : std::numeric_limits<double>::infinity();
    }
}

}  // namespace vslicer::kernels
