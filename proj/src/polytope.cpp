#include "vslicer/polytope.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vslicer/errors.hpp"
#include "vslicer/kernels.hpp"
#include "vslicer/sampling.hpp"

namespace vslicer {

HalfspaceList::HalfspaceList(int dim) : dim_(dim) {
    if (dim < 1) throw InputError("HalfspaceList: dimension must be >= 1");
}

HalfspaceList::HalfspaceList(int dim, const std::vector<RealVec>& vectors) : HalfspaceList(dim) {
    data_.reserve(vectors.size() * static_cast<std::size_t>(dim));
    norms_sq_.reserve(vectors.size());
    for (const RealVec& v : vectors) add(v);
}

void HalfspaceList::add(VecView v) {
    if (static_cast<int>(v.size()) != dim_) throw InputError("HalfspaceList::add: dimension mismatch");
    for (double x : v) {
        if (!std::isfinite(x)) throw InputError("HalfspaceList::add: non-finite coordinate");
    }
    const double nsq = vslicer::norm_sq(v);
    if (nsq == 0.0) throw InputError("HalfspaceList::add: the zero vector is not allowed");
    data_.insert(data_.end(), v.begin(), v.end());
    norms_sq_.push_back(nsq);
}

HalfspaceList HalfspaceList::scaled(double c) const {
    if (!(c > 0.0)) throw InputError("HalfspaceList::scaled: factor must be positive");
    HalfspaceList out(dim_);
    out.data_ = data_;
    for (double& x : out.data_) x *= c;
    out.norms_sq_.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.norms_sq_.push_back(vslicer::norm_sq(out.vector(i)));
    return out;
}

HalfspaceList sphere_list(int d, std::size_t n, RandomStream& rng) {
    HalfspaceList list(d);
    for (std::size_t i = 0; i < n; ++i) list.add(sample_sphere(d, rng));
    return list;
}

HalfspaceList ball_list(int d, std::size_t n, double radius, RandomStream& rng) {
    HalfspaceList list(d);
    for (std::size_t i = 0; i < n; ++i) {
        RealVec v = sample_ball(d, radius, rng);
        while (vslicer::norm_sq(v) == 0.0) v = sample_ball(d, radius, rng);
        list.add(v);
    }
    return list;
}

HalfspaceList cube_list(int d) {
    HalfspaceList list(d);
    RealVec v(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < d; ++i) {
        v[static_cast<std::size_t>(i)] = 2.0;
        list.add(v);
        v[static_cast<std::size_t>(i)] = -2.0;
        list.add(v);
        v[static_cast<std::size_t>(i)] = 0.0;
    }
    return list;
}

bool contains(const HalfspaceList& list, VecView x) {
    if (static_cast<int>(x.size()) != list.dim()) throw InputError("contains: dimension mismatch");
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (2.0 * dot(x, list.vector(i)) > list.norm_sq(i)) return false;
    }
    return true;
}

double radial_extent(const HalfspaceList& list, VecView u) {
    if (static_cast<int>(u.size()) != list.dim()) throw InputError("radial_extent: dimension mismatch");
    if (std::fabs(norm(u) - 1.0) > 1e-9) throw InputError("radial_extent: direction must be a unit vector");
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < list.size(); ++i) {
        const double uv = dot(u, list.vector(i));
        if (uv > 0.0) r = std::min(r, list.norm_sq(i) / (2.0 * uv));
    }
    return r;
}

std::vector<double> sample_log2_extents(const HalfspaceList& list, std::int64_t trials, const RandomStream& rng,
                                        const VolumeOptions& options) {
    if (trials < 1) throw InputError("sample_log2_extents: trials must be >= 1");
    const int d = list.dim();
    const auto ud = static_cast<std::size_t>(d);
    std::vector<double> log2r(static_cast<std::size_t>(trials));
    const std::int64_t chunks = (trials + kRayChunk - 1) / kRayChunk;

    if (options.backend == Backend::serial_reference) {
        std::vector<double> rays(static_cast<std::size_t>(kRayChunk) * ud);
        for (std::int64_t c = 0; c < chunks; ++c) {
            RandomStream cs = rng.split(static_cast<std::uint64_t>(c));
            const std::int64_t begin = c * kRayChunk;
            const auto count = static_cast<std::size_t>(std::min(kRayChunk, trials - begin));
            for (std::size_t r = 0; r < count; ++r) {
                const RealVec u = sample_sphere(d, cs);
                std::copy(u.begin(), u.end(), rays.begin() + static_cast<std::ptrdiff_t>(r * ud));
            }
            kernels::log2_extents_serial(list, rays, count,
                                         std::span<double>(log2r).subspan(static_cast<std::size_t>(begin), count));
        }
        return log2r;
    }

    const kernels::RadialKernel kernel(list);
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
    {
        std::vector<double> rays(static_cast<std::size_t>(kRayChunk) * ud);
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < chunks; ++c) {
            RandomStream cs = rng.split(static_cast<std::uint64_t>(c));
            const std::int64_t begin = c * kRayChunk;
            const auto count = static_cast<std::size_t>(std::min(kRayChunk, trials - begin));
            for (std::size_t r = 0; r < count; ++r) {
                const RealVec u = sample_sphere(d, cs);
                std::copy(u.begin(), u.end(), rays.begin() + static_cast<std::ptrdiff_t>(r * ud));
            }
            kernel.log2_extents(rays, count, std::span<double>(log2r).subspan(static_cast<std::size_t>(begin), count));
        }
    }
    return log2r;
}

VolumeEstimate estimate_volume(const HalfspaceList& list, std::int64_t trials, const RandomStream& rng,
                               const VolumeOptions& options) {
    if (trials < 100) throw InputError("estimate_volume: trials must be >= 100");
    if (list.empty()) throw DegenerateError("polytope unbounded in all sampled directions");
    const std::vector<double> log2r = sample_log2_extents(list, trials, rng, options);
    const double d = list.dim();

    VolumeEstimate est;
    est.trials = trials;
    double shift = -std::numeric_limits<double>::infinity();
    for (double lr : log2r) {
        if (std::isinf(lr)) {
            ++est.unbounded_rays_hit;
        } else {
            shift = std::max(shift, d * lr);
        }
    }
    if (est.unbounded_rays_hit == trials) throw DegenerateError("polytope unbounded in all sampled directions");
    if (est.unbounded_rays_hit > 0) {
        est.log2_ratio_per_dim = std::numeric_limits<double>::infinity();
        est.std_error = std::numeric_limits<double>::infinity();
        return est;
    }
    // Sum of r^d in units of 2^shift; the largest term is exactly 1.
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double lr : log2r) {
        const double w = std::exp2(d * lr - shift);
        sum += w;
        sum_sq += w * w;
    }
    const auto n = static_cast<double>(trials);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    const double se_mean = std::sqrt(var / n);
    est.log2_ratio_per_dim = (shift + std::log2(mean)) / d;
    est.std_error = se_mean / (mean * std::numbers::ln2 * d);
    return est;
}

double wendel_probability(int n, int d) {
    if (n < 1 || d < 1) throw InputError("wendel_probability: n and d must be >= 1");
    if (n <= d) return 0.0;
    // 2^{-(n-1)} sum_{k=d}^{n-1} C(n-1, k): the complement of the hemisphere sum,
    // summed directly so nothing cancels.
    const int m = n - 1;
    const double log_half = -m * std::log(2.0);
    double top = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(m - d + 1));
    for (int k = d; k <= m; ++k) {
        const double lt = std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) + log_half;
        terms.push_back(lt);
        top = std::max(top, lt);
    }
    double s = 0.0;
    for (double lt : terms) s += std::exp(lt - top);
    return std::min(1.0, std::exp(top + std::log(s)));
}

double boundedness_frequency(int d, int n, std::int64_t trials, const RandomStream& rng, int threads) {
    if (trials < 100) throw InputError("boundedness_frequency: trials must be >= 100");
    if (d < 1 || n < 1) throw InputError("boundedness_frequency: d and n must be >= 1");
    if (n <= d) return 0.0;
    std::int64_t bounded = 0;
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nt) schedule(dynamic, 64) reduction(+ : bounded)
    for (std::int64_t k = 0; k < trials; ++k) {
        RandomStream ts = rng.split(static_cast<std::uint64_t>(k));
        const HalfspaceList list = sphere_list(d, static_cast<std::size_t>(n), ts);
        if (is_bounded(list)) ++bounded;
    }
    return static_cast<double>(bounded) / static_cast<double>(trials);
}

}  // namespace vslicer
