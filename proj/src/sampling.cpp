#include "vslicer/sampling.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "vslicer/errors.hpp"

namespace vslicer {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index), engine_(make_engine(seed, stream_index)) {}

RandomStream RandomStream::split(std::uint64_t k) const {
    const std::uint64_t child_seed = splitmix64(seed_ ^ splitmix64(stream_index_ + 0x632be59bd9b4e019ULL));
    return RandomStream(child_seed, k);
}

double RandomStream::uniform01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RandomStream::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

RealVec sample_sphere(int d, RandomStream& rng) {
    if (d < 1) throw InputError("sample_sphere: d must be >= 1");
    RealVec x(static_cast<std::size_t>(d));
    std::normal_distribution<double> gauss(0.0, 1.0);
    double nsq = 0.0;
    do {
        nsq = 0.0;
        for (double& c : x) {
            c = gauss(rng.engine());
            nsq += c * c;
        }
    } while (nsq == 0.0);
    const double inv = 1.0 / std::sqrt(nsq);
    for (double& c : x) c *= inv;
    return x;
}

RealVec sample_ball(int d, double radius, RandomStream& rng) {
    if (!(radius > 0.0)) throw InputError("sample_ball: radius must be positive");
    RealVec x = sample_sphere(d, rng);
    const double r = radius * std::pow(rng.uniform01(), 1.0 / d);
    for (double& c : x) c *= r;
    return x;
}

long long sample_discrete_gaussian_1d(double center, double width, RandomStream& rng) {
    if (!(width >= 0.0)) throw InputError("sample_discrete_gaussian_1d: width must be non-negative");
    const double sigma = width / std::sqrt(2.0 * std::numbers::pi);
    // Mass beyond 12 sigma is below 1e-31.
    constexpr double kTail = 12.0;
    const auto lo = static_cast<long long>(std::floor(center - kTail * sigma));
    const auto hi = static_cast<long long>(std::ceil(center + kTail * sigma));
    if (sigma == 0.0 || hi - lo < 1) return std::llround(center);

    const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
    constexpr long long kTableLimit = 64;
    if (hi - lo <= kTableLimit) {
        std::array<double, kTableLimit + 1> weight{};
        double total = 0.0;
        for (long long z = lo; z <= hi; ++z) {
            const double dz = static_cast<double>(z) - center;
            weight[static_cast<std::size_t>(z - lo)] = std::exp(-dz * dz * inv_two_var);
            total += weight[static_cast<std::size_t>(z - lo)];
        }
        if (total == 0.0) return std::llround(center);
        double u = rng.uniform01() * total;
        for (long long z = lo; z < hi; ++z) {
            u -= weight[static_cast<std::size_t>(z - lo)];
            if (u < 0.0) return z;
        }
        return hi;
    }
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    for (;;) {
        const long long z = lo + static_cast<long long>(rng.uniform_index(span));
        const double dz = static_cast<double>(z) - center;
        if (rng.uniform01() < std::exp(-dz * dz * inv_two_var)) return z;
    }
}

CosetSampler::CosetSampler(const LatticeBasis& basis) : basis_(basis) {}

CosetSample CosetSampler::sample(VecView target, double width, RandomStream& rng) const {
    const int d = basis_.dim();
    if (static_cast<int>(target.size()) != d) throw InputError("coset sampler: dimension mismatch");
    if (!(width >= 0.0)) throw InputError("coset sampler: width must be non-negative");
    const GramSchmidt& g = basis_.gso();

    CosetSample out;
    out.shift.assign(static_cast<std::size_t>(d), 0);
    RealVec center(target.begin(), target.end());
    for (int i = d - 1; i >= 0; --i) {
        const double c = dot(center, g.bstar_row(i)) / g.bstar_sq[static_cast<std::size_t>(i)];
        const double s_i = width / std::sqrt(g.bstar_sq[static_cast<std::size_t>(i)]);
        const long long z = sample_discrete_gaussian_1d(c, s_i, rng);
        out.shift[static_cast<std::size_t>(i)] = z;
        if (z != 0) {
            const VecView b = basis_.row(i);
            for (int k = 0; k < d; ++k) center[static_cast<std::size_t>(k)] -= static_cast<double>(z) * b[k];
        }
    }
    // center = t - sum z_i b_i
    out.point = std::move(center);
    return out;
}

RealVec sample_coset_gaussian(const LatticeBasis& basis, const CosetGaussianParams& params,
                              RandomStream& rng) {
    if (!(params.width > 0.0)) throw InputError("sample_coset_gaussian: width must be positive");
    return CosetSampler(basis).sample(params.target, params.width, rng).point;
}

}  // namespace vslicer
