#pragma once

#include <cstdint>
#include <random>

namespace vslicer {

/// A reproducible random sequence identified by (seed, stream_index).
///
/// Parallel experiments derive one substream per trial (or per fixed-size
/// chunk of trials) with split(), so the values drawn for trial k never
/// depend on thread scheduling.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0, std::uint64_t stream_index = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    /// Child stream k of this stream. Children of distinct k are independent,
    /// and split() does not advance this stream.
    RandomStream split(std::uint64_t k) const;

    std::mt19937_64& engine() { return engine_; }

    double uniform01();  // [0, 1)
    double normal();     // standard normal
    std::uint64_t uniform_index(std::uint64_t n);  // uniform on {0, ..., n-1}

private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
};

}  // namespace vslicer
