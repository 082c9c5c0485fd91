#pragma once

#include <cstdint>
#include <random>

namespace slicedot {

// Seedable generator that can be split into independent substreams keyed by
// (seed, stream). Substreams are derived with a SplitMix64 finalizer so that
// neighbouring stream indices give unrelated mt19937_64 states.
class Rng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream), engine_(mix(seed, stream)) {}

    [[nodiscard]] Rng split(std::uint64_t stream) const {
        return Rng(mix(seed_, stream_) ^ 0x9e3779b97f4a7c15ULL, stream);
    }

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t stream() const { return stream_; }

    result_type operator()() { return engine_(); }
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    double normal() { return normal_(engine_); }

private:
    static std::uint64_t splitmix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        return splitmix(splitmix(seed) ^ (stream * 0xd1342543de82ef95ULL + 1));
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace slicedot
