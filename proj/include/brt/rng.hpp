#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace brt {

// Splittable counter-based random stream (splitmix64). Independent streams
// are derived from a (seed, path...) key so that parallel replicates and
// per-cell draws are reproducible regardless of scheduling.
class RngStream {
public:
    RngStream() : state_(0x853c49e6748fea9bULL) {}
    explicit RngStream(std::uint64_t key) : state_(mix(key ^ 0x9e3779b97f4a7c15ULL)) {}

    static RngStream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t k = mix(seed);
        for (std::uint64_t p : path)
            k = mix(k ^ mix(p + 0x632be59bd9b4e019ULL));
        return RngStream(k);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // uniform on [0,1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform on (0,1]
    double next_double_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    double next_exponential(double rate) {
        return -std::log(next_double_open()) / rate;
    }

    // index in [0,n) proportional to weights[i]; caller guarantees a positive total
    template <typename Weights>
    std::size_t next_categorical(const Weights& weights, double total) {
        double u = next_double() * total;
        std::size_t n = weights.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            u -= weights[i];
            if (u < 0.0)
                return i;
        }
        return n - 1;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

// Stream purposes, used as derivation path components so that distinct
// consumers of the same (seed, replicate) never collide.
namespace stream_tag {
inline constexpr std::uint64_t cell_clock = 1;
inline constexpr std::uint64_t initial_tessellation = 2;
inline constexpr std::uint64_t estimator_time = 3;
inline constexpr std::uint64_t estimator_cut = 4;
inline constexpr std::uint64_t validation = 5;
} // namespace stream_tag

} // namespace brt
