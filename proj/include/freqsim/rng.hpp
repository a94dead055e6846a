#pragma once

#include <cstdint>
#include <string_view>

namespace freqsim {

// splitmix64 (Steele, Lea, Flood; public-domain reference sequence).
// Chosen over <random> engines+distributions because the standard leaves
// distribution algorithms unspecified; every byte of a trace must be
// reproducible across platforms. Reports record kRngAlgorithm.
inline constexpr std::string_view kRngAlgorithm = "splitmix64";

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in (0, 1]; safe as a log() argument.
    double unit_open_closed() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound). Modulo mapping: the bias at the
    // bounds used here (jitter windows, period pickers) is far below any
    // tolerance we test, and the mapping is trivially portable.
    std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

private:
    std::uint64_t state_;
};

// Per-task arrival stream, decorrelated from the workload seed so adding
// a task never perturbs the other tasks' arrivals.
inline SplitMix64 task_stream(std::uint64_t seed, std::int64_t task_id) {
    return SplitMix64(seed ^ (0x9E3779B97F4A7C15ULL *
                              (static_cast<std::uint64_t>(task_id) + 1)));
}

}  // namespace freqsim
