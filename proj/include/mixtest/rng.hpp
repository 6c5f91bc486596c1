#pragma once

#include <cstdint>
#include <random>

namespace mixtest {

// splitmix64; used to derive independent per-replication seeds from
// (base seed, replication index) so parallel loops are schedule-independent.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0,1). Single stream; all sampling is derived from it via
    // inverse transforms so replays are bit-identical across platforms.
    double uniform() {
        return std::generate_canonical<double, 53>(engine_);
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace mixtest
