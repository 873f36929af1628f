#pragma once

#include <cstdint>
#include <random>

namespace cascade {

/// Deterministic uniform doubles on top of mt19937_64.  Drawing through the
/// raw engine keeps the stream identical across standard libraries (the
/// distribution adaptors in <random> are implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    std::mt19937_64 engine_;
};

/// Per-trajectory seed derived from a master seed, splitmix64-style, so that
/// ensemble results depend only on (master seed, index) and not on the order
/// trajectories are run in.
inline std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master ^ (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace cascade
