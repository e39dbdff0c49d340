#pragma once

// Seeded, reproducible randomness. mt19937_64 is bit-exact across
// platforms; uniform doubles are produced from its raw output, so every
// seed → sample mapping here is stable. Independent task streams come
// from SplitMix64 over (master seed, task index).

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "cesim/states.hpp"

namespace cesim::rng {

/// SplitMix64 step; used to derive per-task seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for task `index` under `master` (documented splitting rule).
inline std::uint64_t task_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

class Stream {
  public:
    explicit Stream(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal (Box-Muller on raw uniforms).
    double normal();

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
    bool haveSpare_ = false;
    double spare_ = 0.0;
};

/// Multinomial draw: `shots` trials over `probs` (must sum to 1 within
/// 1e-9). Per-shot inverse CDF; counts sum to shots exactly.
std::vector<std::uint64_t> multinomial(Stream& stream,
                                       const std::vector<double>& probs,
                                       std::uint64_t shots);

/// Full-rank random state: GG†/Tr(GG†) with complex Ginibre G.
DensityMatrix4 random_state(Stream& stream);

/// Haar-random single-qubit unitary.
Eigen::Matrix2cd random_su2(Stream& stream);

/// Random single-qubit state with Bloch vector uniform in the ball.
Eigen::Matrix2cd random_qubit_state(Stream& stream);

/// Separable two-qubit state: convex mixture of up to `maxTerms` product
/// states with Dirichlet-uniform weights.
DensityMatrix4 random_separable_state(Stream& stream, int maxTerms = 4);

} // namespace cesim::rng
