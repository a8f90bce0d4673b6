#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wvg/core.hpp"

namespace wvg {

enum class Method { MonteCarlo, WtaExact, Convolution, BruteForce, Asymptotic };

std::string to_string(Method m);

/// Per-group expected payoffs π_i = E[Θ_i·d] with standard errors.
struct PayoffEstimate {
    Vector mean;
    Vector standard_error;  ///< zero for exact methods
    std::uint64_t samples = 0;
    Method method = Method::MonteCarlo;

    std::size_t size() const noexcept { return static_cast<std::size_t>(mean.size()); }
    bool is_statistical() const noexcept { return method == Method::MonteCarlo; }
};

struct McConfig {
    std::uint64_t samples = 10'000'000;
    std::uint64_t seed = 20200101;
    std::uint64_t chunks = 64;
    MarginDistribution distribution = MarginDistribution::uniform_iid();
    /// Worker threads; 0 uses WVG_THREADS or the hardware concurrency.
    /// Results do not depend on this value.
    unsigned workers = 0;
};

/// Partial sums of one chunk. Per group and per tracked quantity x:
/// Σx and Σx², where x is θ_i·d for a profile or θ_i·(d_A - d_B) for a contrast.
struct ChunkSums {
    std::uint64_t count = 0;
    std::vector<Vector> sum;
    std::vector<Vector> sum_sq;

    void merge(const ChunkSums& other);
};

/// Samples drawn by chunk `chunk` under `cfg`: ⌈samples/chunks⌉, or the remainder.
std::uint64_t chunk_size(const McConfig& cfg, std::uint64_t chunk);

/// Evaluates every profile on the same draws of chunk `chunk` (stream (seed, chunk)).
/// Tracked quantities are the profiles in order followed by the contrasts in order.
ChunkSums run_chunk(const Game& game, std::span<const Profile> profiles,
                    std::span<const std::pair<std::size_t, std::size_t>> contrasts,
                    const McConfig& cfg, std::uint64_t chunk);

/// Turns summed chunks into estimates: mean Σx/N and SE = sample sd / √N.
PayoffEstimate finalize(const ChunkSums& sums, std::size_t quantity);

/// Common-random-number run of several profiles (and optional contrasts).
/// Output is bit-identical for fixed (seed, chunks) whatever the worker count.
struct McResult {
    std::vector<PayoffEstimate> payoffs;
    std::vector<PayoffEstimate> differences;
};
McResult estimate_many(const Game& game, std::span<const Profile> profiles,
                       std::span<const std::pair<std::size_t, std::size_t>> contrasts, const McConfig& cfg);

PayoffEstimate estimate_payoffs(const Game& game, const Profile& profile, const McConfig& cfg);

/// π(A) - π(B) evaluated on common draws.
PayoffEstimate estimate_payoff_diff(const Game& game, const Profile& a, const Profile& b, const McConfig& cfg);

/// Worker count used when McConfig::workers is 0.
unsigned default_workers();

} // namespace wvg
