#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace wvg {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based random stream. Stream `index` under `seed` is the Philox
/// sequence with key = seed and counter = (block, index); distinct indices
/// never overlap, and a stream can be recreated anywhere from its pair.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t index) noexcept;

    std::uint32_t next_u32() noexcept {
        if (pos_ == 4) refill();
        return buffer_[pos_++];
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform on (0,1), never exactly 0 or 1, 53-bit resolution.
    double uniform01() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform on (-1,1); the value set is symmetric about 0 and excludes 0.
    double uniform_pm1() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-52 - 1.0;
    }

    /// Same values as `count` successive uniform_pm1() calls.
    void fill_uniform_pm1(double* out, std::size_t count) noexcept;

    /// Fair ±1.
    int coin() noexcept { return (next_u32() >> 31) ? 1 : -1; }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t index() const noexcept { return index_; }

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t index_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int pos_ = 4;
};

} // namespace wvg
