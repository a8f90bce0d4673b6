#include "wvg/random.hpp"

namespace wvg {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// Four independent blocks advanced together; same result as four philox4x32 calls.
void philox4x32_x4(std::uint32_t (&c)[4][4], std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        for (int b = 0; b < 4; ++b) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(kMul0, c[b][0], hi0, lo0);
            mulhilo(kMul1, c[b][2], hi1, lo1);
            const std::uint32_t x0 = hi1 ^ c[b][1] ^ key[0];
            const std::uint32_t x2 = hi0 ^ c[b][3] ^ key[1];
            c[b][0] = x0;
            c[b][1] = lo1;
            c[b][2] = x2;
            c[b][3] = lo0;
        }
    }
}

inline double to_pm1(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t u = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-52 - 1.0;
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index) noexcept
    : seed_(seed), index_(index) {}

void RandomStream::refill() noexcept {
    const std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32)};
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                           static_cast<std::uint32_t>(seed_ >> 32)};
    buffer_ = philox4x32(ctr, key);
    ++block_;
    pos_ = 0;
}

void RandomStream::fill_uniform_pm1(double* out, std::size_t count) noexcept {
    std::size_t k = 0;
    // Whole blocks can be consumed two doubles at a time once the buffer is aligned.
    while (k < count && pos_ != 4 && pos_ != 0) out[k++] = uniform_pm1();
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                           static_cast<std::uint32_t>(seed_ >> 32)};
    if (pos_ == 0 && count - k >= 2) {
        out[k++] = to_pm1(buffer_[0], buffer_[1]);
        out[k++] = to_pm1(buffer_[2], buffer_[3]);
        pos_ = 4;
    }
    while (pos_ == 4 && count - k >= 8) {
        std::uint32_t c[4][4];
        for (int b = 0; b < 4; ++b) {
            const std::uint64_t blk = block_ + static_cast<std::uint64_t>(b);
            c[b][0] = static_cast<std::uint32_t>(blk);
            c[b][1] = static_cast<std::uint32_t>(blk >> 32);
            c[b][2] = static_cast<std::uint32_t>(index_);
            c[b][3] = static_cast<std::uint32_t>(index_ >> 32);
        }
        philox4x32_x4(c, key);
        for (int b = 0; b < 4; ++b) {
            out[k++] = to_pm1(c[b][0], c[b][1]);
            out[k++] = to_pm1(c[b][2], c[b][3]);
        }
        for (int w = 0; w < 4; ++w) buffer_[static_cast<std::size_t>(w)] = c[3][w];
        block_ += 4;
    }
    while (count - k >= 2 && (pos_ == 4 || pos_ == 0)) {
        std::array<std::uint32_t, 4> b;
        if (pos_ == 0) {
            b = buffer_;
        } else {
            b = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                            static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32)},
                           key);
            buffer_ = b;
            ++block_;
        }
        pos_ = 4;
        const std::uint64_t u0 = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
        const std::uint64_t u1 = (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
        out[k++] = (static_cast<double>(u0 >> 11) + 0.5) * 0x1.0p-52 - 1.0;
        out[k++] = (static_cast<double>(u1 >> 11) + 0.5) * 0x1.0p-52 - 1.0;
    }
    while (k < count) out[k++] = uniform_pm1();
}

} // namespace wvg
