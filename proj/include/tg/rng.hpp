#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace tg {

// Philox4x32-10 block function (Salmon et al., SC'11).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) noexcept {
    constexpr std::uint32_t kMulA = 0xD2511F53u;
    constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    constexpr std::uint32_t kWeylB = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed for a named pipeline stage, so that one stage's draws never depend on another's.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : stream) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return splitmix64(seed ^ splitmix64(h));
}

// Counter-based generator. The stream is fully determined by (seed, stream_a, stream_b)
// and the number of values drawn so far, so independent streams can be created per
// seed node / hop / batch without coordination.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint32_t stream_a = 0, std::uint32_t stream_b = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_a_(stream_a),
          stream_b_(stream_b) {}

    std::uint64_t next_u64() noexcept {
        if (buffered_ == 0) refill();
        const std::uint64_t out = (static_cast<std::uint64_t>(block_[2 * buffered_ - 1]) << 32) |
                                  block_[2 * buffered_ - 2];
        --buffered_;
        return out;
    }

    // Uniform integer in [0, bound); bound must be non-zero. Lemire's method.
    std::uint64_t uniform_below(std::uint64_t bound) noexcept {
        __extension__ using u128 = unsigned __int128;
        u128 m = static_cast<u128>(next_u64()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<u128>(next_u64()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform real in [0, 1) with 53 bits of precision.
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    void refill() noexcept {
        block_ = philox4x32({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                             stream_a_, stream_b_},
                            key_);
        ++counter_;
        buffered_ = 2;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_a_;
    std::uint32_t stream_b_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int buffered_ = 0;
};

}  // namespace tg
