#pragma once

// Counter-based random streams (Philox4x32-10).
//
// A stream is identified by (seed, label, index). Each value depends only on
// that identity and the position within the stream, so parallel workers that
// own disjoint indices reproduce the same draws regardless of scheduling.

#include <array>
#include <cstdint>
#include <string_view>

namespace xeb {

/// One Philox4x32 block: 10 rounds over a 128-bit counter with a 64-bit key.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// 32-bit FNV-1a, used to turn stream labels into counter words.
constexpr std::uint32_t fnv1a32(std::string_view s) noexcept {
    std::uint32_t h = 2166136261u;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 16777619u;
    }
    return h;
}

class Stream {
public:
    using result_type = std::uint64_t;

    Stream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept { return next_u64(); }

    std::uint64_t next_u64() noexcept;
    std::uint32_t next_u32() noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Uniform integer in [0, bound); bound must be > 0. Unbiased (Lemire).
    std::uint64_t below(std::uint64_t bound) noexcept;

    bool bernoulli(double p) noexcept { return p > 0.0 && uniform() < p; }

    /// Number of 32-bit words consumed so far.
    std::uint64_t position() const noexcept { return block_ * 4 - (4 - used_); }

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::uint32_t label_word_;
    std::uint32_t index_word_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    unsigned used_ = 4;
};

}  // namespace xeb
