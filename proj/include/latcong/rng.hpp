#pragma once

#include <cstdint>

#include "arith.hpp"

namespace latcong {

// Counter-based generator: Philox4x32-10 (Salmon et al., SC'11 constants).
// Key = 64-bit seed, counter = (block index, 64-bit stream id).  Streams with
// distinct ids never overlap, so one stream per Monte Carlo sample gives
// results independent of thread count and shard order.
class SeededStream {
  public:
    SeededStream(u64 seed, u64 stream)
        : k0_((std::uint32_t)seed), k1_((std::uint32_t)(seed >> 32)),
          s0_((std::uint32_t)stream), s1_((std::uint32_t)(stream >> 32)) {}

    u64 seed() const { return (u64)k1_ << 32 | k0_; }
    u64 stream() const { return (u64)s1_ << 32 | s0_; }

    u64 next_u64() {
        if (avail_ == 0) refill();
        --avail_;
        u64 w = (u64)out_[2 * avail_ + 1] << 32 | out_[2 * avail_];
        return w;
    }

    // Unbiased sample from {0, ..., m-1} (Lemire's rejection method).
    u64 uniform_below(u64 m) {
        if (m == 0) throw domain_error("uniform_below: empty range");
        u128 prod = (u128)next_u64() * m;
        u64 lo = (u64)prod;
        if (lo < m) {
            u64 threshold = (0 - m) % m;
            while (lo < threshold) {
                prod = (u128)next_u64() * m;
                lo = (u64)prod;
            }
        }
        return (u64)(prod >> 64);
    }

    // Uniform on {lo, ..., hi} inclusive.
    u64 uniform_in(u64 lo, u64 hi) {
        if (lo > hi) throw domain_error("uniform_in: empty range");
        u64 span = hi - lo;
        if (span == UINT64_MAX) return next_u64();
        return lo + uniform_below(span + 1);
    }

  private:
    static constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    static constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;

    void refill() {
        std::uint32_t x0 = (std::uint32_t)block_, x1 = (std::uint32_t)(block_ >> 32);
        std::uint32_t x2 = s0_, x3 = s1_;
        std::uint32_t k0 = k0_, k1 = k1_;
        for (int round = 0; round < 10; ++round) {
            u64 p0 = (u64)M0 * x0;
            u64 p1 = (u64)M1 * x2;
            std::uint32_t h0 = (std::uint32_t)(p0 >> 32), l0 = (std::uint32_t)p0;
            std::uint32_t h1 = (std::uint32_t)(p1 >> 32), l1 = (std::uint32_t)p1;
            std::uint32_t n0 = h1 ^ x1 ^ k0;
            std::uint32_t n1 = l1;
            std::uint32_t n2 = h0 ^ x3 ^ k1;
            std::uint32_t n3 = l0;
            x0 = n0;
            x1 = n1;
            x2 = n2;
            x3 = n3;
            k0 += W0;
            k1 += W1;
        }
        out_[0] = x0;
        out_[1] = x1;
        out_[2] = x2;
        out_[3] = x3;
        ++block_;
        avail_ = 2;
    }

    std::uint32_t k0_, k1_, s0_, s1_;
    u64 block_ = 0;
    std::uint32_t out_[4] = {};
    int avail_ = 0;
};

inline SeededStream derive_stream(u64 seed, u64 stream) { return SeededStream(seed, stream); }

// Stream ids at the top of the shard space, reserved for draws that are not
// tied to a sample index (modulus selection, prime selection, ...).
constexpr u64 kReservedStreamBase = 0xFFFFFFFFFFFFFF00ull;

} // namespace latcong
