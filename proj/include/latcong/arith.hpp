#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace latcong {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 addmod(u64 a, u64 b, u64 n) {
    a %= n;
    b %= n;
    u64 s = a + b;
    if (s < a || s >= n) s -= n;
    return s;
}

inline u64 submod(u64 a, u64 b, u64 n) {
    a %= n;
    b %= n;
    return a >= b ? a - b : a + (n - b);
}

inline u64 mulmod(u64 a, u64 b, u64 n) { return (u64)((u128)a * b % n); }

inline u64 powmod(u64 b, u64 e, u64 n) {
    u64 r = n == 1 ? 0 : 1;
    b %= n;
    while (e) {
        if (e & 1) r = mulmod(r, b, n);
        b = mulmod(b, b, n);
        e >>= 1;
    }
    return r;
}

// g = u*a + v*b with g = gcd(a,b) >= 0.  ext_gcd(0,0) = (0,0,0).
struct ExtGcd {
    i64 g, u, v;
};

inline ExtGcd ext_gcd(i64 a, i64 b) {
    if (a == 0 && b == 0) return {0, 0, 0};
    i64 r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        s0 -= q * s1;
        std::swap(s0, s1);
        t0 -= q * t1;
        std::swap(t0, t1);
    }
    if (r0 < 0) {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    return {r0, s0, t0};
}

// Representative of x mod n in (-n/2, n/2].
inline i64 centered_rep(i64 x, u64 n) {
    if (n == 0) throw domain_error("centered_rep: modulus must be positive");
    i64 m = x % (i64)n;
    if (m < 0) m += (i64)n;
    u64 r = (u64)m;
    return 2 * r <= n ? (i64)r : (i64)r - (i64)n;
}

// Residue of x mod n in [0, n).
inline u64 to_residue(i64 x, u64 n) {
    i64 m = x % (i64)n;
    if (m < 0) m += (i64)n;
    return (u64)m;
}

inline u64 inverse_mod(u64 a, u64 n) {
    auto e = ext_gcd((i64)(a % n), (i64)n);
    if (e.g != 1) throw domain_error("inverse_mod: argument not invertible");
    i64 u = e.u % (i64)n;
    if (u < 0) u += (i64)n;
    return (u64)u;
}

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
    a %= n;
    if (a == 0) return true;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

// Deterministic for all 64-bit inputs (standard witness set).
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (!detail::miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

struct PrimePower {
    u64 p;
    int e;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

namespace detail {

// Brent's cycle-finding variant with backtracking; deterministic (c = 1, 2, ... on retry).
inline u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, ys = 2, d = 1, q = 1;
        u64 r = 1;
        const u64 m = 64;
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = addmod(mulmod(y, y, n), c, n);
            for (u64 k = 0; k < r && d == 1; k += m) {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = addmod(mulmod(y, y, n), c, n);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
            }
            r <<= 1;
        } while (d == 1);
        if (d == n) {
            do {
                ys = addmod(mulmod(ys, ys, n), c, n);
                d = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (d == 1);
        }
        if (d != n) return d;
    }
}

inline void factor_rec(u64 n, std::vector<u64>& primes) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        primes.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_rec(d, primes);
    factor_rec(n / d, primes);
}

} // namespace detail

// Trial division to 10^6 first, Pollard rho for what survives.  2 <= n <= 2^63 - 1.
inline std::vector<PrimePower> factorize(u64 n) {
    if (n < 2) throw domain_error("factorize: n must be at least 2");
    if (n > (u64)INT64_MAX) throw domain_error("factorize: n exceeds 2^63 - 1");
    std::vector<PrimePower> out;
    u64 rem = n;
    bool rem_prime = false;
    auto strip = [&](u64 p) {
        if (rem % p) return;
        int e = 0;
        while (rem % p == 0) {
            rem /= p;
            ++e;
        }
        out.push_back({p, e});
        rem_prime = rem > 1 && is_prime_u64(rem);
    };
    strip(2);
    strip(3);
    if (rem > 1 && out.empty()) rem_prime = is_prime_u64(rem);
    for (u64 p = 5; !rem_prime && p <= 1000000 && p * p <= rem; p += 6) {
        strip(p);
        if (!rem_prime && p * p <= rem) strip(p + 2);
    }
    if (rem > 1) {
        std::vector<u64> primes;
        detail::factor_rec(rem, primes);
        std::sort(primes.begin(), primes.end());
        for (size_t i = 0; i < primes.size();) {
            size_t j = i;
            while (j < primes.size() && primes[j] == primes[i]) ++j;
            out.push_back({primes[i], (int)(j - i)});
            i = j;
        }
    }
    std::sort(out.begin(), out.end(), [](const PrimePower& a, const PrimePower& b) { return a.p < b.p; });
    return out;
}

// A modulus carried together with its factorization.
class Modulus {
  public:
    explicit Modulus(u64 n) : value_(n), factors_(factorize(n)) {}

    u64 value() const { return value_; }
    const std::vector<PrimePower>& factors() const { return factors_; }

    bool is_prime() const { return factors_.size() == 1 && factors_[0].e == 1; }

    bool is_squarefree() const {
        for (const auto& f : factors_)
            if (f.e > 1) return false;
        return true;
    }

    u64 euler_phi() const {
        u64 r = 1;
        for (const auto& f : factors_) {
            r *= f.p - 1;
            for (int i = 1; i < f.e; ++i) r *= f.p;
        }
        return r;
    }

    // Sum of divisors; the desk scales here keep it far from overflow.
    u64 sigma() const {
        u128 r = 1;
        for (const auto& f : factors_) {
            u128 term = 1, pe = 1;
            for (int i = 0; i < f.e; ++i) {
                pe *= f.p;
                term += pe;
            }
            r *= term;
            if (r > (u128)UINT64_MAX) throw size_limit_error("sigma: divisor sum overflows 64 bits");
        }
        return (u64)r;
    }

    std::vector<u64> divisors() const {
        std::vector<u64> divs{1};
        for (const auto& f : factors_) {
            size_t base = divs.size();
            u64 pe = 1;
            for (int i = 0; i < f.e; ++i) {
                pe *= f.p;
                for (size_t k = 0; k < base; ++k) divs.push_back(divs[k] * pe);
            }
        }
        std::sort(divs.begin(), divs.end());
        return divs;
    }

    friend bool operator==(const Modulus& a, const Modulus& b) { return a.value_ == b.value_; }

  private:
    u64 value_;
    std::vector<PrimePower> factors_;
};

} // namespace latcong
