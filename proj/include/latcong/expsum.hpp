#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace latcong {

// Smallest primitive root mod an odd prime; 1 for p == 2.
inline u64 primitive_root(u64 p) {
    if (!is_prime_u64(p)) throw domain_error("primitive_root: p must be prime");
    if (p > (1ull << 32)) throw size_limit_error("primitive_root: p capped at 2^32");
    if (p == 2) return 1;
    auto fac = factorize(p - 1);
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        for (const auto& f : fac)
            if (powmod(g, (p - 1) / f.p, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw domain_error("primitive_root: none found");
}

// Exponent e in {1, ..., p-1} with g^e == h (p prime, g primitive). The
// identity gets p-1, not 0, so exponents match the admissible-pair
// convention. Baby-step giant-step.
inline u64 discrete_log(u64 p, u64 g, u64 h) {
    if (!is_prime_u64(p)) throw domain_error("discrete_log: p must be prime");
    if (p > (1ull << 32)) throw size_limit_error("discrete_log: p capped at 2^32");
    g %= p;
    h %= p;
    if (g == 0 || h == 0) throw domain_error("discrete_log: base and target must be units");
    if (p == 2) return 1;
    u64 q = p - 1;
    u64 m = (u64)std::ceil(std::sqrt((double)q));
    std::unordered_map<u64, u64> baby;
    baby.reserve(2 * m);
    u64 cur = 1;
    for (u64 b = 0; b < m; ++b) {
        baby.emplace(cur, b);
        cur = mulmod(cur, g, p);
    }
    u64 factor = powmod(g, q - (m % q), p);  // g^{-m}
    u64 gamma = h;
    for (u64 i = 0; i <= q / m + 1; ++i) {
        auto it = baby.find(gamma);
        if (it != baby.end()) {
            u64 e = (i * m + it->second) % q;
            if (e == 0) e = q;
            if (powmod(g, e, p) != h)
                throw domain_error("discrete_log: base does not generate the target");
            return e;
        }
        gamma = mulmod(gamma, factor, p);
    }
    throw domain_error("discrete_log: no exponent found; base may not be primitive");
}

// Admissible pair: the exponents of h1, h2 generate Z/(p-1) together.
inline bool is_in_A(u64 p, u64 h1, u64 h2) {
    if (p == 2) return true;
    u64 g = primitive_root(p);
    u64 r1 = discrete_log(p, g, h1);
    u64 r2 = discrete_log(p, g, h2);
    return std::gcd(std::gcd(r1, r2), p - 1) == 1;
}

// S = sum over x in [1, p-1] of e_p(a1 h1^x + a2 h2^x).
inline std::complex<double> exp_sum_base_form(u64 p, u64 a1, u64 a2, u64 h1, u64 h2) {
    if (!is_prime_u64(p)) throw domain_error("exp_sum_base_form: p must be prime");
    if (p > (1ull << 20)) throw size_limit_error("exp_sum_base_form: p capped at 2^20");
    a1 %= p;
    a2 %= p;
    h1 %= p;
    h2 %= p;
    if (h1 == 0 || h2 == 0) throw domain_error("exp_sum_base_form: bases must be units");
    const double tau = 2.0 * std::numbers::pi / (double)p;
    std::complex<double> s = 0.0;
    u64 x1 = 1, x2 = 1;
    for (u64 x = 1; x < p; ++x) {
        x1 = mulmod(x1, h1, p);
        x2 = mulmod(x2, h2, p);
        u64 t = addmod(mulmod(a1, x1, p), mulmod(a2, x2, p), p);
        s += std::polar(1.0, tau * (double)t);
    }
    return s;
}

// Same sum after the substitution y = g^x: sum over units y of
// e_p(a1 y^r1 + a2 y^r2). Used to cross-check the base form.
inline std::complex<double> exp_sum_power_form(u64 p, u64 a1, u64 a2, u64 r1, u64 r2) {
    if (!is_prime_u64(p)) throw domain_error("exp_sum_power_form: p must be prime");
    if (p > (1ull << 20)) throw size_limit_error("exp_sum_power_form: p capped at 2^20");
    a1 %= p;
    a2 %= p;
    const double tau = 2.0 * std::numbers::pi / (double)p;
    std::complex<double> s = 0.0;
    for (u64 y = 1; y < p; ++y) {
        u64 t = addmod(mulmod(a1, powmod(y, r1, p), p), mulmod(a2, powmod(y, r2, p), p), p);
        s += std::polar(1.0, tau * (double)t);
    }
    return s;
}

struct ExponentMinima {
    u64 m_unsigned = 0;  // min over units k of max positive representative of (k r1, k r2)
    u64 k_unsigned = 1;
    u64 m_signed = 0;    // min over units k of max |centered representative|
    u64 k_signed = 1;
};

// Minimizes the exponent pair over the substitutions y -> y^k, k a unit mod
// p-1. Positive representatives live in {1, ..., p-1} (0 counts as p-1),
// centered ones in (-(p-1)/2, (p-1)/2].
inline ExponentMinima minimize_exponents(u64 p, u64 r1, u64 r2) {
    if (p < 3 || !is_prime_u64(p)) throw domain_error("minimize_exponents: p must be an odd prime");
    if (p > (1ull << 26)) throw size_limit_error("minimize_exponents: p capped at 2^26");
    u64 q = p - 1;
    r1 %= q;
    r2 %= q;
    if (std::gcd(std::gcd(r1, r2), q) != 1)
        throw domain_error("minimize_exponents: exponents must generate Z/(p-1)");
    ExponentMinima best;
    bool first = true;
    for (u64 k = 1; k < q; ++k) {
        if (std::gcd(k, q) != 1) continue;
        u64 t1 = mulmod(k, r1, q), t2 = mulmod(k, r2, q);
        u64 mu = std::max(t1 == 0 ? q : t1, t2 == 0 ? q : t2);
        u64 ms = std::max(std::min(t1, q - t1), std::min(t2, q - t2));
        if (first || mu < best.m_unsigned) {
            best.m_unsigned = mu;
            best.k_unsigned = k;
        }
        if (first || ms < best.m_signed) {
            best.m_signed = ms;
            best.k_signed = k;
        }
        first = false;
    }
    return best;
}

struct ExpSumRecord {
    u64 p = 0, g = 0;
    u64 h1 = 0, h2 = 0;  // admissible pair of bases
    u64 r1 = 0, r2 = 0;  // their exponents
    u64 a1 = 0, a2 = 0;  // uniform coefficients, (0, 0) allowed
    double abs_s = 0.0;
    u64 m_unsigned = 0, m_signed = 0;
    double weil_bound = 0.0;     // sqrt(p) * m_unsigned
    bool improved_holds = false; // m_signed <= sqrt(a) sqrt(p-1) / 2
};

struct ExpSumExperiment {
    u64 lo = 0, hi = 0;
    u64 prime_count = 0, samples_per_prime = 0;
    u64 seed = 0;
    double a = 1.0;
    std::vector<u64> primes;             // distinct, ascending
    std::vector<ExpSumRecord> records;   // grouped by prime
    u64 weil_failures = 0;               // |S| above the Weil bound, (0,0) excluded
    double max_weil_ratio = 0.0;         // max |S| / bound, (0,0) excluded
    double improved_fraction = 0.0;      // fraction of records with improved_holds
};

// Draws distinct primes in [lo, hi], then per prime samples admissible base
// pairs by rejection and uniform coefficients. Record i of prime k uses the
// derived stream k * samples_per_prime + i; the prime draw uses a reserved
// stream, so the experiment is independent of the thread count.
inline ExpSumExperiment bound_experiment(u64 lo, u64 hi, u64 prime_count, double a,
                                         u64 samples_per_prime, u64 seed, int threads = 1) {
    if (lo < 3) throw domain_error("bound_experiment: need lo >= 3");
    if (hi > (1ull << 20)) throw size_limit_error("bound_experiment: hi capped at 2^20");
    if (!(a > 0.0 && a <= 2.0)) throw domain_error("bound_experiment: a must lie in (0, 2]");
    if (prime_count == 0 || samples_per_prime == 0)
        throw domain_error("bound_experiment: need primes and samples");

    ExpSumExperiment ex;
    ex.lo = lo;
    ex.hi = hi;
    ex.prime_count = prime_count;
    ex.samples_per_prime = samples_per_prime;
    ex.seed = seed;
    ex.a = a;

    SeededStream prime_stream = derive_stream(seed, kReservedStreamBase);
    auto moduli = draw_distinct_moduli(ModulusKind::prime, lo, hi, prime_count, prime_stream);
    std::vector<u64> gs;
    for (const auto& m : moduli) {
        ex.primes.push_back(m.value());
        gs.push_back(primitive_root(m.value()));
    }

    u64 total = prime_count * samples_per_prime;
    ex.records.resize(total);
    parallel_index_for(total, threads, [&](u64 idx) {
        u64 pi = idx / samples_per_prime;
        u64 p = ex.primes[pi], g = gs[pi], q = p - 1;
        SeededStream s = derive_stream(seed, idx);
        ExpSumRecord rec;
        rec.p = p;
        rec.g = g;
        bool found = false;
        for (u64 trial = 0; trial < 1000000 && !found; ++trial) {
            rec.h1 = s.uniform_in(1, q);
            rec.h2 = s.uniform_in(1, q);
            rec.r1 = discrete_log(p, g, rec.h1);
            rec.r2 = discrete_log(p, g, rec.h2);
            found = std::gcd(std::gcd(rec.r1, rec.r2), q) == 1;
        }
        if (!found) throw sampling_error("bound_experiment: no admissible pair found");
        rec.a1 = s.uniform_below(p);
        rec.a2 = s.uniform_below(p);
        rec.abs_s = std::abs(exp_sum_base_form(p, rec.a1, rec.a2, rec.h1, rec.h2));
        auto minima = minimize_exponents(p, rec.r1, rec.r2);
        rec.m_unsigned = minima.m_unsigned;
        rec.m_signed = minima.m_signed;
        rec.weil_bound = std::sqrt((double)p) * (double)rec.m_unsigned;
        rec.improved_holds = (double)rec.m_signed <= std::sqrt(a) * std::sqrt((double)q) / 2.0;
        ex.records[idx] = rec;
    });

    u64 improved = 0;
    for (const auto& rec : ex.records) {
        if (rec.improved_holds) ++improved;
        if (rec.a1 == 0 && rec.a2 == 0) continue;
        double ratio = rec.abs_s / rec.weil_bound;
        ex.max_weil_ratio = std::max(ex.max_weil_ratio, ratio);
        if (rec.abs_s > rec.weil_bound * (1.0 + 1e-12) + 1e-9) ++ex.weil_failures;
    }
    ex.improved_fraction = (double)improved / (double)total;
    return ex;
}

} // namespace latcong
