#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "arith.hpp"
#include "box.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "solver.hpp"
#include "theory.hpp"

namespace latcong {

enum class ModulusKind { prime, squarefree, any };

// Uniform modulus in [lo, hi] of the requested kind, by rejection.
inline Modulus random_modulus(ModulusKind kind, u64 lo, u64 hi, SeededStream& stream) {
    if (lo < 2 || lo > hi) throw domain_error("random_modulus: need 2 <= lo <= hi");
    for (u64 trial = 0; trial < 1000000; ++trial) {
        Modulus m(stream.uniform_in(lo, hi));
        switch (kind) {
        case ModulusKind::prime:
            if (m.is_prime()) return m;
            break;
        case ModulusKind::squarefree:
            if (m.is_squarefree()) return m;
            break;
        case ModulusKind::any:
            return m;
        }
    }
    throw sampling_error("random_modulus: rejection cap reached; no admissible modulus in range");
}

// Distinct moduli of one kind, sorted ascending.
inline std::vector<Modulus> draw_distinct_moduli(ModulusKind kind, u64 lo, u64 hi, u64 count,
                                                 SeededStream& stream) {
    std::vector<Modulus> out;
    for (u64 trial = 0; trial < 1000000 && out.size() < count; ++trial) {
        Modulus m = random_modulus(kind, lo, hi, stream);
        bool fresh = std::none_of(out.begin(), out.end(),
                                  [&](const Modulus& o) { return o.value() == m.value(); });
        if (fresh) out.push_back(std::move(m));
    }
    if (out.size() < count)
        throw sampling_error("draw_distinct_moduli: not enough distinct moduli in range");
    std::sort(out.begin(), out.end(),
              [](const Modulus& a, const Modulus& b) { return a.value() < b.value(); });
    return out;
}

// Uniform admissible system: entries uniform in Z/N, resampled until every
// row is normalized and, for j > 1, the rows are independent mod each prime
// dividing N.
inline CongruenceSystem sample_congruence(int n, int j, const Modulus& modulus,
                                          SeededStream& stream) {
    if (n < 2) throw domain_error("sample_congruence: need n >= 2");
    if (j < 1 || j >= n) throw domain_error("sample_congruence: need 1 <= j <= n - 1");
    u64 nn = modulus.value();
    std::vector<u64> rows((size_t)n * j);
    for (u64 trial = 0; trial < 1000000; ++trial) {
        for (auto& v : rows) v = stream.uniform_below(nn);
        bool ok = true;
        for (int r = 0; r < j && ok; ++r) {
            u64 g = nn;
            for (int c = 0; c < n; ++c) g = std::gcd(g, rows[(size_t)r * n + c]);
            ok = g == 1;
        }
        if (ok && j > 1) {
            for (const auto& f : modulus.factors())
                if (detail::rank_mod_p(rows, j, n, f.p) != j) { ok = false; break; }
        }
        if (ok) return make_system(modulus, n, j, rows);
    }
    throw sampling_error("sample_congruence: rejection cap reached");
}

struct RDistribution {
    int n = 2, j = 1;
    BoxSpec box;
    u64 seed = 0;
    u64 samples_per_modulus = 0;
    std::vector<u64> moduli;
    std::vector<std::map<u64, u64>> per_modulus;  // r -> count, aligned with moduli
    std::map<u64, u64> merged;
    u64 samples_total = 0;
};

// Samples `samples_per_modulus` admissible systems for each modulus and
// counts box solutions. Sample i of modulus m uses the derived stream
// m * samples_per_modulus + i, so results do not depend on the thread count.
inline RDistribution simulate_r_distribution(int n, int j, const std::vector<Modulus>& moduli,
                                             const BoxSpec& box, u64 samples_per_modulus,
                                             u64 seed, int threads = 1) {
    box.check_compatible(n, j);
    if (moduli.empty()) throw domain_error("simulate_r_distribution: no moduli");
    if (samples_per_modulus == 0)
        throw domain_error("simulate_r_distribution: need at least one sample");
    RDistribution dist;
    dist.n = n;
    dist.j = j;
    dist.box = box;
    dist.seed = seed;
    dist.samples_per_modulus = samples_per_modulus;
    for (const auto& m : moduli) dist.moduli.push_back(m.value());

    u64 total = (u64)moduli.size() * samples_per_modulus;
    std::vector<u64> counts(total);
    parallel_index_for(total, threads, [&](u64 g) {
        SeededStream s = derive_stream(seed, g);
        const Modulus& m = moduli[g / samples_per_modulus];
        auto sys = sample_congruence(n, j, m, s);
        counts[g] = count_solutions_in_box(sys, box);
    });

    dist.per_modulus.resize(moduli.size());
    for (u64 g = 0; g < total; ++g) {
        ++dist.per_modulus[g / samples_per_modulus][counts[g]];
        ++dist.merged[counts[g]];
    }
    dist.samples_total = total;
    return dist;
}

struct TheoryComparisonRow {
    u64 r = 0;
    u64 count = 0;
    double freq = 0.0;
    double theory = 0.0;
    double se = 0.0;  // binomial standard error at the theory frequency
    double z = 0.0;
};

// Rows for every observed r plus the odd r up to 9; a is the box volume the
// closed forms apply to.
inline std::vector<TheoryComparisonRow> compare_to_theory(const std::map<u64, u64>& counts,
                                                          u64 samples, double a) {
    if (samples == 0) throw domain_error("compare_to_theory: no samples");
    std::map<u64, u64> rows(counts);
    for (u64 r = 1; r <= 9; r += 2) rows.emplace(r, 0);
    std::vector<TheoryComparisonRow> out;
    for (const auto& [r, count] : rows) {
        TheoryComparisonRow row;
        row.r = r;
        row.count = count;
        row.freq = (double)count / (double)samples;
        row.theory = c2r_closed(a, r);
        row.se = std::sqrt(row.theory * (1.0 - row.theory) / (double)samples);
        if (row.se > 0.0)
            row.z = (row.freq - row.theory) / row.se;
        else
            row.z = count == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        out.push_back(row);
    }
    return out;
}

inline std::vector<TheoryComparisonRow> compare_to_theory(const RDistribution& dist, double a) {
    return compare_to_theory(dist.merged, dist.samples_total, a);
}

struct PrimitiveFraction {
    double a = 1.0;
    u64 seed = 0;
    u64 samples_per_modulus = 0;
    std::vector<u64> moduli;
    u64 samples_total = 0;
    u64 nontrivial = 0;  // samples with a nonzero solution in the box
    u64 primitive = 0;   // samples with some census entry of d == 1
    std::map<u64, u64> shortest_d_hist;  // d of the shortest entry (sup norm, then k)
};

// For random rows (r1, r2), examines the multiplier census inside SquareB(a)
// and classifies the shortest entry (sup norm, then k) by d = gcd(k, N).
inline PrimitiveFraction simulate_primitive_fraction(const std::vector<Modulus>& moduli, double a,
                                                     u64 samples_per_modulus, u64 seed,
                                                     int threads = 1) {
    if (moduli.empty()) throw domain_error("simulate_primitive_fraction: no moduli");
    if (samples_per_modulus == 0)
        throw domain_error("simulate_primitive_fraction: need at least one sample");
    BoxSpec box = BoxSpec::square(a);
    PrimitiveFraction out;
    out.a = a;
    out.seed = seed;
    out.samples_per_modulus = samples_per_modulus;
    for (const auto& m : moduli) out.moduli.push_back(m.value());

    u64 total = (u64)moduli.size() * samples_per_modulus;
    std::vector<u64> short_d(total);      // d of the shortest entry; 0 when the box is empty
    std::vector<char> has_primitive(total);
    parallel_index_for(total, threads, [&](u64 g) {
        SeededStream s = derive_stream(seed, g);
        const Modulus& m = moduli[g / samples_per_modulus];
        auto sys = sample_congruence(2, 1, m, s);
        auto census = short_solution_census(sys.rows[0], sys.rows[1], m, box);
        if (census.empty()) {
            short_d[g] = 0;
            return;
        }
        const CensusEntry* best = &census[0];
        auto sup = [](const CensusEntry& e) {
            return std::max(e.x < 0 ? -e.x : e.x, e.y < 0 ? -e.y : e.y);
        };
        for (const auto& e : census) {
            if (e.d == 1) has_primitive[g] = 1;
            if (sup(e) < sup(*best) || (sup(e) == sup(*best) && e.k < best->k)) best = &e;
        }
        short_d[g] = best->d;
    });

    out.samples_total = total;
    for (u64 g = 0; g < total; ++g) {
        if (short_d[g] == 0) continue;
        ++out.nontrivial;
        if (has_primitive[g]) ++out.primitive;
        ++out.shortest_d_hist[short_d[g]];
    }
    return out;
}

} // namespace latcong
