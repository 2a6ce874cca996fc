#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "arith.hpp"
#include "box.hpp"
#include "errors.hpp"
#include "intmat.hpp"
#include "lattice2d.hpp"
#include "solver.hpp"

namespace latcong {

// Index-N sublattice of Z^2 in Hermite form: rows (d, 0) and (a, N/d)
// with d | N and 0 <= a < d.  Ranging a over [0, d) enumerates each
// sublattice exactly once and there are sigma(N) of them in total.
struct SublatticeBasis2D {
    u64 n = 0, d = 1, a = 0;

    SublatticeBasis2D() = default;
    SublatticeBasis2D(u64 n_, u64 d_, u64 a_) : n(n_), d(d_), a(a_) {
        if (d == 0 || n % d != 0) throw domain_error("sublattice basis: d must divide N");
        if (a >= d) throw domain_error("sublattice basis: need 0 <= a < d");
    }

    u64 e() const { return n / d; }

    IntMat rows() const {
        IntMat m(2, 2);
        m.at(0, 0) = (i64)d;
        m.at(1, 0) = (i64)a;
        m.at(1, 1) = (i64)(n / d);
        return m;
    }

    friend bool operator==(const SublatticeBasis2D&, const SublatticeBasis2D&) = default;
    friend bool operator<(const SublatticeBasis2D& x, const SublatticeBasis2D& y) {
        if (x.d != y.d) return x.d < y.d;
        return x.a < y.a;
    }
};

struct SnfPair {
    u64 d1 = 1, d2 = 1;
    friend bool operator==(const SnfPair&, const SnfPair&) = default;
};

inline SnfPair snf_2x2(const SublatticeBasis2D& b) {
    u64 g = std::gcd(std::gcd(b.a, b.d), b.e());
    return {g, b.n / g};
}

inline bool is_cyclic_quotient(const SublatticeBasis2D& b) { return snf_2x2(b).d1 == 1; }

// All index-N sublattices of Z^2, ordered by (d, a).  sigma(N) <= 10^7.
inline std::vector<SublatticeBasis2D> enumerate_D_N(const Modulus& modulus) {
    u64 nn = modulus.value();
    if (modulus.sigma() > 10000000) throw size_limit_error("enumerate_D_N: sigma(N) exceeds 10^7");
    std::vector<SublatticeBasis2D> out;
    out.reserve(modulus.sigma());
    for (u64 d : modulus.divisors())
        for (u64 a = 0; a < d; ++a) out.emplace_back(nn, d, a);
    return out;
}

// Sublattices whose quotient fails to be cyclic; empty iff no p has p^2 | N.
inline std::vector<SublatticeBasis2D> bad_set_T(const Modulus& modulus) {
    std::vector<SublatticeBasis2D> out;
    for (const auto& b : enumerate_D_N(modulus))
        if (!is_cyclic_quotient(b)) out.push_back(b);
    return out;
}

inline IntMat lattice_from_congruence(const CongruenceSystem& sys) { return solution_lattice(sys); }

inline SublatticeBasis2D sublattice_2d_from_congruence(const CongruenceSystem& sys) {
    if (sys.n != 2 || sys.j != 1)
        throw domain_error("sublattice_2d_from_congruence: needs n = 2, j = 1");
    IntMat h = solution_lattice(sys);
    return SublatticeBasis2D(sys.modulus.value(), (u64)h.at(0, 0), (u64)h.at(1, 0));
}

// Inverse direction: a normalized row (A, B) with solution lattice equal to
// the given sublattice, when the quotient is cyclic.  A = N/d and B is the
// first value -a + k*d coprime to N.
inline std::optional<std::array<u64, 2>> congruence_from_lattice(const SublatticeBasis2D& b) {
    if (!is_cyclic_quotient(b)) return std::nullopt;
    u64 nn = b.n;
    u64 a_res = (nn - b.a % nn) % nn;  // -a mod N
    for (u64 k = 0; k < nn; ++k) {
        u64 cand = (a_res + mulmod(k, b.d, nn)) % nn;
        if (std::gcd(std::gcd(nn / b.d % nn, cand), nn) == 1) return std::array<u64, 2>{nn / b.d % nn, cand};
    }
    return std::nullopt;  // unreachable for a cyclic quotient
}

// Gaussian binomial [n choose k]_p by the q-Pascal recurrence.
inline u64 grassmannian_size(int n, int k, u64 p) {
    if (k < 0 || n < 0 || k > n) throw domain_error("grassmannian_size: need 0 <= k <= n");
    if (p < 2) throw domain_error("grassmannian_size: p must be at least 2");
    std::vector<std::vector<u128>> g(n + 1, std::vector<u128>(k + 1, 0));
    for (int m = 0; m <= n; ++m) g[m][0] = 1;
    for (int m = 1; m <= n; ++m)
        for (int i = 1; i <= std::min(m, k); ++i) {
            u128 v = g[m - 1][i - 1];
            u128 tail = g[m - 1][i];
            if (tail != 0) {
                u128 pi = 1;
                for (int t = 0; t < i; ++t) {
                    pi *= p;
                    if (pi > (u128)UINT64_MAX) throw size_limit_error("grassmannian_size: overflow");
                }
                v += pi * tail;
            }
            if (v > (u128)UINT64_MAX) throw size_limit_error("grassmannian_size: overflow");
            g[m][i] = v;
        }
    return (u64)g[n][k];
}

// Number of sublattices of Z^n with quotient (Z/N)^j, for square-free N the
// product of Grassmannian sizes over primes dividing N.
inline u64 count_L(int n, int j, const Modulus& modulus, bool require_squarefree = true) {
    if (j < 1 || j >= n) throw domain_error("count_L: need 1 <= j <= n - 1");
    if (require_squarefree && !modulus.is_squarefree())
        throw domain_error("count_L: modulus must be square-free");
    u128 prod = 1;
    for (const auto& f : modulus.factors()) {
        prod *= grassmannian_size(n, j, f.p);
        if (prod > (u128)UINT64_MAX) throw size_limit_error("count_L: overflow");
    }
    return (u64)prod;
}

struct HeckeOrbit {
    int n = 0, j = 0;
    u64 modulus = 0;
    std::vector<IntMat> members;  // lower-triangular Hermite bases, sorted
};

namespace detail {

inline bool snf_is_orbit_type(const IntMat& b, int j, u64 nn) {
    auto inv = invariant_factors(b);
    int n = b.rows;
    for (int i = 0; i < n - j; ++i)
        if (inv[i] != 1) return false;
    for (int i = n - j; i < n; ++i)
        if (inv[i] != nn) return false;
    return true;
}

// Diagonal tuples (d_0..d_{n-1}) with each d_i | N and prod = N^j.
inline void diagonal_tuples(const std::vector<u64>& divisors, int n, u128 target,
                            std::vector<u64>& cur, std::vector<std::vector<u64>>& out) {
    if ((int)cur.size() == n) {
        u128 prod = 1;
        for (u64 d : cur) prod *= d;
        if (prod == target) out.push_back(cur);
        return;
    }
    u128 partial = 1;
    for (u64 d : cur) partial *= d;
    for (u64 d : divisors) {
        if (partial * d > target) break;
        cur.push_back(d);
        diagonal_tuples(divisors, n, target, cur, out);
        cur.pop_back();
    }
}

// Reduced row echelon bases of all dim-r subspaces of F_p^n.
inline std::vector<IntMat> rref_subspaces(int n, int r, u64 p) {
    std::vector<IntMat> out;
    std::vector<int> comb(r);  // pivot columns c_0 < ... < c_{r-1}
    auto choose = [&](auto&& self, int idx, int start) -> void {
        if (idx == r) {
            // free positions: (i, c) with c > comb[i], c not a pivot column
            std::vector<std::pair<int, int>> free_pos;
            for (int i = 0; i < r; ++i)
                for (int c = comb[i] + 1; c < n; ++c) {
                    bool is_pivot = false;
                    for (int t = 0; t < r; ++t)
                        if (comb[t] == c) is_pivot = true;
                    if (!is_pivot) free_pos.push_back({i, c});
                }
            std::vector<u64> vals(free_pos.size(), 0);
            for (;;) {
                IntMat m(r, n);
                for (int i = 0; i < r; ++i) m.at(i, comb[i]) = 1;
                for (size_t t = 0; t < free_pos.size(); ++t)
                    m.at(free_pos[t].first, free_pos[t].second) = (i64)vals[t];
                out.push_back(m);
                size_t i = 0;
                while (i < vals.size() && ++vals[i] == p) vals[i++] = 0;
                if (i == vals.size()) break;
            }
            return;
        }
        for (int c = start; c < n; ++c) {
            comb[idx] = c;
            self(self, idx + 1, c + 1);
        }
    };
    choose(choose, 0, 0);
    return out;
}

} // namespace detail

// Fully filtered enumeration: all Hermite bases with diagonal product N^j
// whose Smith form is (1, ..., 1, N, ..., N).  Exponential in candidates;
// kept as the reference path and used directly for small inputs.
inline HeckeOrbit enumerate_hecke_orbit_by_filter(int n, int j, const Modulus& modulus) {
    if (n < 2 || n > 4) throw domain_error("hecke orbit: n must be in [2, 4]");
    if (j < 1 || j >= n) throw domain_error("hecke orbit: need 1 <= j <= n - 1");
    u64 nn = modulus.value();
    u128 target = 1;
    for (int i = 0; i < j; ++i) target *= nn;
    auto divisors = modulus.divisors();
    std::vector<std::vector<u64>> tuples;
    std::vector<u64> cur;
    detail::diagonal_tuples(divisors, n, target, cur, tuples);
    u128 candidates = 0;
    for (const auto& t : tuples) {
        u128 c = 1;
        for (int k = 0; k < n; ++k)
            for (int i = k + 1; i < n; ++i) c *= t[k];
        candidates += c;
    }
    if (candidates > 10000000) throw size_limit_error("hecke orbit: candidate count exceeds 10^7");
    HeckeOrbit orbit{n, j, nn, {}};
    for (const auto& t : tuples) {
        std::vector<std::pair<int, int>> slots;  // below-diagonal positions
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < i; ++k)
                if (t[k] > 1) slots.push_back({i, k});
        std::vector<u64> vals(slots.size(), 0);
        for (;;) {
            IntMat m(n, n);
            for (int i = 0; i < n; ++i) m.at(i, i) = (i64)t[i];
            for (size_t s = 0; s < slots.size(); ++s) m.at(slots[s].first, slots[s].second) = (i64)vals[s];
            if (detail::snf_is_orbit_type(m, j, nn)) {
                orbit.members.push_back(std::move(m));
                if (orbit.members.size() > 1000000)
                    throw size_limit_error("hecke orbit: orbit size exceeds 10^6");
            }
            size_t i = 0;
            while (i < vals.size() && ++vals[i] == t[slots[i].second]) vals[i++] = 0;
            if (i == vals.size()) break;
        }
    }
    std::sort(orbit.members.begin(), orbit.members.end());
    return orbit;
}

// Orbit of lattices with quotient (Z/N)^j under the standard basis-change
// action: enumerated directly for n = 2, via CRT over per-prime subspaces
// for square-free N, and by Smith filtering otherwise.
inline HeckeOrbit enumerate_hecke_orbit(int n, int j, const Modulus& modulus) {
    if (n < 2 || n > 4) throw domain_error("hecke orbit: n must be in [2, 4]");
    if (j < 1 || j >= n) throw domain_error("hecke orbit: need 1 <= j <= n - 1");
    u64 nn = modulus.value();
    if (n == 2) {
        if (modulus.sigma() > 10000000) throw size_limit_error("hecke orbit: sigma(N) exceeds 10^7");
        HeckeOrbit orbit{n, j, nn, {}};
        for (u64 d : modulus.divisors())
            for (u64 a = 0; a < d; ++a) {
                if (std::gcd(std::gcd(a, d), nn / d) != 1) continue;
                IntMat m(2, 2);
                m.at(0, 0) = (i64)d;
                m.at(1, 0) = (i64)a;
                m.at(1, 1) = (i64)(nn / d);
                orbit.members.push_back(std::move(m));
                if (orbit.members.size() > 1000000)
                    throw size_limit_error("hecke orbit: orbit size exceeds 10^6");
            }
        std::sort(orbit.members.begin(), orbit.members.end());
        return orbit;
    }
    if (modulus.is_squarefree()) {
        if (count_L(n, j, modulus) > 1000000)
            throw size_limit_error("hecke orbit: orbit size exceeds 10^6");
        std::vector<std::vector<IntMat>> per_prime;
        for (const auto& f : modulus.factors())
            per_prime.push_back(detail::rref_subspaces(n, n - j, f.p));
        HeckeOrbit orbit{n, j, nn, {}};
        std::vector<size_t> idx(per_prime.size(), 0);
        for (;;) {
            int extra = 0;
            for (size_t t = 0; t < per_prime.size(); ++t) extra += per_prime[t][idx[t]].rows;
            IntMat gens(n + extra, n);
            for (int i = 0; i < n; ++i) gens.at(i, i) = (i64)nn;
            int row = n;
            for (size_t t = 0; t < per_prime.size(); ++t) {
                u64 lift = nn / modulus.factors()[t].p;
                const IntMat& sub = per_prime[t][idx[t]];
                for (int r = 0; r < sub.rows; ++r, ++row)
                    for (int c = 0; c < n; ++c) gens.at(row, c) = sub.at(r, c) * (i64)lift;
            }
            orbit.members.push_back(hnf_rows(std::move(gens)));
            size_t t = 0;
            while (t < idx.size() && ++idx[t] == per_prime[t].size()) idx[t++] = 0;
            if (t == idx.size()) break;
        }
        std::sort(orbit.members.begin(), orbit.members.end());
        return orbit;
    }
    return enumerate_hecke_orbit_by_filter(n, j, modulus);
}

// Lattice membership for a lower-triangular basis, by back substitution.
inline bool lattice_contains(const IntMat& b, const std::vector<i64>& x) {
    int n = b.rows;
    std::vector<i64> t = x;
    for (int i = n - 1; i >= 0; --i) {
        if (t[i] % b.at(i, i) != 0) return false;
        i64 c = t[i] / b.at(i, i);
        if (c == 0) continue;
        for (int k = 0; k <= i; ++k) t[k] -= c * b.at(i, k);
    }
    return true;
}

// Lattice points of each orbit member inside the box at the orbit's modulus.
inline std::vector<u64> hecke_point_counts(const HeckeOrbit& orbit, const BoxSpec& box) {
    BoxWindow w(box, orbit.modulus, orbit.n, orbit.j);
    std::vector<u64> counts;
    counts.reserve(orbit.members.size());
    if (orbit.n == 2) {
        for (const auto& m : orbit.members) {
            Basis2D b = gauss_reduce_2d({{m.at(0, 0), m.at(0, 1)}, {m.at(1, 0), m.at(1, 1)}});
            counts.push_back(count_points_in_window(b, w));
        }
        return counts;
    }
    if (w.bounding_point_count() > 1e9)
        throw size_limit_error("hecke_point_counts: box holds more than 10^9 integer points");
    std::vector<i64> radius(orbit.n);
    for (int i = 0; i < orbit.n; ++i) radius[i] = (i64)std::floor(w.half[i]);
    for (const auto& m : orbit.members) {
        u64 count = 0;
        std::vector<i64> x(orbit.n);
        for (int i = 0; i < orbit.n; ++i) x[i] = -radius[i];
        for (;;) {
            if (w.contains(x) && lattice_contains(m, x)) ++count;
            int i = orbit.n - 1;
            while (i >= 0 && ++x[i] > radius[i]) {
                x[i] = -radius[i];
                --i;
            }
            if (i < 0) break;
        }
        counts.push_back(count);
    }
    return counts;
}

// Fraction of orbit members whose box point count is exactly r.
inline double hecke_average(const HeckeOrbit& orbit, const BoxSpec& box, u64 r) {
    if (orbit.members.empty()) throw domain_error("hecke_average: empty orbit");
    auto counts = hecke_point_counts(orbit, box);
    u64 hit = 0;
    for (u64 c : counts)
        if (c == r) ++hit;
    return (double)hit / (double)counts.size();
}

inline double hecke_average(int n, int j, const Modulus& modulus, const BoxSpec& box, u64 r) {
    return hecke_average(enumerate_hecke_orbit(n, j, modulus), box, r);
}

} // namespace latcong
