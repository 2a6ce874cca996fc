#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "arith.hpp"
#include "box.hpp"
#include "errors.hpp"
#include "intmat.hpp"
#include "lattice2d.hpp"

namespace latcong {

// j x n system A x == 0 (mod N), entries stored as residues in [0, N).
// Valid systems are normalized: gcd(row, N) = 1 for every row, and A has
// rank j modulo every prime dividing N.
struct CongruenceSystem {
    Modulus modulus;
    int n = 0, j = 0;
    std::vector<u64> rows;  // row-major, j*n entries

    u64 at(int r, int c) const { return rows[(size_t)r * n + c]; }
};

namespace detail {

inline int rank_mod_p(std::vector<u64> m, int rows, int cols, u64 p) {
    for (auto& v : m) v %= p;
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pr = -1;
        for (int r = rank; r < rows; ++r)
            if (m[(size_t)r * cols + c] != 0) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        for (int k = 0; k < cols; ++k) std::swap(m[(size_t)pr * cols + k], m[(size_t)rank * cols + k]);
        u64 inv = powmod(m[(size_t)rank * cols + c], p - 2, p);
        if (p == 2) inv = 1;
        for (int r = rank + 1; r < rows; ++r) {
            u64 f = mulmod(m[(size_t)r * cols + c], inv, p);
            if (f == 0) continue;
            for (int k = 0; k < cols; ++k) {
                u64 sub = mulmod(f, m[(size_t)rank * cols + k], p);
                m[(size_t)r * cols + k] = submod(m[(size_t)r * cols + k], sub, p);
            }
        }
        ++rank;
    }
    return rank;
}

} // namespace detail

inline CongruenceSystem make_system(Modulus modulus, int n, int j, std::vector<u64> rows) {
    u64 nn = modulus.value();
    if (n < 2) throw domain_error("make_system: need n >= 2");
    if (j < 1 || j >= n) throw domain_error("make_system: need 1 <= j <= n - 1");
    if ((int)rows.size() != n * j) throw domain_error("make_system: row data has wrong size");
    for (auto& v : rows) v %= nn;
    for (int r = 0; r < j; ++r) {
        u64 g = nn;
        for (int c = 0; c < n; ++c) g = std::gcd(g, rows[(size_t)r * n + c]);
        if (g != 1) throw normalization_error("make_system: row gcd with modulus exceeds 1");
    }
    if (j > 1) {
        for (const auto& f : modulus.factors())
            if (detail::rank_mod_p(rows, j, n, f.p) != j)
                throw normalization_error("make_system: rank drops modulo a prime divisor");
    }
    return CongruenceSystem{std::move(modulus), n, j, std::move(rows)};
}

// Matrix with columns (u, v) and (b/g, -a/g):  (a b) V = (g 0), det V = -1.
struct BezoutElim {
    std::array<i64, 4> m;  // row-major 2x2
    i64 g;
};

inline BezoutElim bezout_elim_2(i64 a, i64 b) {
    if (a == 0 && b == 0) return {{1, 0, 0, -1}, 0};
    auto e = ext_gcd(a, b);
    return {{e.u, b / e.g, e.v, -(a / e.g)}, e.g};
}

// Unimodular transform interpreted modulo N; entries kept centered.
struct UnimodularTransform {
    int n = 0;
    std::vector<i64> m;  // row-major
    int det_sign = 1;    // det == det_sign (mod N)

    i64 at(int r, int c) const { return m[(size_t)r * n + c]; }
    i64& at(int r, int c) { return m[(size_t)r * n + c]; }
};

// M with row * M == (gcd(row), 0, ..., 0) (mod N), built by eliminating
// entries from the right with 2x2 Bezout blocks; det M = (-1)^(n-1).
inline UnimodularTransform reduction_matrix(const std::vector<u64>& row, const Modulus& modulus) {
    int n = (int)row.size();
    u64 nn = modulus.value();
    if (n < 2) throw domain_error("reduction_matrix: need n >= 2");
    UnimodularTransform t;
    t.n = n;
    t.m.assign((size_t)n * n, 0);
    for (int i = 0; i < n; ++i) t.at(i, i) = 1;
    t.det_sign = (n - 1) % 2 == 0 ? 1 : -1;

    std::vector<i64> w(n);
    for (int i = 0; i < n; ++i) w[i] = (i64)(row[i] % nn);
    for (int i = n - 2; i >= 0; --i) {
        auto blk = bezout_elim_2(w[i], w[i + 1]);
        // Multiply t on the right by the identity with blk at rows/cols (i, i+1).
        for (int r = 0; r < n; ++r) {
            i64 x = t.at(r, i), y = t.at(r, i + 1);
            i128 c0 = (i128)x * blk.m[0] + (i128)y * blk.m[2];
            i128 c1 = (i128)x * blk.m[1] + (i128)y * blk.m[3];
            t.at(r, i) = centered_rep((i64)(c0 % (i128)nn), nn);
            t.at(r, i + 1) = centered_rep((i64)(c1 % (i128)nn), nn);
        }
        w[i] = blk.g;
        w[i + 1] = 0;
    }
    return t;
}

// Generator of the solution line for one row in two variables: all solutions
// of r1 x + r2 y == 0 (mod N) are k * (r2, -r1), k in Z/N.
struct TwoVarSolution {
    u64 n;
    std::array<u64, 2> generator;

    std::array<u64, 2> point(u64 k) const {
        return {mulmod(k, generator[0], n), mulmod(k, generator[1], n)};
    }
};

inline TwoVarSolution solve_two_var(u64 r1, u64 r2, const Modulus& modulus) {
    u64 nn = modulus.value();
    r1 %= nn;
    r2 %= nn;
    if (std::gcd(std::gcd(r1, r2), nn) != 1)
        throw normalization_error("solve_two_var: gcd(r1, r2, N) must be 1");
    return {nn, {r2, (nn - r1) % nn}};
}

// Lazy view of the solution set of a one-row system: x = M (0, y)^T mod N
// with y ranging over (Z/N)^(n-1).
class SolutionSet {
  public:
    SolutionSet(UnimodularTransform m, u64 modulus, int n)
        : m_(std::move(m)), cols_((size_t)n), modulus_(modulus) {
        size_ = 1;
        for (int i = 1; i < n; ++i) {
            size_ *= modulus_;
            if (size_ > (u128)1 << 100) throw size_limit_error("solution set size overflows");
        }
    }

    u128 size() const { return size_; }
    int dimension() const { return (int)cols_; }
    u64 modulus() const { return modulus_; }

    std::vector<u64> point(u64 index) const {
        int n = (int)cols_;
        std::vector<u64> y(n, 0);
        for (int i = 1; i < n; ++i) {
            y[i] = index % modulus_;
            index /= modulus_;
        }
        std::vector<u64> x(n, 0);
        for (int r = 0; r < n; ++r) {
            u64 acc = 0;
            for (int c = 1; c < n; ++c) {
                if (y[c] == 0) continue;
                acc = addmod(acc, mulmod(to_residue(m_.at(r, c), modulus_), y[c], modulus_), modulus_);
            }
            x[r] = acc;
        }
        return x;
    }

    std::vector<std::vector<u64>> all(u64 cap = 100000000) const {
        if (size_ > cap) throw size_limit_error("solution set too large to materialize");
        std::vector<std::vector<u64>> out;
        out.reserve((size_t)size_);
        for (u64 i = 0; i < (u64)size_; ++i) out.push_back(point(i));
        return out;
    }

  private:
    UnimodularTransform m_;
    size_t cols_;
    u64 modulus_;
    u128 size_;
};

inline SolutionSet solution_parametrization(const CongruenceSystem& sys) {
    if (sys.j != 1) throw domain_error("solution_parametrization: only single-row systems");
    return SolutionSet(reduction_matrix(sys.rows, sys.modulus), sys.modulus.value(), sys.n);
}

// Exhaustive solution enumeration; N^n is capped at 10^8.
inline std::vector<std::vector<u64>> brute_force_solutions(const CongruenceSystem& sys) {
    u64 nn = sys.modulus.value();
    u128 total = 1;
    for (int i = 0; i < sys.n; ++i) {
        total *= nn;
        if (total > 100000000) throw size_limit_error("brute_force_solutions: N^n exceeds 10^8");
    }
    std::vector<std::vector<u64>> out;
    std::vector<u64> x(sys.n, 0);
    for (;;) {
        bool ok = true;
        for (int r = 0; r < sys.j && ok; ++r) {
            u64 acc = 0;
            for (int c = 0; c < sys.n; ++c) acc = addmod(acc, mulmod(sys.at(r, c), x[c], nn), nn);
            ok = acc == 0;
        }
        if (ok) out.push_back(x);
        int i = sys.n - 1;
        while (i >= 0 && ++x[i] == nn) x[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

// The integer solution lattice of the system: kernel of [A | N*I_j]
// projected to the x block, in canonical (lower-triangular Hermite) form.
inline IntMat solution_lattice(const CongruenceSystem& sys) {
    if (sys.n > 4) throw size_limit_error("solution_lattice: n capped at 4");
    int n = sys.n, j = sys.j;
    IntMat a(j, n + j);
    for (int r = 0; r < j; ++r) {
        for (int c = 0; c < n; ++c) a.at(r, c) = (i64)sys.at(r, c);
        a.at(r, n + r) = (i64)sys.modulus.value();
    }
    IntMat ker = kernel_basis(a);
    IntMat gens(ker.rows, n);
    for (int r = 0; r < ker.rows; ++r)
        for (int c = 0; c < n; ++c) gens.at(r, c) = ker.at(r, c);
    return hnf_rows(std::move(gens));
}

inline Basis2D reduced_solution_basis_2d(u64 r1, u64 r2, const Modulus& modulus) {
    u64 nn = modulus.value();
    auto sol = solve_two_var(r1, r2, modulus);
    Basis2D basis = lattice_basis_2d(
        {{(i64)nn, 0}, {0, (i64)nn}, {(i64)sol.generator[0], (i64)sol.generator[1]}});
    return gauss_reduce_2d(basis);
}

// Number of solutions inside the open box (the origin counts).
inline u64 count_solutions_in_box(const CongruenceSystem& sys, const BoxSpec& box) {
    box.check_compatible(sys.n, sys.j);
    u64 nn = sys.modulus.value();
    BoxWindow w(box, nn, sys.n, sys.j);
    if (sys.n == 2) {
        Basis2D b = reduced_solution_basis_2d(sys.at(0, 0), sys.at(0, 1), sys.modulus);
        return count_points_in_window(b, w);
    }
    if (w.bounding_point_count() > 1e9)
        throw size_limit_error("count_solutions_in_box: box holds more than 10^9 integer points");
    std::vector<i64> radius(sys.n);
    for (int i = 0; i < sys.n; ++i) radius[i] = (i64)std::floor(w.half[i]);
    // Odometer over the bounding integer cube with exact membership test.
    u64 count = 0;
    std::vector<i64> x(sys.n);
    for (int i = 0; i < sys.n; ++i) x[i] = -radius[i];
    for (;;) {
        bool ok = true;
        for (int r = 0; r < sys.j && ok; ++r) {
            u64 acc = 0;
            for (int c = 0; c < sys.n; ++c)
                acc = addmod(acc, mulmod(sys.at(r, c), to_residue(x[c], nn), nn), nn);
            ok = acc == 0;
        }
        if (ok && w.contains(x)) ++count;
        int i = sys.n - 1;
        while (i >= 0 && ++x[i] > radius[i]) {
            x[i] = -radius[i];
            --i;
        }
        if (i < 0) break;
    }
    return count;
}

struct ShortestSolution {
    std::vector<i64> point;
    u64 sup;
};

// sup-norm bound guaranteed for a valid system (Minkowski box argument).
inline double sup_norm_bound(const CongruenceSystem& sys) {
    return std::pow((double)sys.modulus.value(), (double)sys.j / sys.n);
}

// Shortest nonzero solution in sup norm; ties resolved by sign-normalized
// lexicographic order.
inline ShortestSolution shortest_nontrivial(const CongruenceSystem& sys) {
    u64 nn = sys.modulus.value();
    if (sys.n == 2) {
        Basis2D b = reduced_solution_basis_2d(sys.at(0, 0), sys.at(0, 1), sys.modulus);
        Vec2 p = shortest_sup_2d(b);
        return {{p.x, p.y}, sup_norm(p)};
    }
    u128 nj = 1;
    for (int i = 0; i < sys.j; ++i) nj *= nn;
    // Largest integer radius with rmax^n <= N^j.
    auto pow_leq = [&](u128 base) {
        u128 pw = 1;
        for (int i = 0; i < sys.n; ++i) {
            if (pw > nj / base) return false;
            pw *= base;
        }
        return pw <= nj;
    };
    i64 rmax = (i64)std::floor(std::pow((double)nj, 1.0 / sys.n)) + 2;
    while (rmax > 1 && !pow_leq((u128)rmax)) --rmax;
    double pts = std::pow(2.0 * (double)rmax + 1.0, sys.n);
    if (pts > 1e9) throw size_limit_error("shortest_nontrivial: search cube exceeds 10^9 points");
    std::vector<i64> x(sys.n);
    for (i64 s = 1; s <= rmax; ++s) {
        bool found = false;
        std::vector<i64> best;
        for (int i = 0; i < sys.n; ++i) x[i] = -s;
        for (;;) {
            i64 mx = 0;
            for (int i = 0; i < sys.n; ++i) mx = std::max(mx, x[i] < 0 ? -x[i] : x[i]);
            if (mx == s) {
                bool ok = true;
                for (int r = 0; r < sys.j && ok; ++r) {
                    u64 acc = 0;
                    for (int c = 0; c < sys.n; ++c)
                        acc = addmod(acc, mulmod(sys.at(r, c), to_residue(x[c], nn), nn), nn);
                    ok = acc == 0;
                }
                if (ok) {
                    std::vector<i64> cand = x;
                    int first = 0;
                    while (first < sys.n && cand[first] == 0) ++first;
                    if (first < sys.n && cand[first] < 0)
                        for (auto& v : cand) v = -v;
                    if (!found || cand < best) {
                        found = true;
                        best = cand;
                    }
                }
            }
            int i = sys.n - 1;
            while (i >= 0 && ++x[i] > s) x[i--] = -s;
            if (i < 0) break;
        }
        if (found) return {best, (u64)s};
    }
    throw domain_error("shortest_nontrivial: no solution within the guaranteed bound");
}

struct CensusEntry {
    u64 k;   // multiplier in Z/N
    u64 d;   // gcd(k, N)
    i64 x, y;  // centered solution coordinates
};

// All nonzero multipliers k whose centered solution point k*(r2, -r1) lies
// strictly inside the box, sorted by k.
inline std::vector<CensusEntry> short_solution_census(u64 r1, u64 r2, const Modulus& modulus,
                                                      const BoxSpec& box) {
    u64 nn = modulus.value();
    auto sol = solve_two_var(r1, r2, modulus);
    BoxWindow w(box, nn, 2, 1);
    std::vector<CensusEntry> out;
    if (2.0 * std::max(w.half[0], w.half[1]) <= (double)nn) {
        // Box sits inside the centered fundamental domain: recover k from the
        // lattice point via v*x - u*y == k*gcd(r1, r2) (mod N).
        auto e = ext_gcd((i64)(r1 % nn), (i64)(r2 % nn));
        u64 ginv = inverse_mod(to_residue(e.g, nn), nn);
        u64 ur = to_residue(e.u, nn), vr = to_residue(e.v, nn);
        Basis2D b = reduced_solution_basis_2d(r1, r2, modulus);
        for_each_point_in_window(b, w, [&](Vec2 p) {
            if (p.x == 0 && p.y == 0) return;
            u64 lhs = submod(mulmod(vr, to_residue(p.x, nn), nn), mulmod(ur, to_residue(p.y, nn), nn), nn);
            u64 k = mulmod(lhs, ginv, nn);
            out.push_back({k, std::gcd(k, nn), p.x, p.y});
        });
        std::sort(out.begin(), out.end(), [](const CensusEntry& a, const CensusEntry& b) { return a.k < b.k; });
    } else {
        if (nn > 100000000) throw size_limit_error("short_solution_census: modulus too large for direct scan");
        for (u64 k = 1; k < nn; ++k) {
            auto p = sol.point(k);
            i64 cx = centered_rep((i64)p[0], nn), cy = centered_rep((i64)p[1], nn);
            const i64 pt[2] = {cx, cy};
            if (w.contains(pt)) out.push_back({k, std::gcd(k, nn), cx, cy});
        }
    }
    return out;
}

} // namespace latcong
