#pragma once

#include <cstdlib>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"

namespace latcong {

// Dense row-major integer matrix, sized for desk-scale lattice work (n <= 8).
struct IntMat {
    int rows = 0, cols = 0;
    std::vector<i64> a;

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a((size_t)r * c, 0) {}

    i64& at(int r, int c) { return a[(size_t)r * cols + c]; }
    i64 at(int r, int c) const { return a[(size_t)r * cols + c]; }

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    friend bool operator==(const IntMat&, const IntMat&) = default;
    friend bool operator<(const IntMat& x, const IntMat& y) { return x.a < y.a; }
};

namespace detail {

inline i64 checked_i64(i128 v, const char* what) {
    if (v > (i128)INT64_MAX || v < (i128)INT64_MIN) throw size_limit_error(what);
    return (i64)v;
}

// row_i <- u*row_i + v*row_j and row_j <- s*row_i + t*row_j, entrywise.
inline void combine_rows(IntMat& m, int i, int j, i64 u, i64 v, i64 s, i64 t) {
    for (int c = 0; c < m.cols; ++c) {
        i128 x = m.at(i, c), y = m.at(j, c);
        i128 ni = (i128)u * x + (i128)v * y;
        i128 nj = (i128)s * x + (i128)t * y;
        m.at(i, c) = checked_i64(ni, "integer matrix entry overflow");
        m.at(j, c) = checked_i64(nj, "integer matrix entry overflow");
    }
}

inline void combine_cols(IntMat& m, int i, int j, i64 u, i64 v, i64 s, i64 t) {
    for (int r = 0; r < m.rows; ++r) {
        i128 x = m.at(r, i), y = m.at(r, j);
        i128 ni = (i128)u * x + (i128)v * y;
        i128 nj = (i128)s * x + (i128)t * y;
        m.at(r, i) = checked_i64(ni, "integer matrix entry overflow");
        m.at(r, j) = checked_i64(nj, "integer matrix entry overflow");
    }
}

inline void add_row_multiple(IntMat& m, int dst, int src, i64 q) {
    for (int c = 0; c < m.cols; ++c) {
        i128 v = (i128)m.at(dst, c) - (i128)q * m.at(src, c);
        m.at(dst, c) = checked_i64(v, "integer matrix entry overflow");
    }
}

inline void add_col_multiple(IntMat& m, int dst, int src, i64 q) {
    for (int r = 0; r < m.rows; ++r) {
        i128 v = (i128)m.at(r, dst) - (i128)q * m.at(r, src);
        m.at(r, dst) = checked_i64(v, "integer matrix entry overflow");
    }
}

} // namespace detail

// Row-style Hermite form of the lattice spanned by the rows of `gens`
// (full rank n assumed).  Output is n x n lower triangular: row i has
// support in columns 0..i, positive diagonal, and 0 <= at(i,k) < at(k,k)
// for k < i.
inline IntMat hnf_rows(IntMat gens) {
    int n = gens.cols;
    if (gens.rows < n) throw domain_error("hnf_rows: fewer generators than dimension");
    // Triangularize column by column from the right; pivot row for column c
    // ends up at index c and later columns are already cleared in rows <= c.
    for (int c = n - 1; c >= 0; --c) {
        int pivot = -1;
        for (int r = 0; r <= c + (gens.rows - n); ++r) {
            int row = r;
            if (gens.at(row, c) == 0) continue;
            if (pivot < 0) {
                pivot = row;
                continue;
            }
            i64 x = gens.at(pivot, c), y = gens.at(row, c);
            auto e = ext_gcd(x, y);
            detail::combine_rows(gens, pivot, row, e.u, e.v, -(y / e.g), x / e.g);
        }
        if (pivot < 0) throw domain_error("hnf_rows: generators are rank deficient");
        int target = c + (gens.rows - n);
        if (pivot != target)
            for (int k = 0; k < n; ++k) std::swap(gens.at(pivot, k), gens.at(target, k));
    }
    IntMat h(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) h.at(i, k) = gens.at(i + (gens.rows - n), k);
    for (int i = 0; i < n; ++i) {
        if (h.at(i, i) == 0) throw domain_error("hnf_rows: generators are rank deficient");
        if (h.at(i, i) < 0)
            for (int k = 0; k <= i; ++k) h.at(i, k) = -h.at(i, k);
    }
    for (int i = 0; i < n; ++i)
        for (int k = i - 1; k >= 0; --k) {
            i64 d = h.at(k, k);
            i64 q = h.at(i, k) / d;
            if (h.at(i, k) % d < 0) --q;
            if (q) detail::add_row_multiple(h, i, k, q);
        }
    return h;
}

// Determinant of a lower-triangular basis.
inline u128 triangular_det(const IntMat& b) {
    u128 d = 1;
    for (int i = 0; i < b.rows; ++i) d *= (u128)std::llabs(b.at(i, i));
    return d;
}

// Invariant factors d1 | d2 | ... of a square integer matrix (Smith form).
inline std::vector<u64> invariant_factors(IntMat m) {
    int n = m.rows;
    std::vector<u64> out;
    for (int t = 0; t < n; ++t) {
        for (;;) {
            int pr = -1, pc = -1;
            i64 best = 0;
            for (int r = t; r < n; ++r)
                for (int c = t; c < n; ++c) {
                    i64 v = std::llabs(m.at(r, c));
                    if (v != 0 && (best == 0 || v < best)) {
                        best = v;
                        pr = r;
                        pc = c;
                    }
                }
            if (pr < 0) throw domain_error("invariant_factors: matrix is singular");
            if (pr != t)
                for (int c = 0; c < n; ++c) std::swap(m.at(pr, c), m.at(t, c));
            if (pc != t)
                for (int r = 0; r < n; ++r) std::swap(m.at(r, pc), m.at(r, t));
            if (m.at(t, t) < 0)
                for (int c = 0; c < n; ++c) m.at(t, c) = -m.at(t, c);

            // When the pivot divides the entry, subtract a plain multiple so
            // the pivot row/column is untouched; the Bezout combine does not
            // shrink anything in that case and could cycle.
            bool dirty = false;
            for (int r = t + 1; r < n; ++r)
                if (m.at(r, t) != 0) {
                    i64 x = m.at(t, t), y = m.at(r, t);
                    if (y % x == 0) {
                        detail::add_row_multiple(m, r, t, y / x);
                        continue;
                    }
                    auto e = ext_gcd(x, y);
                    detail::combine_rows(m, t, r, e.u, e.v, -(y / e.g), x / e.g);
                    dirty = true;
                }
            for (int c = t + 1; c < n; ++c)
                if (m.at(t, c) != 0) {
                    i64 x = m.at(t, t), y = m.at(t, c);
                    if (y % x == 0) {
                        detail::add_col_multiple(m, c, t, y / x);
                        continue;
                    }
                    auto e = ext_gcd(x, y);
                    detail::combine_cols(m, t, c, e.u, e.v, -(y / e.g), x / e.g);
                    dirty = true;
                }
            if (dirty) continue;

            // Pivot must divide every remaining entry.
            i64 d = m.at(t, t);
            int br = -1;
            for (int r = t + 1; r < n && br < 0; ++r)
                for (int c = t + 1; c < n; ++c)
                    if (m.at(r, c) % d != 0) {
                        br = r;
                        break;
                    }
            if (br < 0) break;
            for (int c = 0; c < n; ++c)
                m.at(t, c) = detail::checked_i64((i128)m.at(t, c) + m.at(br, c), "integer matrix entry overflow");
        }
        out.push_back((u64)m.at(t, t));
    }
    return out;
}

// Basis (as rows) of the integer kernel {x : A x = 0}, which is saturated.
inline IntMat kernel_basis(const IntMat& a) {
    int m = a.cols;
    IntMat w = a;
    IntMat u = IntMat::identity(m);
    int lead = 0;
    for (int r = 0; r < w.rows && lead < m; ++r) {
        int pivot = -1;
        for (int c = lead; c < m; ++c) {
            if (w.at(r, c) == 0) continue;
            if (pivot < 0) {
                pivot = c;
                continue;
            }
            i64 x = w.at(r, pivot), y = w.at(r, c);
            auto e = ext_gcd(x, y);
            detail::combine_cols(w, pivot, c, e.u, e.v, -(y / e.g), x / e.g);
            detail::combine_cols(u, pivot, c, e.u, e.v, -(y / e.g), x / e.g);
        }
        if (pivot < 0) continue;
        if (pivot != lead) {
            for (int i = 0; i < w.rows; ++i) std::swap(w.at(i, pivot), w.at(i, lead));
            for (int i = 0; i < m; ++i) std::swap(u.at(i, pivot), u.at(i, lead));
        }
        ++lead;
    }
    IntMat out(m - lead, m);
    for (int c = lead; c < m; ++c)
        for (int i = 0; i < m; ++i) out.at(c - lead, i) = u.at(i, c);
    return out;
}

} // namespace latcong
