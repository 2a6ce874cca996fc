#pragma once

#include <cmath>
#include <cstdlib>

#include "arith.hpp"
#include "box.hpp"
#include "errors.hpp"
#include "intmat.hpp"

namespace latcong {

struct Vec2 {
    i64 x = 0, y = 0;
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Basis2D {
    Vec2 b1, b2;
};

inline i128 dot2(Vec2 a, Vec2 b) { return (i128)a.x * b.x + (i128)a.y * b.y; }
inline i128 norm2(Vec2 a) { return dot2(a, a); }
inline i128 det2(const Basis2D& b) { return (i128)b.b1.x * b.b2.y - (i128)b.b1.y * b.b2.x; }
inline u64 sup_norm(Vec2 a) { return (u64)std::max(std::llabs(a.x), std::llabs(a.y)); }

namespace detail {

// Nearest integer to p/q with halves rounded toward zero, so that an input
// already satisfying |p| <= q/2 maps to 0.
inline i64 rounded_div(i128 p, i128 q) {
    bool neg = p < 0;
    i128 ap = neg ? -p : p;
    i128 r = (2 * ap + q - 1) / (2 * q);
    return (i64)(neg ? -r : r);
}

} // namespace detail

// Lagrange (Gauss) reduction: returns a basis of the same lattice with
// |b1| <= |b2| <= |b2 +- b1|.  A reduced input comes back unchanged.
inline Basis2D gauss_reduce_2d(Basis2D b) {
    if (det2(b) == 0) throw domain_error("gauss_reduce_2d: basis is singular");
    for (;;) {
        if (norm2(b.b2) < norm2(b.b1)) std::swap(b.b1, b.b2);
        i64 mu = detail::rounded_div(dot2(b.b1, b.b2), norm2(b.b1));
        if (mu == 0) break;
        b.b2 = {b.b2.x - mu * b.b1.x, b.b2.y - mu * b.b1.y};
    }
    if (norm2(b.b2) < norm2(b.b1)) std::swap(b.b1, b.b2);
    return b;
}

// Visit every lattice point u*b1 + v*b2 inside the open window.  The basis
// must be reduced; candidate ranges come from the dual bound, membership is
// re-checked exactly per point.
template <typename Fn>
inline void for_each_point_in_window(const Basis2D& b, const BoxWindow& w, Fn&& fn) {
    double n1 = (double)norm2(b.b1);
    double dt = std::abs((double)det2(b));
    double rmax2 = w.half[0] * w.half[0] + w.half[1] * w.half[1];
    double b2star2 = dt * dt / n1;
    i64 vmax = (i64)std::floor(std::sqrt(rmax2 / b2star2)) + 1;
    for (i64 v = -vmax; v <= vmax; ++v) {
        i64 cx = v * b.b2.x, cy = v * b.b2.y;
        double lo = -1e300, hi = 1e300;
        bool empty = false;
        i64 s[2] = {b.b1.x, b.b1.y};
        i64 c[2] = {cx, cy};
        for (int axis = 0; axis < 2 && !empty; ++axis) {
            if (s[axis] == 0) {
                if (!w.axis_inside(axis, c[axis])) empty = true;
                continue;
            }
            double l = (-w.half[axis] - (double)c[axis]) / (double)s[axis];
            double h = (w.half[axis] - (double)c[axis]) / (double)s[axis];
            if (l > h) std::swap(l, h);
            lo = std::max(lo, l);
            hi = std::min(hi, h);
        }
        if (empty || lo > hi + 1) continue;
        i64 ulo = (i64)std::ceil(lo) - 1;
        i64 uhi = (i64)std::floor(hi) + 1;
        for (i64 u = ulo; u <= uhi; ++u) {
            i64 px = u * b.b1.x + cx, py = u * b.b1.y + cy;
            const i64 pt[2] = {px, py};
            if (w.contains(pt)) fn(Vec2{px, py});
        }
    }
}

inline u64 count_points_in_window(const Basis2D& b, const BoxWindow& w) {
    u64 count = 0;
    for_each_point_in_window(b, w, [&](Vec2) { ++count; });
    return count;
}

namespace detail {

inline bool canonical_less(Vec2 p, Vec2 q) {
    if (p.x != q.x) return p.x < q.x;
    return p.y < q.y;
}

inline Vec2 canonical_sign(Vec2 p) {
    if (p.x < 0 || (p.x == 0 && p.y < 0)) return -p;
    return p;
}

} // namespace detail

// Nonzero lattice vector of minimal sup norm; ties broken by sign-normalized
// lexicographic order (first nonzero coordinate positive).
inline Vec2 shortest_sup_2d(const Basis2D& reduced) {
    const Basis2D& b = reduced;
    double n1 = (double)norm2(b.b1);
    double dt = std::abs((double)det2(b));
    // The sup-minimizer has Euclidean norm at most sqrt(2)*|b1|.
    double r2 = 2.0 * n1;
    double b2star2 = dt * dt / n1;
    i64 vmax = (i64)std::floor(std::sqrt(r2 / b2star2)) + 1;
    bool found = false;
    Vec2 best{0, 0};
    u64 best_sup = 0;
    auto consider = [&](Vec2 p) {
        if (p.x == 0 && p.y == 0) return;
        Vec2 cp = detail::canonical_sign(p);
        u64 s = sup_norm(cp);
        if (!found || s < best_sup || (s == best_sup && detail::canonical_less(cp, best))) {
            found = true;
            best = cp;
            best_sup = s;
        }
    };
    for (i64 v = -vmax; v <= vmax; ++v) {
        double center = -(double)v * (double)dot2(b.b1, b.b2) / n1;
        double radius = std::sqrt(r2 / n1) + 1.0;
        i64 ulo = (i64)std::floor(center - radius);
        i64 uhi = (i64)std::ceil(center + radius);
        for (i64 u = ulo; u <= uhi; ++u)
            consider({u * b.b1.x + v * b.b2.x, u * b.b1.y + v * b.b2.y});
    }
    if (!found) throw domain_error("shortest_sup_2d: no nonzero vector found");
    return best;
}

// Canonical 2D basis of the lattice spanned by the given generators.
inline Basis2D lattice_basis_2d(const std::vector<Vec2>& gens) {
    IntMat m((int)gens.size(), 2);
    for (size_t i = 0; i < gens.size(); ++i) {
        m.at((int)i, 0) = gens[i].x;
        m.at((int)i, 1) = gens[i].y;
    }
    IntMat h = hnf_rows(std::move(m));
    return {{h.at(0, 0), h.at(0, 1)}, {h.at(1, 0), h.at(1, 1)}};
}

} // namespace latcong
