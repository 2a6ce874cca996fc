#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"

namespace latcong {

// Open boxes centered at the origin, scaled by the modulus:
//   rect_a   (-sqrt(N)/2, sqrt(N)/2) x (-a*sqrt(N)/2, a*sqrt(N)/2)   n = 2, j = 1
//   square_b (-sqrt(a*N)/2, sqrt(a*N)/2)^2                           n = 2, j = 1
//   cube_d   (-D*N^(j/n), D*N^(j/n))^n                               any n, j
// Membership is strict on every axis.
struct BoxSpec {
    enum class Shape { rect_a, square_b, cube_d };

    Shape shape = Shape::square_b;
    double a = 1.0;  // aspect/volume parameter for rect_a and square_b
    double d = 0.5;  // scale parameter for cube_d

    static BoxSpec rect(double a) {
        check_a(a);
        return {Shape::rect_a, a, 0.0};
    }
    static BoxSpec square(double a) {
        check_a(a);
        return {Shape::square_b, a, 0.0};
    }
    static BoxSpec cube(double d) {
        if (!(d > 0.0 && d < 1.0)) throw domain_error("box: cube scale D must lie in (0, 1)");
        return {Shape::cube_d, 0.0, d};
    }

    void check_compatible(int n, int j) const {
        if (shape == Shape::cube_d) return;
        if (n != 2 || j != 1)
            throw domain_error("box: rectangle and square shapes require n = 2, j = 1");
    }

    std::vector<double> half_widths(u64 modulus, int n, int j) const {
        check_compatible(n, j);
        double nn = (double)modulus;
        switch (shape) {
        case Shape::rect_a:
            return {std::sqrt(nn) / 2.0, a * std::sqrt(nn) / 2.0};
        case Shape::square_b: {
            double h = std::sqrt(a * nn) / 2.0;
            return {h, h};
        }
        case Shape::cube_d:
        default: {
            double h = d * std::pow(nn, (double)j / n);
            return std::vector<double>((size_t)n, h);
        }
        }
    }

  private:
    static void check_a(double a) {
        if (!(a > 0.0 && a <= 2.0)) throw domain_error("box: aspect a must lie in (0, 2]");
    }
};

// A box evaluated at a concrete modulus; compares (2x)^2 < (2h)^2 so that
// integer coordinates are classified exactly whenever (2h)^2 is integral.
struct BoxWindow {
    int n = 0;
    std::vector<double> half;      // h_i
    std::vector<double> four_h2;   // (2 h_i)^2

    BoxWindow() = default;
    BoxWindow(const BoxSpec& spec, u64 modulus, int n_, int j_) : n(n_) {
        half = spec.half_widths(modulus, n_, j_);
        four_h2.resize(half.size());
        switch (spec.shape) {
        case BoxSpec::Shape::rect_a:
            four_h2[0] = (double)modulus;
            four_h2[1] = spec.a * spec.a * (double)modulus;
            break;
        case BoxSpec::Shape::square_b:
            four_h2[0] = four_h2[1] = spec.a * (double)modulus;
            break;
        case BoxSpec::Shape::cube_d:
            for (auto& v : four_h2) v = 4.0 * half[0] * half[0];
            break;
        }
    }

    bool axis_inside(int i, i64 x) const {
        double t = (double)(2 * x);
        return t * t < four_h2[i];
    }

    bool contains(std::span<const i64> x) const {
        for (int i = 0; i < n; ++i)
            if (!axis_inside(i, x[i])) return false;
        return true;
    }

    // Count of integer points (all axes) in the bounding product, as a guard.
    double bounding_point_count() const {
        double t = 1.0;
        for (double h : half) t *= 2.0 * std::floor(h) + 1.0;
        return t;
    }
};

} // namespace latcong
