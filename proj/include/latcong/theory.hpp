#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"

namespace latcong {

// Limit distribution of the solution count r in a box of unit volume a:
//   P(r = 1)      = 1 - 3a/pi^2
//   P(r = 2k + 1) = (3a/pi^2) (1/k^2 - 1/(k+1)^2)
//   P(r even)     = 0
inline double c2r_closed(double a, u64 r) {
    if (!(a > 0.0 && a <= 2.0)) throw domain_error("c2r_closed: a must lie in (0, 2]");
    if (r < 1) throw domain_error("c2r_closed: r must be positive");
    if (r % 2 == 0) return 0.0;
    double q = 3.0 * a / (std::numbers::pi * std::numbers::pi);
    if (r == 1) return 1.0 - q;
    double k = (double)((r - 1) / 2);
    return q * (1.0 / (k * k) - 1.0 / ((k + 1.0) * (k + 1.0)));
}

// P(some nonzero solution in the box) = 3a/pi^2.
inline double p_nontrivial(double a) {
    if (!(a > 0.0 && a <= 2.0)) throw domain_error("p_nontrivial: a must lie in (0, 2]");
    return 3.0 * a / (std::numbers::pi * std::numbers::pi);
}

// Lower bound for P(some primitive solution in the box).
inline double primitive_lower_bound(double a) {
    return p_nontrivial(a) * (1.0 - 1.0 / std::numbers::sqrt2);
}

struct TheoryTable {
    double a = 1.0;
    u64 r_max = 9;
    std::vector<std::pair<u64, double>> entries;  // (odd r, c2r)
    double p_nontrivial = 0.0;
    double primitive_bound = 0.0;
    double tail = 0.0;  // mass above r_max; entries sum + tail == 1
};

inline TheoryTable theory_summary(double a, u64 r_max) {
    if (r_max < 1) throw domain_error("theory_summary: r_max must be positive");
    TheoryTable t;
    t.a = a;
    t.r_max = r_max;
    t.p_nontrivial = p_nontrivial(a);
    t.primitive_bound = primitive_lower_bound(a);
    for (u64 r = 1; r <= r_max; r += 2) t.entries.push_back({r, c2r_closed(a, r)});
    u64 k_last = (t.entries.back().first - 1) / 2;
    double q = 3.0 * a / (std::numbers::pi * std::numbers::pi);
    t.tail = k_last == 0 ? q : q / ((double)(k_last + 1) * (double)(k_last + 1));
    return t;
}

} // namespace latcong
