#include <catch_amalgamated.hpp>

#include <set>

#include <latcong/box.hpp>
#include <latcong/lattice2d.hpp>
#include <latcong/rng.hpp>
#include <latcong/solver.hpp>

using namespace latcong;
using Catch::Approx;

namespace {

Basis2D congruence_basis(u64 r1, u64 r2, const Modulus& m) {
    auto sol = solve_two_var(r1, r2, m);
    return gauss_reduce_2d(lattice_basis_2d(
        {{(i64)m.value(), 0}, {0, (i64)m.value()}, {(i64)sol.generator[0], (i64)sol.generator[1]}}));
}

bool reduced_inequalities(const Basis2D& b) {
    auto n1 = norm2(b.b1), n2 = norm2(b.b2);
    Vec2 sum{b.b2.x + b.b1.x, b.b2.y + b.b1.y};
    Vec2 diff{b.b2.x - b.b1.x, b.b2.y - b.b1.y};
    return n1 <= n2 && n2 <= norm2(sum) && n2 <= norm2(diff);
}

} // namespace

TEST_CASE("box spec validates parameters") {
    CHECK_THROWS_AS(BoxSpec::rect(0.0), domain_error);
    CHECK_THROWS_AS(BoxSpec::rect(2.0000001), domain_error);
    CHECK_THROWS_AS(BoxSpec::square(-0.5), domain_error);
    CHECK_THROWS_AS(BoxSpec::cube(0.0), domain_error);
    CHECK_THROWS_AS(BoxSpec::cube(1.0), domain_error);
    CHECK_NOTHROW(BoxSpec::rect(2.0));
    CHECK_NOTHROW(BoxSpec::cube(0.999));

    CHECK_THROWS_AS(BoxSpec::rect(1.0).check_compatible(3, 1), domain_error);
    CHECK_THROWS_AS(BoxSpec::square(1.0).check_compatible(3, 2), domain_error);
    CHECK_NOTHROW(BoxSpec::cube(0.5).check_compatible(3, 2));
    CHECK_NOTHROW(BoxSpec::cube(0.5).check_compatible(2, 1));
}

TEST_CASE("box half widths") {
    auto hw = BoxSpec::rect(1.5).half_widths(100, 2, 1);
    REQUIRE(hw.size() == 2);
    CHECK(hw[0] == Approx(5.0));
    CHECK(hw[1] == Approx(7.5));

    hw = BoxSpec::square(1.0).half_widths(100, 2, 1);
    CHECK(hw[0] == Approx(5.0));
    CHECK(hw[1] == Approx(5.0));

    hw = BoxSpec::cube(0.5).half_widths(64, 3, 1);
    REQUIRE(hw.size() == 3);
    for (double h : hw) CHECK(h == Approx(2.0));
    hw = BoxSpec::cube(0.5).half_widths(64, 3, 2);
    for (double h : hw) CHECK(h == Approx(8.0));
}

TEST_CASE("window boundary is strict and exact on integer squares") {
    // square box with a*N = 4: the points with |x| = 1 sit exactly on the
    // boundary and must be excluded
    BoxWindow w(BoxSpec::square(1.0), 4, 2, 1);
    CHECK(w.axis_inside(0, 0));
    CHECK(!w.axis_inside(0, 1));
    CHECK(!w.axis_inside(0, -1));

    Modulus m4(4);
    CHECK(count_solutions_in_box(make_system(m4, 2, 1, {1, 1}), BoxSpec::square(1.0)) == 1);

    // widen just past the boundary and the four sup-norm-1 points appear
    BoxWindow w2(BoxSpec::square(1.26), 4, 2, 1);
    CHECK(w2.axis_inside(0, 1));
}

TEST_CASE("gauss reduction pinned case") {
    Basis2D b{{5, 0}, {4, 1}};
    auto r = gauss_reduce_2d(b);
    CHECK(r.b1 == Vec2{1, -1});
    CHECK(r.b2 == Vec2{3, 2});
    CHECK(det2(r) == 5);
    CHECK(reduced_inequalities(r));
    auto again = gauss_reduce_2d(r);
    CHECK(again.b1 == r.b1);
    CHECK(again.b2 == r.b2);

    CHECK_THROWS_AS(gauss_reduce_2d(Basis2D{{2, 4}, {1, 2}}), domain_error);
}

TEST_CASE("gauss reduction properties on random bases") {
    SeededStream s = derive_stream(31, 0);
    for (int i = 0; i < 3000; ++i) {
        Basis2D b{{(i64)s.uniform_in(0, 2000) - 1000, (i64)s.uniform_in(0, 2000) - 1000},
                  {(i64)s.uniform_in(0, 2000) - 1000, (i64)s.uniform_in(0, 2000) - 1000}};
        if (det2(b) == 0) continue;
        auto r = gauss_reduce_2d(b);
        i128 d0 = det2(b), d1 = det2(r);
        REQUIRE((d1 == d0 || d1 == -d0));
        REQUIRE(reduced_inequalities(r));
        auto twice = gauss_reduce_2d(r);
        REQUIRE(twice.b1 == r.b1);
        REQUIRE(twice.b2 == r.b2);
        // same lattice: canonical HNF bases agree
        auto h0 = lattice_basis_2d({b.b1, b.b2});
        auto h1 = lattice_basis_2d({r.b1, r.b2});
        REQUIRE(h0.b1 == h1.b1);
        REQUIRE(h0.b2 == h1.b2);
    }
}

TEST_CASE("reduced basis of a congruence lattice meets the Minkowski bound") {
    SeededStream s = derive_stream(32, 0);
    double c = std::sqrt(4.0 / 3.0);
    for (int i = 0; i < 500; ++i) {
        u64 nn = s.uniform_in(2, 1000000);
        Modulus m(nn);
        u64 r1, r2;
        do {
            r1 = s.uniform_below(nn);
            r2 = s.uniform_below(nn);
        } while (std::gcd(std::gcd(r1, r2), nn) != 1);
        auto b = congruence_basis(r1, r2, m);
        REQUIRE((det2(b) == (i128)nn || det2(b) == -(i128)nn));
        REQUIRE((double)norm2(b.b1) <= c * (double)nn * (1 + 1e-12));
    }
}

TEST_CASE("lattice_basis_2d returns the canonical HNF basis") {
    // lower-triangular HNF: (3,1) = (4,0) - (1,3) + (0,4) spans with (4,0)
    auto b = lattice_basis_2d({{4, 0}, {0, 4}, {1, 3}});
    CHECK(b.b1 == Vec2{4, 0});
    CHECK(b.b2 == Vec2{3, 1});
    auto d = det2(b);
    CHECK((d == 4 || d == -4));
}

TEST_CASE("shortest sup-norm vector pinned cases") {
    Modulus m25(25);
    auto v = shortest_sup_2d(congruence_basis(1, 1, m25));
    CHECK(v == Vec2{1, -1});

    // unit grid: canonical representative of the four sup-1 points
    auto u = shortest_sup_2d(gauss_reduce_2d(Basis2D{{1, 0}, {0, 1}}));
    CHECK(u == Vec2{0, 1});
}

TEST_CASE("shortest sup-norm vector matches the multiplier scan") {
    SeededStream s = derive_stream(33, 0);
    for (int i = 0; i < 400; ++i) {
        u64 nn = s.uniform_in(5, 300);
        Modulus m(nn);
        u64 r1, r2;
        do {
            r1 = s.uniform_below(nn);
            r2 = s.uniform_below(nn);
        } while (std::gcd(std::gcd(r1, r2), nn) != 1);
        auto sol = solve_two_var(r1, r2, m);
        Vec2 best{0, 0};
        u64 best_sup = 0;
        bool found = false;
        for (u64 k = 1; k < nn; ++k) {
            auto p = sol.point(k);
            Vec2 cp = detail::canonical_sign(
                {centered_rep((i64)p[0], nn), centered_rep((i64)p[1], nn)});
            u64 sup = sup_norm(cp);
            if (!found || sup < best_sup ||
                (sup == best_sup && detail::canonical_less(cp, best))) {
                found = true;
                best = cp;
                best_sup = sup;
            }
        }
        REQUIRE(found);
        // the scan oracle is valid because the minimum sup is below N/2
        REQUIRE(2 * best_sup < nn);
        auto got = shortest_sup_2d(congruence_basis(r1, r2, m));
        REQUIRE(got == best);
    }
}

TEST_CASE("window counting agrees with the residue scan") {
    SeededStream s = derive_stream(34, 0);
    for (int i = 0; i < 600; ++i) {
        u64 nn = s.uniform_in(5, 500);
        Modulus m(nn);
        u64 r1, r2;
        do {
            r1 = s.uniform_below(nn);
            r2 = s.uniform_below(nn);
        } while (std::gcd(std::gcd(r1, r2), nn) != 1);
        BoxSpec box = BoxSpec::square(1.0);
        switch (s.uniform_below(4)) {
        case 0: box = BoxSpec::square(0.25 + 1.75 * (double)s.uniform_below(8) / 8.0); break;
        case 1: box = BoxSpec::rect(0.25 + 1.75 * (double)s.uniform_below(8) / 8.0); break;
        case 2: box = BoxSpec::cube(0.1 + 0.8 * (double)s.uniform_below(8) / 8.0); break;
        default: break;
        }
        BoxWindow w(box, nn, 2, 1);
        auto sol = solve_two_var(r1, r2, m);
        u64 naive = 0;
        for (u64 k = 0; k < nn; ++k) {
            auto p = sol.point(k);
            i64 x = centered_rep((i64)p[0], nn), y = centered_rep((i64)p[1], nn);
            if (w.axis_inside(0, x) && w.axis_inside(1, y)) ++naive;
        }
        auto basis = congruence_basis(r1, r2, m);
        REQUIRE(count_points_in_window(basis, w) == naive);
        // the visitor produces each point exactly once
        std::set<std::pair<i64, i64>> seen;
        u64 visits = 0;
        for_each_point_in_window(basis, w, [&](Vec2 p) {
            ++visits;
            seen.insert({p.x, p.y});
            REQUIRE(w.axis_inside(0, p.x));
            REQUIRE(w.axis_inside(1, p.y));
        });
        REQUIRE(visits == seen.size());
        REQUIRE(visits == naive);
    }
}
