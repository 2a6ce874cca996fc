#include <catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include <latcong/rng.hpp>
#include <latcong/solver.hpp>

using namespace latcong;

namespace {

// Determinant of the transform reduced mod n, by cofactor expansion.
u64 det_mod(const UnimodularTransform& t, u64 n) {
    int dim = t.n;
    std::vector<u64> m((size_t)dim * dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m[(size_t)r * dim + c] = to_residue(t.at(r, c), n);
    std::vector<int> cols(dim);
    for (int i = 0; i < dim; ++i) cols[i] = i;
    // iterative Laplace over permutations is fine for dim <= 5
    u64 det = 0;
    std::sort(cols.begin(), cols.end());
    do {
        int inversions = 0;
        for (int i = 0; i < dim; ++i)
            for (int k = i + 1; k < dim; ++k)
                if (cols[i] > cols[k]) ++inversions;
        u64 term = 1;
        for (int r = 0; r < dim; ++r) term = mulmod(term, m[(size_t)r * dim + cols[r]], n);
        if (inversions % 2 == 0)
            det = addmod(det, term, n);
        else
            det = submod(det, term, n);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return det;
}

std::vector<u64> random_valid_row(int n, const Modulus& modulus, SeededStream& s) {
    u64 nn = modulus.value();
    for (;;) {
        std::vector<u64> row(n);
        u64 g = nn;
        for (auto& v : row) {
            v = s.uniform_below(nn);
            g = std::gcd(g, v);
        }
        if (g == 1) return row;
    }
}

std::set<std::vector<u64>> as_set(std::vector<std::vector<u64>> v) {
    return {v.begin(), v.end()};
}

} // namespace

TEST_CASE("bezout_elim_2 pinned cases") {
    auto b = bezout_elim_2(4, 6);
    CHECK(b.g == 2);
    CHECK(b.m[0] == -1);
    CHECK(b.m[1] == 3);
    CHECK(b.m[2] == 1);
    CHECK(b.m[3] == -2);
    CHECK(4 * b.m[0] + 6 * b.m[2] == 2);
    CHECK(4 * b.m[1] + 6 * b.m[3] == 0);
    CHECK(b.m[0] * b.m[3] - b.m[1] * b.m[2] == -1);

    b = bezout_elim_2(1, 0);
    CHECK(b.g == 1);
    CHECK(b.m == std::array<i64, 4>{1, 0, 0, -1});

    b = bezout_elim_2(5, 5);
    CHECK(b.g == 5);
    CHECK(b.m[1] == 1);
    CHECK(b.m[3] == -1);

    b = bezout_elim_2(0, 0);
    CHECK(b.g == 0);
    CHECK(b.m[0] * b.m[3] - b.m[1] * b.m[2] == -1);
}

TEST_CASE("bezout_elim_2 eliminates and keeps determinant -1") {
    SeededStream s = derive_stream(21, 0);
    for (int i = 0; i < 10000; ++i) {
        i64 a = (i64)s.uniform_below(1000000);
        i64 b = (i64)s.uniform_below(1000000);
        auto e = bezout_elim_2(a, b);
        REQUIRE(a * e.m[0] + b * e.m[2] == e.g);
        REQUIRE(a * e.m[1] + b * e.m[3] == 0);
        REQUIRE(e.m[0] * e.m[3] - e.m[1] * e.m[2] == -1);
        REQUIRE(e.g == std::gcd(a, b));
    }
}

TEST_CASE("reduction_matrix pinned cases") {
    Modulus m5(5);
    auto t = reduction_matrix({2, 3, 4}, m5);
    auto apply = [](const std::vector<i64>& row, const UnimodularTransform& tr, u64 n) {
        std::vector<u64> out(tr.n);
        for (int c = 0; c < tr.n; ++c) {
            i128 acc = 0;
            for (int r = 0; r < tr.n; ++r) acc += (i128)row[r] * tr.at(r, c);
            out[c] = to_residue((i64)(acc % (i128)n), n);
        }
        return out;
    };
    CHECK(apply({2, 3, 4}, t, 5) == std::vector<u64>{1, 0, 0});
    CHECK(det_mod(t, 5) == to_residue(t.det_sign, 5));

    Modulus m7(7);
    auto t2 = reduction_matrix({6, 10, 15}, m7);
    CHECK(apply({6, 3, 1}, t2, 7) == std::vector<u64>{1, 0, 0});  // inputs reduce mod 7 first

    Modulus m9(9);
    auto t3 = reduction_matrix({3, 0, 0}, m9);
    CHECK(apply({3, 0, 0}, t3, 9) == std::vector<u64>{3, 0, 0});
}

TEST_CASE("reduction_matrix identity on random rows") {
    SeededStream s = derive_stream(22, 0);
    for (int i = 0; i < 10000; ++i) {
        u64 nn = s.uniform_in(2, 1000000);
        Modulus modulus(nn);
        int n = (int)s.uniform_in(2, 5);
        std::vector<u64> row(n);
        for (auto& v : row) v = s.uniform_below(nn);
        auto t = reduction_matrix(row, modulus);
        REQUIRE(t.det_sign == ((n - 1) % 2 == 0 ? 1 : -1));
        REQUIRE(det_mod(t, nn) == to_residue(t.det_sign, nn));
        u64 g = 0;
        for (u64 v : row) g = std::gcd(g, v);
        for (int c = 0; c < n; ++c) {
            i128 acc = 0;
            for (int r = 0; r < n; ++r) acc += (i128)(i64)row[r] * t.at(r, c);
            u64 got = to_residue((i64)(acc % (i128)nn), nn);
            REQUIRE(got == (c == 0 ? g % nn : 0));
        }
    }
}

TEST_CASE("solve_two_var pinned cases") {
    Modulus m5(5);
    auto sol = solve_two_var(1, 1, m5);
    CHECK(sol.generator == std::array<u64, 2>{1, 4});
    std::set<std::array<u64, 2>> orbit;
    for (u64 k = 0; k < 5; ++k) orbit.insert(sol.point(k));
    CHECK(orbit == std::set<std::array<u64, 2>>{
                       {0, 0}, {1, 4}, {2, 3}, {3, 2}, {4, 1}});

    Modulus m7(7);
    CHECK(solve_two_var(0, 1, m7).generator == std::array<u64, 2>{1, 0});

    Modulus m6(6);
    CHECK_THROWS_AS(solve_two_var(2, 4, m6), normalization_error);
}

TEST_CASE("make_system validates") {
    Modulus m4(4);
    CHECK_THROWS_AS(make_system(m4, 1, 1, {1}), domain_error);
    CHECK_THROWS_AS(make_system(m4, 2, 2, {1, 1, 1, 1}), domain_error);
    CHECK_THROWS_AS(make_system(m4, 2, 1, {2, 2}), normalization_error);
    CHECK_THROWS_AS(make_system(m4, 2, 1, {1, 1, 1}), domain_error);
    // rank mod 2 collapses even though each row is normalized
    CHECK_THROWS_AS(make_system(m4, 3, 2, {1, 1, 1, 3, 3, 3}), normalization_error);
    auto ok = make_system(m4, 3, 2, {1, 0, 0, 0, 1, 0});
    CHECK(ok.at(1, 1) == 1);
}

TEST_CASE("parametrization equals brute force on pinned systems") {
    Modulus m5(5);
    auto sys = make_system(m5, 2, 1, {1, 1});
    auto param = solution_parametrization(sys).all();
    CHECK(as_set(param) == as_set(brute_force_solutions(sys)));
    CHECK(param.size() == 5);

    Modulus m6(6);
    auto sys2 = make_system(m6, 2, 1, {0, 1});
    std::set<std::vector<u64>> expect;
    for (u64 x = 0; x < 6; ++x) expect.insert({x, 0});
    CHECK(as_set(solution_parametrization(sys2).all()) == expect);

    Modulus m10(10);
    auto sys3 = make_system(m10, 2, 1, {2, 3});
    CHECK(as_set(solution_parametrization(sys3).all()) ==
          as_set(brute_force_solutions(sys3)));
}

TEST_CASE("brute force sizes") {
    Modulus m5(5);
    CHECK(brute_force_solutions(make_system(m5, 2, 1, {1, 1})).size() == 5);
    Modulus m30(30);
    CHECK(brute_force_solutions(make_system(m30, 2, 1, {7, 11})).size() == 30);
    Modulus m4(4);
    auto sols = brute_force_solutions(make_system(m4, 3, 2, {1, 0, 0, 0, 1, 0}));
    REQUIRE(sols.size() == 4);
    for (const auto& x : sols) {
        CHECK(x[0] == 0);
        CHECK(x[1] == 0);
    }
}

TEST_CASE("parametrization equals brute force on random single-row systems") {
    SeededStream s = derive_stream(23, 0);
    for (int i = 0; i < 150; ++i) {
        int n = (int)s.uniform_in(2, 4);
        u64 cap = n == 2 ? 30 : n == 3 ? 30 : 12;
        Modulus modulus(s.uniform_in(2, cap));
        auto row = random_valid_row(n, modulus, s);
        auto sys = make_system(modulus, n, 1, row);
        auto param = solution_parametrization(sys);
        u128 expect = 1;
        for (int k = 1; k < n; ++k) expect *= modulus.value();
        REQUIRE(param.size() == expect);
        REQUIRE(as_set(param.all()) == as_set(brute_force_solutions(sys)));
    }
}

TEST_CASE("shortest_nontrivial pinned cases") {
    Modulus m25(25);
    auto sh = shortest_nontrivial(make_system(m25, 2, 1, {1, 1}));
    CHECK(sh.point == std::vector<i64>{1, -1});
    CHECK(sh.sup == 1);

    Modulus m50(50);
    auto sh2 = shortest_nontrivial(make_system(m50, 2, 1, {1, 7}));
    CHECK(sh2.sup == 7);

    Modulus m9(9);
    auto sh3 = shortest_nontrivial(make_system(m9, 2, 1, {0, 1}));
    CHECK(sh3.point == std::vector<i64>{1, 0});
    CHECK(sh3.sup == 1);
}

TEST_CASE("shortest solution obeys the sup-norm bound") {
    SeededStream s = derive_stream(24, 0);
    for (int i = 0; i < 400; ++i) {
        int n = (int)s.uniform_in(2, 4);
        u64 cap = n == 2 ? 100000 : n == 3 ? 500 : 60;
        Modulus modulus(s.uniform_in(2, cap));
        int j = 1;
        if (n >= 3 && s.uniform_below(2) == 1) j = (int)s.uniform_in(1, n - 1);
        std::vector<u64> rows;
        CongruenceSystem sys{modulus, n, j, {}};
        for (;;) {
            rows.clear();
            for (int r = 0; r < j; ++r) {
                auto row = random_valid_row(n, modulus, s);
                rows.insert(rows.end(), row.begin(), row.end());
            }
            try {
                sys = make_system(modulus, n, j, rows);
                break;
            } catch (const normalization_error&) {
            }
        }
        auto sh = shortest_nontrivial(sys);
        REQUIRE(sh.sup >= 1);
        REQUIRE((double)sh.sup <= sup_norm_bound(sys) + 1e-9);
        // the reported point really solves the system
        u64 nn = modulus.value();
        for (int r = 0; r < j; ++r) {
            u64 acc = 0;
            for (int c = 0; c < n; ++c)
                acc = addmod(acc, mulmod(sys.at(r, c), to_residue(sh.point[c], nn), nn), nn);
            REQUIRE(acc == 0);
        }
    }
}

TEST_CASE("count_solutions_in_box pinned cases") {
    Modulus m25(25);
    CHECK(count_solutions_in_box(make_system(m25, 2, 1, {1, 1}), BoxSpec::square(2.0)) == 7);
    Modulus m9(9);
    CHECK(count_solutions_in_box(make_system(m9, 2, 1, {1, 0}), BoxSpec::square(1.0)) == 3);
}

TEST_CASE("box counts are odd and census-consistent") {
    SeededStream s = derive_stream(25, 0);
    for (int i = 0; i < 2000; ++i) {
        Modulus modulus(s.uniform_in(3, 2000));
        auto row = random_valid_row(2, modulus, s);
        double a = 0.25 + 1.75 * (double)s.uniform_below(8) / 8.0;
        BoxSpec box = s.uniform_below(2) ? BoxSpec::square(a) : BoxSpec::rect(a);
        auto sys = make_system(modulus, 2, 1, row);
        u64 r = count_solutions_in_box(sys, box);
        REQUIRE(r >= 1);
        REQUIRE(r % 2 == 1);
        auto census = short_solution_census(row[0], row[1], modulus, box);
        REQUIRE(1 + census.size() == r);
    }
}

TEST_CASE("short_solution_census pinned cases") {
    Modulus m25(25);
    auto census = short_solution_census(1, 1, m25, BoxSpec::square(2.0));
    std::set<u64> ks;
    for (const auto& e : census) {
        ks.insert(e.k);
        CHECK(e.d == 1);
        CHECK(e.x == centered_rep((i64)e.k, 25));
        CHECK(e.y == centered_rep(-(i64)e.k, 25));
    }
    CHECK(ks == std::set<u64>{1, 2, 3, 22, 23, 24});

    Modulus m24(24);
    auto c24 = short_solution_census(1, 1, m24, BoxSpec::square(2.0));
    REQUIRE(!c24.empty());
    std::map<u64, u64> d_of;
    for (const auto& e : c24) d_of[e.k] = e.d;
    for (const auto& [k, d] : d_of) {
        REQUIRE(d_of.count(24 - k) == 1);
        REQUIRE(d_of[24 - k] == d);
    }

    CHECK(short_solution_census(1, 1, m25, BoxSpec::square(0.001)).empty());
}

TEST_CASE("census lattice path agrees with the direct scan") {
    SeededStream s = derive_stream(26, 0);
    for (int i = 0; i < 300; ++i) {
        Modulus modulus(s.uniform_in(3, 400));
        auto row = random_valid_row(2, modulus, s);
        u64 nn = modulus.value();
        BoxSpec box = BoxSpec::square(2.0);
        auto fast = short_solution_census(row[0], row[1], modulus, box);
        // direct scan over multipliers as an oracle
        BoxWindow w(box, nn, 2, 1);
        auto sol = solve_two_var(row[0], row[1], modulus);
        std::vector<CensusEntry> slow;
        for (u64 k = 1; k < nn; ++k) {
            auto p = sol.point(k);
            i64 x = centered_rep((i64)p[0], nn), y = centered_rep((i64)p[1], nn);
            if (w.axis_inside(0, x) && w.axis_inside(1, y))
                slow.push_back({k, std::gcd(k, nn), x, y});
        }
        REQUIRE(fast.size() == slow.size());
        for (size_t t = 0; t < fast.size(); ++t) {
            REQUIRE(fast[t].k == slow[t].k);
            REQUIRE(fast[t].d == slow[t].d);
            REQUIRE(fast[t].x == slow[t].x);
            REQUIRE(fast[t].y == slow[t].y);
        }
    }
}

TEST_CASE("solution set points are distinct and decode consistently") {
    Modulus m7(7);
    auto sys = make_system(m7, 3, 1, {2, 3, 4});
    auto sols = solution_parametrization(sys);
    REQUIRE(sols.size() == 49);
    std::set<std::vector<u64>> seen;
    for (u64 i = 0; i < 49; ++i) seen.insert(sols.point(i));
    CHECK(seen.size() == 49);
    u64 nn = 7;
    for (const auto& x : seen) {
        u64 acc = 0;
        for (int c = 0; c < 3; ++c) acc = addmod(acc, mulmod(sys.at(0, c), x[c], nn), nn);
        REQUIRE(acc == 0);
    }
}
