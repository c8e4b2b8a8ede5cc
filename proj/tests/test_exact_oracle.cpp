#include <catch_amalgamated.hpp>
#include <cmath>

#include "catalog.hpp"
#include "worm/exact_oracle.hpp"

using namespace worm;
using namespace worm::testing;

TEST_CASE("enumerate_classes on K2 and cycles") {
    auto k2 = generate("complete", {2});
    auto t2 = enumerate_classes(k2, 0.5);
    REQUIRE(t2.c0.size() == 1);
    REQUIRE(t2.c2.size() == 1);
    CHECK(t2.c0[0].count() == 0);
    CHECK(t2.c2[0].count() == 1);

    auto c4 = generate("cycle", {4});
    auto t4 = enumerate_classes(c4, 0.5);
    CHECK(t4.c0.size() == 2);  // empty and the full cycle: 2^{m-n+1}

    double x = 0.3;
    auto c3 = generate("cycle", {3});
    auto t3 = enumerate_classes(c3, x);
    CHECK(t3.lambda_c0 == Catch::Approx(1 + x * x * x).epsilon(1e-14));
    // C_{12} on the triangle: {e12} and {e13,e23}
    auto cw = lambda_of_class(c3, {0, 1}, x);
    CHECK(cw.lambda == Catch::Approx(x + x * x).epsilon(1e-14));
    CHECK(cw.count == 2);
}

TEST_CASE("cycle space cardinality |C0| = 2^{m-n+1}") {
    for (const auto& g : small_m_set(12)) {
        auto t = enumerate_classes(g, 0.5);
        CHECK(t.c0.size() == (std::size_t(1) << (g.m() - g.n + 1)));
    }
}

TEST_CASE("ising_moment_bruteforce") {
    auto k2 = generate("complete", {2});
    CHECK(ising_moment_bruteforce(k2, 0.7, {}) == Catch::Approx(1.0));
    CHECK(ising_moment_bruteforce(k2, 0.5, {0, 1}) == Catch::Approx(std::tanh(0.5)).epsilon(1e-12));
    // odd W vanishes by spin-flip symmetry
    auto c3 = generate("cycle", {3});
    CHECK(ising_moment_bruteforce(c3, 0.8, {1}) == Catch::Approx(0.0).margin(1e-12));
    CHECK(ising_moment_bruteforce(c3, 0.8, {0, 1, 2}) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("high temperature identity examples") {
    auto k2 = generate("complete", {2});
    auto r = verify_high_temp(k2, 0.5, {0, 1});
    CHECK(r.pass);
    CHECK(r.lhs == Catch::Approx(std::tanh(0.5)).epsilon(1e-10));

    auto c3 = generate("cycle", {3});
    double x = std::tanh(0.9);
    auto r2 = verify_high_temp(c3, 0.9, {0, 1});
    CHECK(r2.pass);
    CHECK(r2.rhs == Catch::Approx(x * (1 + x) / (1 + x * x * x)).epsilon(1e-12));

    auto r3 = verify_high_temp(c3, 0.9, {});
    CHECK(r3.lhs == Catch::Approx(1.0));
    CHECK(r3.pass);
}

TEST_CASE("high temperature identity over the full n<=5 connected catalog (pairs and 4-sets)") {
    for (int n = 2; n <= 4; ++n)  // n=5 runs in the acceptance suite
        for (const auto& g : connected_catalog(n))
            for (double beta : {0.2, 0.5, 1.0, 2.0}) {
                for (int u = 0; u < n; ++u)
                    for (int v = u + 1; v < n; ++v) REQUIRE(verify_high_temp(g, beta, {u, v}).pass);
                if (n >= 4) REQUIRE(verify_high_temp(g, beta, {0, 1, 2, 3}).pass);
            }
}

TEST_CASE("ps_prob") {
    auto k2 = generate("complete", {2});
    double x = 0.4;
    auto t = enumerate_classes(k2, x);
    CHECK(ps_prob(t, EdgeSubset(1)) == Catch::Approx(1.0 / (1 + x)).epsilon(1e-14));
    EdgeSubset e(1);
    e.set(0);
    CHECK(ps_prob(t, e) == Catch::Approx(x / (1 + x)).epsilon(1e-14));

    // normalization over the whole table
    for (const auto& g : small_m_set(10)) {
        auto tg = enumerate_classes(g, 0.6);
        double total = 0;
        for (const auto& A : tg.c0) total += ps_prob(tg, A);
        for (const auto& A : tg.c2) total += ps_prob(tg, A);
        CHECK(total == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("susceptibility dual routes") {
    auto k2 = generate("complete", {2});
    CHECK(susceptibility_exact(k2, 0.5) == Catch::Approx(1 + std::tanh(0.5)).epsilon(1e-10));
    CHECK(susceptibility_exact(k2, 1e-6) == Catch::Approx(1.0).epsilon(1e-5));

    auto c3 = generate("cycle", {3});
    CHECK_NOTHROW(susceptibility_exact(c3, 0.5));  // cross-check inside
    for (const auto& g : small_m_set(10)) CHECK_NOTHROW(susceptibility_exact(g, 0.7));
}

TEST_CASE("two point dual routes") {
    auto k2 = generate("complete", {2});
    CHECK(two_point_exact(k2, 0.8, 0, 1) == Catch::Approx(std::tanh(0.8)).epsilon(1e-10));

    auto c3 = generate("cycle", {3});
    double x = std::tanh(0.6);
    CHECK(two_point_exact(c3, 0.6, 0, 1) ==
          Catch::Approx(x * (1 + x) / (1 + x * x * x)).epsilon(1e-10));
    // x(1+x)/(1+x^3) = x/(1-x+x^2)
    CHECK(two_point_exact(c3, 0.6, 0, 1) == Catch::Approx(x / (1 - x + x * x)).epsilon(1e-10));
    CHECK(two_point_exact(c3, 0.6, 1, 0) == two_point_exact(c3, 0.6, 0, 1));
    CHECK_THROWS_AS(two_point_exact(c3, 0.6, 1, 1), BadLabel);
}

TEST_CASE("measure bounds") {
    auto k2 = generate("complete", {2});
    auto rep = verify_measure_bounds(k2, 0.5);
    CHECK(rep.pass);
    CHECK(rep.checks[0].lhs == Catch::Approx(2.0 / 3.0));  // pi(0) on K2 at x=0.5

    for (const auto& g : small_m_set(12))
        for (double x : {0.1, 0.5, 0.9}) REQUIRE(verify_measure_bounds(g, x).pass);
}

TEST_CASE("cycle space bijection") {
    auto c3 = generate("cycle", {3});
    EdgeSubset f(3);
    f.set(c3.edge_index(0, 1));
    auto rep = verify_bijection(c3, {0, 1}, f);
    CHECK(rep.pass);
    CHECK(rep.checks.back().lhs == 2);  // |C_{12}| = |C0| = 2

    auto c4 = generate("cycle", {4});
    EdgeSubset f2(4);
    f2.set(c4.edge_index(0, 1));
    CHECK(verify_bijection(c4, {0, 1}, f2).pass);

    // F = 0, W = {}: identity map on C0
    CHECK(verify_bijection(c3, {}, EdgeSubset(3)).pass);

    // boundary of F must equal W
    CHECK_THROWS_AS(verify_bijection(c3, {0, 2}, f), BijectionViolation);
}

TEST_CASE("enumeration caps") {
    auto big = generate("grid", {5, 5});  // m = 40
    CHECK_THROWS_AS(enumerate_classes(big, 0.5), TooLarge);
    CHECK_THROWS_AS(ising_moment_bruteforce(big, 0.5, {0, 1}), TooLarge);
}
