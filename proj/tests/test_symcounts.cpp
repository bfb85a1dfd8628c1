#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "klsym/symcounts.hpp"

using namespace klsym;

TEST_CASE("small membership examples") {
    CHECK(d_k(2, 3, 1) == 0);
    CHECK(d_k(3, 7, 1) == 0);
    CHECK(d_k(5, 2, 1) == 0);

    auto s23 = s_k_set(2, 3, 2);
    REQUIRE(s23.size() == 1);
    CHECK(s23[0] == SymTuple{1, 1});

    auto s37 = s_k_set(3, 7, 3);
    REQUIRE(s37.size() == 1);
    CHECK(s37[0] == SymTuple{1, 1, 1});

    // k = 0 admits exactly the zero tuple
    CHECK(d_k(2, 3, 0) == 1);
    CHECK(d_k(3, 7, 0) == 1);
}

TEST_CASE("d_k(2,p) matches its closed form for k <= 60") {
    for (std::int64_t p : {3, 5, 7}) {
        for (int k = 1; k <= 60; ++k) {
            std::int64_t closed = (k % 2 == 0) ? 2 * (k / (2 * p)) + 1 : 2 * ((k + p) / (2 * p));
            CHECK(d_k(2, p, k) == closed);
        }
    }
}

TEST_CASE("the count is independent of the primitive root chosen") {
    for (auto [n, p, kmax] : std::vector<std::tuple<int, std::int64_t, int>>{{3, 7, 12}, {4, 3, 10}, {5, 2, 10}, {6, 5, 8}}) {
        for (int k = 0; k <= kmax; ++k) {
            std::int64_t want = static_cast<std::int64_t>(s_k_set(n, p, k, 1).size());
            for (std::int64_t t = 2; t < n; ++t) {
                if (std::gcd(t, static_cast<std::int64_t>(n)) != 1) continue;
                CHECK(static_cast<std::int64_t>(s_k_set(n, p, k, t).size()) == want);
            }
        }
    }
}

TEST_CASE("orbits and their bounds") {
    SymCounts c37 = sym_counts(3, 7, 3);
    CHECK(c37.a == 1);
    CHECK(c37.orbits.size() == 1);
    CHECK(c37.orbits[0].size == 1);  // (1,1,1) is sigma-fixed

    SymCounts c23 = sym_counts(2, 3, 2);
    CHECK(c23.a == 1);

    for (auto [n, p] : std::vector<std::pair<int, std::int64_t>>{{2, 3}, {2, 7}, {3, 5}, {4, 7}, {6, 7}}) {
        for (int k = 0; k <= 14; ++k) {
            SymCounts counts = sym_counts(n, p, k);
            CHECK(counts.c <= counts.b);
            CHECK(counts.b <= counts.a);
            CHECK(counts.a <= counts.d);
            CHECK(counts.d <= static_cast<std::int64_t>(n) * counts.a);
            for (const auto& orbit : counts.orbits) CHECK(n % orbit.size == 0);
        }
    }
}

TEST_CASE("sign vectors") {
    // odd n: every sign is +1, so v never vanishes
    for (int k : {2, 4, 6, 9}) {
        SymCounts counts = sym_counts(3, 7, k);
        CHECK(counts.b == counts.a);
    }

    // n = 2, off-diagonal tuples always survive
    auto v = v_vector({1, 3}, 2, 4);
    std::int64_t nonzero = 0;
    for (const auto& [mono, coeff] : v)
        if (coeff != 0) ++nonzero;
    CHECK(nonzero == 2);

    // n = 2 diagonal (k/2, k/2): v = (1 + (-1)^{k/2}) e, zero iff k/2 odd
    auto v_even = v_vector({2, 2}, 2, 4);
    CHECK(v_even.at(SymTuple{2, 2}) == 2);
    auto v_odd = v_vector({3, 3}, 2, 6);
    CHECK(v_odd.at(SymTuple{3, 3}) == 0);
}

TEST_CASE("worked count examples") {
    SymCounts c4 = sym_counts(2, 3, 4);
    CHECK(c4.d == 1);
    CHECK(c4.a == 1);
    CHECK(c4.b == 1);
    CHECK(c4.c == 0);

    SymCounts c6 = sym_counts(2, 3, 6);
    CHECK(c6.d == 3);  // (0,6), (3,3), (6,0)
    CHECK(c6.a == 2);
    CHECK(c6.b == 1);  // (3,3) has k/2 = 3 odd, so v = 0
    CHECK(c6.c == 0);  // (0,6) has even weighted sum
}

TEST_CASE("hypotheses are enforced") {
    CHECK_THROWS_AS(sym_counts(3, 3, 2), InvalidArgument);
    CHECK_THROWS_AS(s_k_set(2, 3, -1), InvalidArgument);
    CHECK_THROWS_AS(s_k_set(4, 6, 2), InvalidArgument);
}
