#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "klsym/closed_forms.hpp"
#include "klsym/errors.hpp"

using namespace klsym;

TEST_CASE("degree formulas agree and match worked values") {
    CHECK(degree_rank2(3, 1) == 1);
    CHECK(degree_rank2(3, 6) == 2);
    CHECK(degree_rank2(5, 10) == 4);
    CHECK(degree_from_counts(2, 3, 0) == 0);
    CHECK(degree_from_counts(3, 7, 3) == 3);

    for (std::int64_t p : {3, 5, 7, 11})
        for (int k = 0; k <= 60; ++k) CHECK(degree_rank2(p, k) == degree_from_counts(2, p, k));
}

TEST_CASE("prime-n corollary on its hypothesis domain") {
    CHECK(degree_prime_n(3, 2, 3).value() == 3);
    CHECK(degree_prime_n(5, 2, 5).value() == 25);
    CHECK_FALSE(degree_prime_n(3, 2, 1).has_value());  // k - n*tilde < 0
    CHECK_FALSE(degree_prime_n(3, 7, 5).has_value());  // 7 = 1 mod 3 is not primitive
    CHECK_FALSE(degree_prime_n(4, 3, 4).has_value());  // n must be prime

    for (auto [n, p] : std::vector<std::pair<int, std::int64_t>>{{3, 2}, {5, 2}, {5, 3}}) {
        for (int k = 0; k <= 40; ++k) {
            auto cor = degree_prime_n(n, p, k);
            if (cor) CHECK(*cor == degree_from_counts(n, p, k));
        }
    }
}

TEST_CASE("bad factor at infinity: worked cases") {
    // n = 3, q = p = 7, k = 3: (1 - 7^3 T)^{a_3} with a_3 = 1
    SymCounts c373 = sym_counts(3, 7, 3);
    CHECK(bad_factor_infinity(3, 7, 7, 3, c373) == IntPoly({BigInt(1), BigInt(-343)}));

    // n even, k odd: trivial factor
    for (std::int64_t p : {3, 5, 7})
        for (int k : {1, 3, 5, 9})
            CHECK(bad_factor_infinity(2, p, p, k, sym_counts(2, p, k)).is_one());

    // n = 2, p = 3, k = 6: third case of the even/even split -> 1 + 27T
    SymCounts c236 = sym_counts(2, 3, 6);
    CHECK(bad_factor_infinity(2, 3, 3, 6, c236) == IntPoly({BigInt(1), BigInt(27)}));

    // degree equals the inertia dimension on a wide sweep
    for (auto [n, p] : std::vector<std::pair<int, std::int64_t>>{{2, 3}, {2, 5}, {2, 7}, {3, 7}, {4, 5}, {6, 7}}) {
        for (int k = 0; k <= 16; ++k) {
            SymCounts counts = sym_counts(n, p, k);
            if ((p - 1) % n != 0) continue;
            IntPoly bad = bad_factor_infinity(n, p, p, k, counts);
            CHECK(bad.degree() == inertia_dimension_at_infinity(n, k, counts));
        }
    }

    CHECK_THROWS_AS(bad_factor_infinity(3, 5, 5, 2, sym_counts(3, 5, 2)), InvalidArgument);
}

TEST_CASE("m_k, n_k, and P_k") {
    CHECK(mk_nk(3, 4).m_k == 1);
    CHECK(mk_nk(3, 4).n_k == 0);
    CHECK(mk_nk(5, 10).m_k == 1);
    CHECK(p_k_poly(3, 1) == IntPoly({BigInt(1), BigInt(-1)}));
    CHECK(p_k_poly(3, 4) == poly_mul(IntPoly({BigInt(1), BigInt(-1)}), IntPoly({BigInt(1), BigInt(-9)})));
    CHECK(p_k_poly(5, 10) == poly_mul(IntPoly({BigInt(1), BigInt(-1)}), IntPoly({BigInt(1), BigInt(-3125)})));

    // b_k equals m_k for even k (the two routes to the inertia dimension)
    for (std::int64_t p : {3, 5, 7})
        for (int k = 0; k <= 60; k += 2) CHECK(sym_counts(2, p, k).b == mk_nk(p, k).m_k);

    // P_k = (1 - T) * (count-based bad factor) across the grid
    for (std::int64_t p : {3, 5, 7})
        for (int k = 1; k <= 30; ++k)
            CHECK(p_k_poly(p, k) ==
                  poly_mul(IntPoly({BigInt(1), BigInt(-1)}),
                           bad_factor_infinity(2, p, p, k, sym_counts(2, p, k))));
}

TEST_CASE("functional equation checker") {
    auto one = IntPoly::one();
    FunctionalEqData triv = functional_eq_check(one, 3, 4);
    CHECK(triv.holds);
    CHECK(triv.c == 1);
    CHECK(triv.delta == 0);

    // weight-pure linear factor 1 - p^{(k+1)/2} T, k odd
    std::int64_t p = 5;
    int k = 3;
    BigInt w = big_pow(BigInt(p), static_cast<std::uint64_t>((k + 1) / 2));
    FunctionalEqData lin = functional_eq_check(IntPoly::one_plus(-w), p, k);
    CHECK(lin.holds);
    CHECK(lin.c == BigRat(-w));

    FunctionalEqData bad = functional_eq_check(IntPoly::one_plus(BigInt(1)), 3, 2);
    CHECK_FALSE(bad.holds);

    // root pairing gamma <-> p^{k+1}/gamma: c^2 = p^{(k+1) delta}
    IntPoly m({BigInt(1), BigInt(-5145), BigInt(86472015), BigInt("-4747561509943")});
    FunctionalEqData f = functional_eq_check(m, 7, 9);
    CHECK(f.holds);
    CHECK(f.c * f.c == BigRat(big_pow(BigInt(7), 30)));
}

TEST_CASE("weight classification") {
    WeightHistogram w1 = weight_classify(IntPoly::one_plus(BigInt(-3)), 3);
    CHECK(w1.counts.at(2) == 1);

    WeightHistogram w2 = weight_classify(IntPoly({BigInt(1), BigInt(-1), BigInt(3)}), 3);
    CHECK(w2.counts.at(1) == 2);  // conjugate pair of modulus sqrt(3)

    WeightHistogram w3 =
        weight_classify(poly_mul(IntPoly::one_plus(BigInt(-1)), IntPoly::one_plus(BigInt(-27))), 3);
    CHECK(w3.counts.at(0) == 1);
    CHECK(w3.counts.at(6) == 1);

    CHECK(weight_classify(IntPoly::one(), 3).counts.empty());
    CHECK_THROWS_AS(weight_classify(IntPoly::one_plus(BigInt(-2)), 3), CheckFailed);
}

TEST_CASE("stripping q-power roots") {
    IntPoly P = poly_mul(poly_mul(IntPoly::one_plus(BigInt(-1)), IntPoly::one_plus(BigInt(-1))),
                         IntPoly::one_plus(BigInt(-7)));
    auto stripped = strip_q_power_roots(P, 7, 2);
    CHECK(stripped == std::vector<int>{0, 0, 1});
    CHECK(P.is_one());
}
