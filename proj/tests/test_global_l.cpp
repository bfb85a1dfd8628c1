#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "klsym/closed_forms.hpp"
#include "klsym/global_l.hpp"

using namespace klsym;

namespace {

KlStore& store() {
    static KlStore s("./.klsym-cache");
    return s;
}

}  // namespace

TEST_CASE("first Dirichlet sums at small parameters") {
    auto F3 = get_field(3, 1);

    // n=2, k=1: S_1 = -(Kl_2(F_3,1) + Kl_2(F_3,2)) = -(-1 + 2) = -1
    auto sums = dirichlet_sums(store(), 2, 1, F3, 3);
    CHECK(sums[0] == -1);

    // k=0: S_m = q^m - 1
    auto zeta_sums = dirichlet_sums(store(), 2, 0, F3, 5);
    BigInt qp = 1;
    for (int m = 1; m <= 5; ++m) {
        qp *= 3;
        CHECK(zeta_sums[static_cast<std::size_t>(m - 1)] == qp - 1);
    }

    // n=1: S_1 = sum of psi over F_q^* = -1
    auto rank1 = dirichlet_sums(store(), 1, 1, F3, 2);
    CHECK(rank1[0] == -1);
}

TEST_CASE("fast kernel agrees with the reference Dirichlet path") {
    for (auto [p, k] : std::vector<std::pair<std::int64_t, int>>{{3, 0}, {3, 1}, {3, 2}, {3, 4}, {5, 3}, {7, 2}}) {
        auto base = get_field(p, 1);
        int N = static_cast<int>(degree_from_counts(2, p, k)) + 3;
        CHECK(dirichlet_sums(store(), 2, k, base, N) == dirichlet_sums_reference(store(), 2, k, base, N));
    }
}

TEST_CASE("Euler-product assembly reproduces the exp series") {
    auto F3 = get_field(3, 1);
    for (int k = 0; k <= 3; ++k) {
        int N = static_cast<int>(degree_from_counts(2, 3, k)) + 3;
        RatSeries via_exp = series_exp(dirichlet_sums(store(), 2, k, F3, N));
        RatSeries via_euler = euler_product_series(store(), 2, k, F3, N);
        REQUIRE(via_euler.order() >= N);
        for (int i = 0; i <= N; ++i) CHECK(via_exp.coeff(i) == via_euler.coeff(i));
    }
}

TEST_CASE("compute_L worked examples") {
    auto F3 = get_field(3, 1);

    ComputeResult k1 = compute_L(store(), 2, 1, F3);
    CHECK(k1.L.num == IntPoly({BigInt(1), BigInt(-1)}));
    CHECK(k1.L.den.is_one());
    CHECK(k1.L.degree() == 1);

    ComputeResult k0 = compute_L(store(), 2, 0, F3);
    CHECK(k0.L.num == IntPoly({BigInt(1), BigInt(-1)}));
    CHECK(k0.L.den == IntPoly({BigInt(1), BigInt(-3)}));

    ComputeResult k2 = compute_L(store(), 2, 2, F3);
    CHECK(k2.L.degree() == 1);
    CHECK(k2.L.is_polynomial());

    CHECK_THROWS_AS(compute_L(store(), 3, 1, get_field(3, 1)), InvalidArgument);
}

TEST_CASE("trust-degree mode matches the guarded polynomial") {
    auto F5 = get_field(5, 1);
    ComputeOptions trust;
    trust.mode = ComputeMode::trust_degree;
    for (int k : {1, 2, 4}) {
        ComputeResult guarded = compute_L(store(), 2, k, F5);
        ComputeResult trusted = compute_L(store(), 2, k, F5, trust);
        CHECK(guarded.L.num == trusted.L.num);
        CHECK(trusted.L.degree_trusted);
        CHECK(guarded.L.den.is_one());
    }
}

TEST_CASE("congruences between symmetric powers") {
    auto F3 = get_field(3, 1);
    ComputeResult k2 = compute_L(store(), 2, 2, F3);
    ComputeResult k5 = compute_L(store(), 2, 5, F3);

    CHECK(congruence_check(k2.L, k2.L, 3, 5));  // identical
    CHECK(congruence_check(k5.L, k2.L, 3, 1));  // k = 5 = 2 + 3
    // the congruence is between genuinely different polynomials
    CHECK_FALSE(k5.L.num == k2.L.num);

    ComputeResult k11 = compute_L(store(), 2, 11, F3);
    CHECK(congruence_check(k11.L, k2.L, 3, 2));  // k = 11 = 2 + 9
}
