#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "klsym/errors.hpp"
#include "klsym/poly.hpp"

using namespace klsym;

namespace {

// direct expansion of (1-T) / (1-qT) to order N
std::vector<BigInt> gm_zeta_series(std::int64_t q, int N) {
    std::vector<BigInt> out(static_cast<std::size_t>(N) + 1);
    BigInt qp = 1;
    out[0] = 1;
    for (int i = 1; i <= N; ++i) {
        out[static_cast<std::size_t>(i)] = qp * (q - 1);  // q^i - q^{i-1}
        qp *= q;
    }
    return out;
}

}  // namespace

TEST_CASE("polynomial division is exact or refused") {
    IntPoly a({BigInt(1), BigInt(-3)});
    IntPoly b({BigInt(1), BigInt(2)});
    IntPoly prod = poly_mul(a, b);
    CHECK(prod == IntPoly({BigInt(1), BigInt(-1), BigInt(-6)}));
    CHECK(*poly_divide_exact(prod, a) == b);
    CHECK(*poly_divide_exact(prod, b) == a);
    CHECK_FALSE(poly_divide_exact(prod, IntPoly({BigInt(1), BigInt(1)})).has_value());
    CHECK(poly_pow(a, 0) == IntPoly::one());
    CHECK_THROWS_AS(poly_divide_exact(prod, IntPoly({BigInt(2), BigInt(1)})), InvalidArgument);
}

TEST_CASE("coprimality over Q") {
    IntPoly a({BigInt(1), BigInt(-3)});
    IntPoly b({BigInt(1), BigInt(2)});
    CHECK(poly_coprime(a, b));
    CHECK_FALSE(poly_coprime(poly_mul(a, b), a));
    CHECK(poly_coprime(IntPoly::one(), a));
}

TEST_CASE("series_exp identities") {
    CHECK(series_exp({}).c == std::vector<BigRat>{BigRat(1)});

    // all S_m = 0 -> the constant series 1
    RatSeries zero = series_exp({BigInt(0), BigInt(0), BigInt(0)});
    for (int i = 0; i <= 3; ++i) CHECK(zero.coeff(i) == (i == 0 ? 1 : 0));

    // S_m = q^m - 1 -> (1-T)/(1-qT)
    for (std::int64_t q : {3, 5, 7}) {
        std::vector<BigInt> sums;
        BigInt qp = 1;
        for (int m = 1; m <= 6; ++m) {
            qp *= q;
            sums.push_back(qp - 1);
        }
        RatSeries s = series_exp(sums);
        std::vector<BigInt> want = gm_zeta_series(q, 6);
        for (int i = 0; i <= 6; ++i) CHECK(s.coeff(i) == BigRat(want[static_cast<std::size_t>(i)]));
    }

    // exp(T) has non-integer coefficients: flagged as an arithmetic bug
    CHECK_THROWS_AS(series_exp({BigInt(1), BigInt(0)}), InternalError);
}

TEST_CASE("reconstruction of (1-T)/(1-qT)") {
    std::vector<BigInt> sums;
    BigInt qp = 1;
    for (int m = 1; m <= 3; ++m) {
        qp *= 3;
        sums.push_back(qp - 1);
    }
    RatSeries s = series_exp(sums);
    LPoly L = reconstruct(s, 0, 2);
    CHECK(L.num == IntPoly({BigInt(1), BigInt(-1)}));
    CHECK(L.den == IntPoly({BigInt(1), BigInt(-3)}));
    CHECK(L.degree() == 0);
    CHECK_FALSE(L.is_polynomial());
}

TEST_CASE("reconstruction of polynomials and failure modes") {
    // the constant series 1
    RatSeries ones;
    ones.c = {BigRat(1), BigRat(0), BigRat(0), BigRat(0)};
    LPoly triv = reconstruct(ones, 0, 2);
    CHECK(triv.num == IntPoly::one());
    CHECK(triv.den == IntPoly::one());

    // series of 1 - T with the correct degree
    RatSeries lin;
    lin.c = {BigRat(1), BigRat(-1), BigRat(0), BigRat(0), BigRat(0)};
    LPoly l1 = reconstruct(lin, 1, 2);
    CHECK(l1.num == IntPoly({BigInt(1), BigInt(-1)}));
    CHECK(l1.den == IntPoly::one());

    // a wrong predicted degree must not silently fit
    CHECK_THROWS_AS(reconstruct(lin, 0, 2), CheckFailed);

    // a guard coefficient that disagrees must be fatal
    RatSeries bad;
    bad.c = {BigRat(1), BigRat(-1), BigRat(0), BigRat(0), BigRat(7)};
    CHECK_THROWS_AS(reconstruct(bad, 1, 0), CheckFailed);
}
