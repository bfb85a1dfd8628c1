#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "klsym/cyclotomic.hpp"

using namespace klsym;

namespace {

// Independent reduction oracle: multiply as plain polynomials in zeta, then
// long-divide by the minimal polynomial 1 + X + ... + X^{p-1}.
CycInt oracle_mul(const CycInt& a, const CycInt& b) {
    const std::int64_t p = a.prime();
    const std::size_t n = static_cast<std::size_t>(p - 1);
    std::vector<BigInt> prod(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) prod[i + j] += a.coord(i) * b.coord(j);
    // divide by Phi_p = 1 + X + ... + X^{p-1}, keep the remainder
    for (int i = static_cast<int>(prod.size()) - 1; i >= static_cast<int>(n); --i) {
        BigInt c = prod[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        for (int j = 0; j < p; ++j) prod[static_cast<std::size_t>(i - j)] -= c;
    }
    CycInt r(p);
    for (std::size_t i = 0; i < n; ++i) r.coord(i) = prod[i];
    return r;
}

CycInt random_cyc(std::mt19937_64& rng, std::int64_t p) {
    std::uniform_int_distribution<int> dist(-9, 9);
    CycInt z(p);
    for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(p); ++i) z.coord(i) = dist(rng);
    return z;
}

}  // namespace

TEST_CASE("zeta powers reduce into the power basis") {
    CycInt one = CycInt::zeta_pow(3, 0);
    CHECK(one.coords() == std::vector<BigInt>{1, 0});
    CycInt z2 = CycInt::zeta_pow(3, 2);
    CHECK(z2.coords() == std::vector<BigInt>{-1, -1});

    for (std::int64_t p : {3, 5, 7}) {
        CycInt sum(p);
        for (std::int64_t a = 0; a < p; ++a) sum += CycInt::zeta_pow(p, a);
        CHECK(sum.is_zero());
    }
}

TEST_CASE("character multiplicativity, exhaustively") {
    for (std::int64_t p : {3, 5, 7}) {
        for (std::int64_t a = 0; a < p; ++a)
            for (std::int64_t b = 0; b < p; ++b)
                CHECK(CycInt::zeta_pow(p, a) * CycInt::zeta_pow(p, b) == CycInt::zeta_pow(p, a + b));
    }
}

TEST_CASE("worked products match the long-division oracle") {
    // 1 + zeta and 1 + zeta^4 at p = 5
    CycInt a = CycInt::from_integer(5, 1) + CycInt::zeta_pow(5, 1);
    CycInt b = CycInt::from_integer(5, 1) + CycInt::zeta_pow(5, 4);
    CHECK(a * b == oracle_mul(a, b));

    // zeta + zeta^2 at p = 3 equals -1
    CycInt s = CycInt::zeta_pow(3, 1) + CycInt::zeta_pow(3, 2);
    auto v = s.as_integer();
    REQUIRE(v.has_value());
    CHECK(*v == -1);
}

TEST_CASE("ring axioms under randomized testing against the oracle") {
    std::mt19937_64 rng(12345);
    for (std::int64_t p : {3, 5, 7, 11}) {
        for (int trial = 0; trial < 60; ++trial) {
            CycInt a = random_cyc(rng, p), b = random_cyc(rng, p), c = random_cyc(rng, p);
            CHECK(a * b == oracle_mul(a, b));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a + b == b + a);
        }
    }
}

TEST_CASE("integer detection") {
    CHECK(CycInt::from_integer(7, -1).as_integer().value() == -1);
    CHECK_FALSE(CycInt::zeta_pow(7, 1).as_integer().has_value());

    CycInt z = CycInt::zeta_pow(3, 1) + CycInt::zeta_pow(3, 2) + CycInt::from_integer(3, 2);
    CHECK(z.as_integer().value() == 1);

    for (std::int64_t v : {-5, 0, 3}) {
        CHECK(CycInt::from_integer(5, v).as_integer().value() == v);
    }
}

TEST_CASE("galois action permutes the character values") {
    for (std::int64_t p : {3, 5, 7}) {
        for (std::int64_t a = 1; a < p; ++a)
            for (std::int64_t b = 0; b < p; ++b)
                CHECK(CycInt::zeta_pow(p, b).galois(a) == CycInt::zeta_pow(p, a * b));
    }
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        CycInt a = random_cyc(rng, 7), b = random_cyc(rng, 7);
        for (std::int64_t s = 1; s < 7; ++s) {
            CHECK((a * b).galois(s) == a.galois(s) * b.galois(s));
            CHECK((a + b).galois(s) == a.galois(s) + b.galois(s));
        }
    }
}

TEST_CASE("complex embedding is approximately a ring homomorphism") {
    CHECK(std::abs(CycInt::from_integer(5, 1).complex_value() - std::complex<double>(1, 0)) < 1e-12);
    for (std::int64_t p : {3, 5, 7}) {
        for (std::int64_t a = 0; a < p; ++a)
            CHECK(std::abs(std::abs(CycInt::zeta_pow(p, a).complex_value()) - 1.0) < 1e-12);
    }
    CycInt s = CycInt::zeta_pow(3, 1) + CycInt::zeta_pow(3, 2);
    CHECK(std::abs(s.complex_value() - std::complex<double>(-1, 0)) < 1e-12);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        CycInt a = random_cyc(rng, 7), b = random_cyc(rng, 7);
        CHECK(std::abs((a * b).complex_value() - a.complex_value() * b.complex_value()) < 1e-9);
        CHECK(std::abs((a + b).complex_value() - (a.complex_value() + b.complex_value())) < 1e-9);
    }
}

TEST_CASE("serialization round-trips and rejects malformed input") {
    std::mt19937_64 rng(4);
    CycInt a = random_cyc(rng, 7);
    CHECK(CycInt::from_decimal_strings(7, a.to_decimal_strings()) == a);
    CHECK_THROWS_AS(CycInt::from_decimal_strings(7, {"1", "2"}), CacheError);
    CHECK_THROWS_AS(CycInt::from_decimal_strings(3, {"1", "x"}), CacheError);
    CHECK_THROWS_AS(CycInt::zeta_pow(3, 1) * CycInt::zeta_pow(5, 1), InvalidArgument);
}
