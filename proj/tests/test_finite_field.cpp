#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "klsym/finite_field.hpp"

using namespace klsym;

namespace {

// Brute-force irreducibility for degree <= 3: no roots and, for degree 2/3,
// that suffices; used as an independent oracle for the modulus scan.
bool brute_force_irreducible(const std::vector<std::int32_t>& f, std::int64_t p) {
    int deg = static_cast<int>(f.size()) - 1;
    REQUIRE(deg <= 3);
    for (std::int64_t x = 0; x < p; ++x) {
        std::int64_t acc = 0, xp = 1;
        for (int i = 0; i <= deg; ++i) {
            acc = (acc + f[static_cast<std::size_t>(i)] * xp) % p;
            xp = xp * x % p;
        }
        if (acc == 0) return false;
    }
    return deg <= 3;
}

}  // namespace

TEST_CASE("modulus selection follows the deterministic scan") {
    CHECK(get_field(3, 1)->modulus() == std::vector<std::int32_t>{0, 1});
    CHECK(get_field(3, 2)->modulus() == std::vector<std::int32_t>{1, 0, 1});
    CHECK(get_field(7, 2)->modulus() == std::vector<std::int32_t>{1, 0, 1});

    // oracle: X^2+1 is the first irreducible in scan order over F_3 and F_7
    for (std::int64_t p : {3, 7}) {
        CHECK(brute_force_irreducible({1, 0, 1}, p));
        CHECK_FALSE(brute_force_irreducible({0, 0, 1}, p));  // X^2
    }
    // memoized construction returns the identical descriptor
    CHECK(get_field(3, 2).get() == get_field(3, 2).get());
}

TEST_CASE("moduli are certified irreducible on small scans") {
    for (auto [p, e] : std::vector<std::pair<std::int64_t, int>>{{2, 3}, {3, 3}, {5, 2}, {5, 3}, {7, 3}, {11, 2}}) {
        auto F = get_field(p, e);
        if (e <= 3) CHECK(brute_force_irreducible(F->modulus(), p));
    }
}

TEST_CASE("field axioms hold exhaustively on small fields") {
    for (auto [p, e] : std::vector<std::pair<std::int64_t, int>>{{2, 3}, {3, 2}, {5, 2}, {3, 5}}) {
        auto F = get_field(p, e);
        const std::int64_t q = F->q();
        for (std::int64_t i = 1; i < q; ++i) {
            Coords a = F->element_at(i);
            CHECK(F->mul(a, F->inv(a)) == F->one());
        }
        // spot-check associativity and distributivity on a stride
        for (std::int64_t i = 0; i < q; i += 3) {
            for (std::int64_t j = 1; j < q; j += 5) {
                Coords a = F->element_at(i), b = F->element_at(j), c = F->element_at((i + j) % q);
                CHECK(F->mul(F->mul(a, b), c) == F->mul(a, F->mul(b, c)));
                CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
            }
        }
    }
}

TEST_CASE("Frobenius is a field automorphism with the right order") {
    for (auto [p, e] : std::vector<std::pair<std::int64_t, int>>{{2, 3}, {3, 2}, {3, 4}, {7, 2}}) {
        auto F = get_field(p, e);
        const std::int64_t q = F->q();
        for (std::int64_t i = 0; i < q; ++i) {
            Coords a = F->element_at(i);
            CHECK(F->frobenius(a) == F->pow(a, static_cast<std::uint64_t>(p)));
            CHECK(F->frobenius_pow(a, e) == a);
            for (std::int64_t j = 0; j < q; j += 7) {
                Coords b = F->element_at(j);
                CHECK(F->frobenius(F->add(a, b)) == F->add(F->frobenius(a), F->frobenius(b)));
                CHECK(F->frobenius(F->mul(a, b)) == F->mul(F->frobenius(a), F->frobenius(b)));
            }
        }
    }
}

TEST_CASE("trace examples over F_9") {
    auto F9 = get_field(3, 2);
    auto F3 = get_field(3, 1);
    // trace of 1 is the extension degree mod p
    CHECK(rel_trace(F9, F9->one(), F3) == F3->from_int(2));
    // alpha = class of X has alpha^2 = -1, so alpha + alpha^3 = 0
    CHECK(rel_trace(F9, F9->gen(), F3) == F3->zero());
    CHECK(rel_trace(F9, F9->zero(), F3) == F3->zero());

    // oracle: direct power computation x + x^3 for every element
    for (std::int64_t i = 0; i < 9; ++i) {
        Coords x = F9->element_at(i);
        Coords direct = F9->add(x, F9->pow(x, 3));
        Coords via = get_embedding(F3, F9).apply(rel_trace(F9, x, F3));
        CHECK(direct == via);
    }
}

TEST_CASE("trace is linear and surjective") {
    for (auto [p, e, d] : std::vector<std::tuple<std::int64_t, int, int>>{{3, 2, 1}, {2, 4, 2}, {5, 2, 1}, {3, 4, 2}}) {
        auto big = get_field(p, e);
        auto small = get_field(p, d);
        std::set<std::int64_t> image;
        const std::int64_t q = big->q();
        for (std::int64_t i = 0; i < q; ++i) {
            Coords x = big->element_at(i);
            image.insert(small->element_index(rel_trace(big, x, small)));
            if (i % 11 == 0) {
                for (std::int64_t c = 0; c < p; ++c) {
                    Coords sx = big->mul_scalar(x, c);
                    CHECK(rel_trace(big, sx, small) == small->mul_scalar(rel_trace(big, x, small), c));
                }
            }
        }
        CHECK(image.size() == static_cast<std::size_t>(small->q()));
    }
    CHECK_THROWS_AS(rel_trace(get_field(3, 4), get_field(3, 4)->one(), get_field(3, 3)), InvalidArgument);
}

TEST_CASE("embeddings are injective ring homomorphisms") {
    auto F9 = get_field(3, 2);
    auto F81 = get_field(3, 4);
    const Embedding& em = get_embedding(F9, F81);

    CHECK(em.apply(F9->one()) == F81->one());
    for (std::int64_t c = 0; c < 3; ++c) CHECK(em.apply(F9->from_int(c)) == F81->from_int(c));

    std::set<std::int64_t> images;
    for (std::int64_t i = 0; i < 9; ++i) {
        Coords a = F9->element_at(i);
        images.insert(F81->element_index(em.apply(a)));
        for (std::int64_t j = 0; j < 9; ++j) {
            Coords b = F9->element_at(j);
            CHECK(em.apply(F9->mul(a, b)) == F81->mul(em.apply(a), em.apply(b)));
            CHECK(em.apply(F9->add(a, b)) == F81->add(em.apply(a), em.apply(b)));
        }
    }
    CHECK(images.size() == 9);

    // preimage inverts on the image and rejects non-subfield elements
    for (std::int64_t i = 0; i < 9; ++i) {
        Coords a = F9->element_at(i);
        auto back = em.preimage(em.apply(a));
        REQUIRE(back.has_value());
        CHECK(*back == a);
    }
    int outside = 0;
    for (std::int64_t i = 0; i < 81; ++i) {
        if (!em.preimage(F81->element_at(i)).has_value()) ++outside;
    }
    CHECK(outside == 81 - 9);
}

TEST_CASE("embedding towers agree on the prime field") {
    auto F3 = get_field(3, 1);
    auto F9 = get_field(3, 2);
    auto F81 = get_field(3, 4);
    for (std::int64_t c = 0; c < 3; ++c) {
        Coords x = F3->from_int(c);
        Coords via_tower = get_embedding(F9, F81).apply(get_embedding(F3, F9).apply(x));
        Coords direct = get_embedding(F3, F81).apply(x);
        CHECK(via_tower == direct);
    }
}

TEST_CASE("multiplicative generators match the exhaustive-order oracle") {
    auto order_of = [](const FieldPtr& F, const Coords& x) {
        Coords y = x;
        std::int64_t ord = 1;
        while (y != F->one()) {
            y = F->mul(y, x);
            ++ord;
        }
        return ord;
    };
    auto F3 = get_field(3, 1);
    CHECK(F3->mult_generator() == F3->from_int(2));
    CHECK(order_of(F3, F3->from_int(2)) == 2);

    auto F7 = get_field(7, 1);
    CHECK(F7->mult_generator() == F7->from_int(3));
    CHECK(order_of(F7, F7->from_int(2)) == 3);  // the earlier candidate fails
    CHECK(order_of(F7, F7->from_int(3)) == 6);

    for (auto [p, e] : std::vector<std::pair<std::int64_t, int>>{{3, 2}, {7, 2}, {5, 3}}) {
        auto F = get_field(p, e);
        const Coords& g = F->mult_generator();
        CHECK(order_of(F, g) == F->q() - 1);
        // first element of full order in scan order
        for (std::int64_t i = 1; F->element_at(i) != g; ++i)
            CHECK(order_of(F, F->element_at(i)) < F->q() - 1);
    }
}

TEST_CASE("roots of unity") {
    auto F7 = get_field(7, 1);
    Coords z3 = F7->nth_root_of_unity(3);
    CHECK((z3 == F7->from_int(2) || z3 == F7->from_int(4)));
    CHECK(z3 == F7->from_int(2));  // g = 3, so g^2 = 2
    CHECK(F7->nth_root_of_unity(1) == F7->one());

    auto F3 = get_field(3, 1);
    CHECK(F3->nth_root_of_unity(2) == F3->from_int(2));

    CHECK_THROWS_AS(F7->nth_root_of_unity(4), InvalidArgument);
}

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS_AS(get_field(4, 1), InvalidArgument);
    CHECK_THROWS_AS(get_field(1, 1), InvalidArgument);
    CHECK_THROWS_AS(get_field(2, 62), BudgetExceeded);
    CHECK_THROWS_AS(get_field(3, 30), BudgetExceeded);
}
