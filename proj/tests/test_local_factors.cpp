#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <filesystem>
#include <map>

#include "klsym/local_factors.hpp"

using namespace klsym;

namespace {

KlStore& store() {
    static KlStore s("./.klsym-cache");
    return s;
}

const ClosedPoint& point_at(const std::vector<ClosedPoint>& pts, const FieldPtr& F, std::int64_t value) {
    for (const auto& pt : pts)
        if (pt.d == 1 && pt.rep == F->from_int(value)) return pt;
    REQUIRE(false);
    static ClosedPoint dummy;
    return dummy;
}

}  // namespace

TEST_CASE("closed point enumeration over F_3") {
    auto F3 = get_field(3, 1);
    auto pts = closed_points(F3, 2);
    int deg1 = 0, deg2 = 0;
    for (const auto& pt : pts) (pt.d == 1 ? deg1 : deg2)++;
    CHECK(deg1 == 2);
    CHECK(deg2 == 3);  // (9 - 1 - 2) / 2
}

TEST_CASE("degree partition identity over several bases") {
    for (auto [p, e, D] : std::vector<std::tuple<std::int64_t, int, int>>{{3, 1, 5}, {7, 1, 3}, {2, 1, 6}, {3, 2, 3}}) {
        auto base = get_field(p, e);
        std::map<int, std::int64_t> nd;
        for (const auto& pt : closed_points(base, D)) nd[pt.d]++;
        for (int d = 1; d <= D; ++d) {
            std::int64_t total = 0;
            for (int dd = 1; dd <= d; ++dd)
                if (d % dd == 0) total += dd * nd[dd];
            BigInt qd = big_pow(BigInt(base->q()), static_cast<std::uint64_t>(d));
            CHECK(BigInt(total) == qd - 1);
        }
    }
}

TEST_CASE("representatives generate orbits of exactly their degree") {
    auto base = get_field(3, 1);
    for (const auto& pt : closed_points(base, 4)) {
        // not fixed by any proper-subfield Frobenius power
        for (int dd = 1; dd < pt.d; ++dd)
            if (pt.d % dd == 0) CHECK(pt.ext->frobenius_pow(pt.rep, base->e() * dd) != pt.rep);
        CHECK(pt.ext->frobenius_pow(pt.rep, base->e() * pt.d) == pt.rep);
        // lexicographically smallest conjugate
        Coords y = pt.rep;
        for (int t = 1; t < pt.d; ++t) {
            y = pt.ext->frobenius_pow(y, base->e());
            CHECK(pt.ext->element_index(pt.rep) <= pt.ext->element_index(y));
        }
    }
}

TEST_CASE("power sums at the rational points of F_3") {
    auto F3 = get_field(3, 1);
    auto pts = closed_points(F3, 1);
    const ClosedPoint& one = point_at(pts, F3, 1);
    const ClosedPoint& two = point_at(pts, F3, 2);

    CHECK(power_sums(store(), one, 2, 1)[0].as_integer().value() == 1);    // -Kl_2(F_3, 1) = 1
    CHECK(power_sums(store(), two, 2, 1)[0].as_integer().value() == -2);   // -Kl_2(F_3, 2) = -2
    CHECK(power_sums(store(), one, 1, 1)[0] == psi(F3, F3->from_int(1)));  // rank one
}

TEST_CASE("local factors over F_3 with the determinant twist") {
    auto F3 = get_field(3, 1);
    auto pts = closed_points(F3, 1);
    const ClosedPoint& one = point_at(pts, F3, 1);
    const ClosedPoint& two = point_at(pts, F3, 2);

    LocalFactor lf1 = local_factor(store(), one, 2, /*cross_check=*/true);
    CHECK(lf1.elementary[0].as_integer().value() == 1);
    CHECK(lf1.elementary[1].as_integer().value() == 3);  // factor 1 - T + 3T^2

    LocalFactor lf2 = local_factor(store(), two, 2, /*cross_check=*/true);
    CHECK(lf2.elementary[0].as_integer().value() == -2);
    CHECK(lf2.elementary[1].as_integer().value() == 3);  // factor 1 + 2T + 3T^2

    LocalFactor rank1 = local_factor(store(), one, 1);
    CHECK(rank1.elementary[0] == psi(F3, F3->from_int(1)));

    check_local_purity(lf1);
    check_local_purity(lf2);
}

TEST_CASE("determinant shortcut validated against full Newton on degree <= 2") {
    for (auto [n, p] : std::vector<std::pair<int, std::int64_t>>{{2, 3}, {2, 7}, {3, 7}}) {
        auto base = get_field(p, 1);
        for (int d = 1; d <= 2; ++d) {
            for (const auto& pt : closed_points_of_degree(base, d)) {
                LocalFactor lf = local_factor(store(), pt, n, /*cross_check=*/true);
                check_local_purity(lf);
            }
        }
    }
}

TEST_CASE("extended power sums follow the recurrence and the big field") {
    auto F3 = get_field(3, 1);
    auto F9 = get_field(3, 2);
    auto pts = closed_points(F3, 1);
    const ClosedPoint& one = point_at(pts, F3, 1);

    LocalFactor lf = local_factor(store(), one, 2);
    auto ps = extend_power_sums(lf, 4);
    CHECK(ps[0].as_integer().value() == 1);
    CHECK(ps[1].as_integer().value() == -5);  // p_2 = e_1 p_1 - 2 e_2 = 1 - 6

    // oracle: p_2 = -Kl_2(F_9, embed(1))
    CycInt direct = -kl_point_direct(2, F9, get_embedding(F3, F9).apply(F3->from_int(1)));
    CHECK(ps[1] == direct);

    // Weil bound numerically: |p_m| <= 2 * 3^{m/2} + tol
    for (int m = 1; m <= 4; ++m)
        CHECK(std::abs(ps[static_cast<std::size_t>(m - 1)].complex_value()) <=
              2.0 * std::pow(3.0, m / 2.0) + 1e-6);

    // rank one: p_m = psi(1)^m
    LocalFactor r1 = local_factor(store(), one, 1);
    auto ps1 = extend_power_sums(r1, 3);
    CycInt z = psi(F3, F3->from_int(1));
    CHECK(ps1[0] == z);
    CHECK(ps1[1] == z * z);
    CHECK(ps1[2] == z * z * z);
}

TEST_CASE("symmetric traces") {
    auto F3 = get_field(3, 1);
    auto pts = closed_points(F3, 1);
    const ClosedPoint& one = point_at(pts, F3, 1);
    LocalFactor lf = local_factor(store(), one, 2);

    CHECK(sym_trace(lf, 0, 1).as_integer().value() == 1);
    CHECK(sym_trace(lf, 1, 1) == lf.psums[0]);
    CHECK(sym_trace(lf, 2, 1).as_integer().value() == -2);  // (p_1^2 + p_2)/2 = (1-5)/2
}

TEST_CASE("symmetric local factor against the numeric expansion oracle") {
    auto F3 = get_field(3, 1);
    auto pts = closed_points(F3, 1);
    const ClosedPoint& one = point_at(pts, F3, 1);
    LocalFactor lf = local_factor(store(), one, 2);

    // k = 1 reproduces the factor itself
    auto f1 = sym_local_factor(lf, 1);
    auto direct = lf.poly();
    REQUIRE(f1.size() == direct.size());
    for (std::size_t i = 0; i < f1.size(); ++i) CHECK(f1[i] == direct[i]);

    // k = 0 is the trivial rank-one factor 1 - T
    auto f0 = sym_local_factor(lf, 0);
    REQUIRE(f0.size() == 2);
    CHECK(f0[0].as_integer().value() == 1);
    CHECK(f0[1].as_integer().value() == -1);

    // k = 2: expand (1 - a^2 T)(1 - ab T)(1 - b^2 T) from the roots of 1 - T + 3T^2
    auto f2 = sym_local_factor(lf, 2);
    std::complex<double> disc = std::sqrt(std::complex<double>(1.0 - 12.0, 0.0));
    std::complex<double> a = (std::complex<double>(1.0, 0.0) + disc) / 2.0;
    std::complex<double> b = (std::complex<double>(1.0, 0.0) - disc) / 2.0;
    std::complex<double> r1 = a * a, r2 = a * b, r3 = b * b;
    std::complex<double> c1 = -(r1 + r2 + r3);
    std::complex<double> c2 = r1 * r2 + r1 * r3 + r2 * r3;
    std::complex<double> c3 = -(r1 * r2 * r3);
    REQUIRE(f2.size() == 4);
    CHECK(f2[1].as_integer().value().convert_to<double>() == doctest::Approx(c1.real()).epsilon(1e-9));
    CHECK(f2[2].as_integer().value().convert_to<double>() == doctest::Approx(c2.real()).epsilon(1e-9));
    CHECK(f2[3].as_integer().value().convert_to<double>() == doctest::Approx(c3.real()).epsilon(1e-9));

    // sym_trace satisfies the linear recurrence of the sym factor
    for (int m = 4; m <= 7; ++m) {
        CycInt acc(3);
        for (int j = 1; j <= 3; ++j) {
            CycInt term = f2[static_cast<std::size_t>(j)] * sym_trace(lf, 2, m - j);
            acc += term;
        }
        CHECK(sym_trace(lf, 2, m) == -acc);
    }
}
