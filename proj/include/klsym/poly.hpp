#pragma once

#include <optional>
#include <string>
#include <vector>

#include "klsym/bigint.hpp"

namespace klsym {

/// Integer polynomial in T, constant term first. L-type polynomials keep
/// constant term 1.
struct IntPoly {
    std::vector<BigInt> c;

    IntPoly() : c{BigInt(0)} {}
    explicit IntPoly(std::vector<BigInt> coeffs) : c(std::move(coeffs)) {
        if (c.empty()) c.push_back(BigInt(0));
    }
    static IntPoly one() { return IntPoly({BigInt(1)}); }
    /// 1 + a*T
    static IntPoly one_plus(BigInt a) { return IntPoly({BigInt(1), std::move(a)}); }

    int degree() const;
    bool is_one() const { return degree() == 0 && c[0] == 1; }
    const BigInt& coeff(int i) const;
    bool operator==(const IntPoly& o) const;

    std::vector<std::string> to_decimal_strings() const;
};

IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
IntPoly poly_pow(const IntPoly& a, int k);
IntPoly poly_add(const IntPoly& a, const IntPoly& b);
IntPoly poly_sub(const IntPoly& a, const IntPoly& b);

/// Exact division when den | num and den has constant term +-1;
/// nullopt when the division leaves a remainder.
std::optional<IntPoly> poly_divide_exact(const IntPoly& num, const IntPoly& den);

/// gcd degree 0 over Q (coprimality test for reconstruction output).
bool poly_coprime(const IntPoly& a, const IntPoly& b);

/// Truncated power series with exact rational coefficients, order 0..N.
struct RatSeries {
    std::vector<BigRat> c;

    int order() const { return static_cast<int>(c.size()) - 1; }
    const BigRat& coeff(int i) const { return c[static_cast<std::size_t>(i)]; }
};

/// Coefficients of exp(sum_m S_m T^m / m) through order N = S.size();
/// every coefficient is asserted to be an integer (InternalError otherwise).
RatSeries series_exp(const std::vector<BigInt>& sums);

/// L as numerator/denominator with constant terms 1 and integer
/// coefficients; denominator 1 in the polynomial case.
struct LPoly {
    IntPoly num;
    IntPoly den;
    bool degree_trusted = false;  // built in trust-degree mode
    int denominator_degree_bound = 0;

    int degree() const { return num.degree() - den.degree(); }
    bool is_polynomial() const { return den.is_one(); }
};

/// Pade reconstruction: finds num/den with deg(num) - deg(den) = D,
/// deg(den) <= den_bound, constant terms 1, reproducing every series
/// coefficient (the guard). Throws CheckFailed when no candidate fits.
LPoly reconstruct(const RatSeries& series, int D, int den_bound);

}  // namespace klsym
