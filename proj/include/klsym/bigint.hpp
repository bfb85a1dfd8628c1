#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "klsym/errors.hpp"

namespace klsym {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt big_pow(const BigInt& base, std::uint64_t exp) {
    BigInt r = 1, b = base;
    while (exp) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

inline BigInt binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline BigInt numerator(const BigRat& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const BigRat& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const BigRat& r) { return denominator(r) == 1; }

/// Exact quotient; throws InternalError if the division has a remainder.
inline BigInt exact_div(const BigInt& a, const BigInt& b, const char* context) {
    BigInt q, r;
    boost::multiprecision::divide_qr(a, b, q, r);
    if (r != 0) throw InternalError(std::string("non-exact division in ") + context);
    return q;
}

inline std::string to_string(const BigInt& v) { return v.str(); }

/// Prime factors of n (each once), by trial division. Desk-scale inputs only.
std::vector<std::int64_t> prime_factors(std::int64_t n);

bool is_prime(std::int64_t n);

/// Multiplicative order of a modulo m, (a, m) = 1.
std::int64_t mult_order(std::int64_t a, std::int64_t m);

}  // namespace klsym
