#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "klsym/bigint.hpp"
#include "klsym/errors.hpp"

namespace klsym {

/// An element of Z[zeta_p] in the power basis 1, zeta, ..., zeta^{p-2}.
/// Multiplication reduces through zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2}).
class CycInt {
public:
    CycInt() = default;
    explicit CycInt(std::int64_t p) : p_(p), c_(static_cast<std::size_t>(p - 1)) {}

    static CycInt from_integer(std::int64_t p, BigInt v);
    static CycInt zeta_pow(std::int64_t p, std::int64_t a);

    std::int64_t prime() const { return p_; }
    const std::vector<BigInt>& coords() const { return c_; }
    BigInt& coord(std::size_t i) { return c_[i]; }
    const BigInt& coord(std::size_t i) const { return c_[i]; }

    bool is_zero() const;
    /// The rational integer value, when all higher coordinates vanish.
    std::optional<BigInt> as_integer() const;

    CycInt operator+(const CycInt& o) const;
    CycInt operator-(const CycInt& o) const;
    CycInt operator-() const;
    CycInt operator*(const CycInt& o) const;
    CycInt& operator+=(const CycInt& o);
    CycInt& operator-=(const CycInt& o);
    bool operator==(const CycInt& o) const;
    bool operator!=(const CycInt& o) const { return !(*this == o); }

    CycInt operator*(const BigInt& s) const;

    /// The Galois action zeta -> zeta^a for a coprime to p.
    CycInt galois(std::int64_t a) const;

    /// Numeric embedding zeta -> exp(2*pi*i/p); approximate, for
    /// tolerance-based inequality checks only.
    std::complex<double> complex_value() const;

    std::vector<std::string> to_decimal_strings() const;
    static CycInt from_decimal_strings(std::int64_t p, const std::vector<std::string>& v);

private:
    void check_compatible(const CycInt& o) const;

    std::int64_t p_ = 0;
    std::vector<BigInt> c_;
};

/// Q(zeta_p) version of CycInt; exists only as a Newton-identity
/// intermediate, with an integrality test at every module boundary.
class CycRat {
public:
    CycRat() = default;
    explicit CycRat(std::int64_t p) : p_(p), c_(static_cast<std::size_t>(p - 1)) {}
    explicit CycRat(const CycInt& z);

    std::int64_t prime() const { return p_; }
    const std::vector<BigRat>& coords() const { return c_; }

    bool is_zero() const;
    std::optional<CycInt> as_cyc_int() const;

    CycRat operator+(const CycRat& o) const;
    CycRat operator-(const CycRat& o) const;
    CycRat operator*(const CycRat& o) const;
    CycRat operator*(const BigRat& s) const;
    CycRat& operator+=(const CycRat& o);
    bool operator==(const CycRat& o) const;

private:
    void check_compatible(const CycRat& o) const;

    std::int64_t p_ = 0;
    std::vector<BigRat> c_;
};

}  // namespace klsym
