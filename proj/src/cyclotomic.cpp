#include "klsym/cyclotomic.hpp"

#include <cmath>

namespace klsym {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Fold a redundant length-(2p-3) product (exponents of zeta) into the power
// basis: first wrap exponents mod p, then eliminate the zeta^{p-1} lane.
template <class T>
std::vector<T> fold_to_power_basis(std::vector<T> prod, std::int64_t p) {
    std::vector<T> wrapped(static_cast<std::size_t>(p));
    for (std::size_t i = 0; i < prod.size(); ++i) wrapped[i % static_cast<std::size_t>(p)] += prod[i];
    std::vector<T> out(static_cast<std::size_t>(p - 1));
    const T& top = wrapped[static_cast<std::size_t>(p - 1)];
    for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(p); ++i) out[i] = wrapped[i] - top;
    return out;
}

}  // namespace

CycInt CycInt::from_integer(std::int64_t p, BigInt v) {
    CycInt z(p);
    z.c_[0] = std::move(v);
    return z;
}

CycInt CycInt::zeta_pow(std::int64_t p, std::int64_t a) {
    a %= p;
    if (a < 0) a += p;
    CycInt z(p);
    if (a == p - 1) {
        for (auto& c : z.c_) c = -1;
    } else {
        z.c_[static_cast<std::size_t>(a)] = 1;
    }
    return z;
}

bool CycInt::is_zero() const {
    for (const auto& c : c_)
        if (c != 0) return false;
    return true;
}

std::optional<BigInt> CycInt::as_integer() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return std::nullopt;
    return c_[0];
}

void CycInt::check_compatible(const CycInt& o) const {
    if (p_ != o.p_) throw InvalidArgument("cyclotomic arithmetic across different primes");
}

CycInt CycInt::operator+(const CycInt& o) const {
    check_compatible(o);
    CycInt r(p_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

CycInt CycInt::operator-(const CycInt& o) const {
    check_compatible(o);
    CycInt r(p_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
}

CycInt CycInt::operator-() const {
    CycInt r(p_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = -c_[i];
    return r;
}

CycInt& CycInt::operator+=(const CycInt& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

CycInt& CycInt::operator-=(const CycInt& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

CycInt CycInt::operator*(const CycInt& o) const {
    check_compatible(o);
    const std::size_t n = c_.size();
    std::vector<BigInt> prod(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (o.c_[j] == 0) continue;
            prod[i + j] += c_[i] * o.c_[j];
        }
    }
    CycInt r(p_);
    r.c_ = fold_to_power_basis(std::move(prod), p_);
    return r;
}

CycInt CycInt::operator*(const BigInt& s) const {
    CycInt r(p_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * s;
    return r;
}

bool CycInt::operator==(const CycInt& o) const { return p_ == o.p_ && c_ == o.c_; }

CycInt CycInt::galois(std::int64_t a) const {
    a %= p_;
    if (a < 0) a += p_;
    if (a == 0) throw InvalidArgument("galois action needs a coprime to p");
    std::vector<BigInt> redundant(static_cast<std::size_t>(p_));
    for (std::size_t j = 0; j < c_.size(); ++j)
        redundant[static_cast<std::size_t>(static_cast<std::int64_t>(j) * a % p_)] += c_[j];
    CycInt r(p_);
    const BigInt& top = redundant[static_cast<std::size_t>(p_ - 1)];
    for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(p_); ++i) r.c_[i] = redundant[i] - top;
    return r;
}

std::complex<double> CycInt::complex_value() const {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        double angle = kTwoPi * static_cast<double>(j) / static_cast<double>(p_);
        acc += c_[j].convert_to<double>() * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return acc;
}

std::vector<std::string> CycInt::to_decimal_strings() const {
    std::vector<std::string> out;
    out.reserve(c_.size());
    for (const auto& c : c_) out.push_back(c.str());
    return out;
}

CycInt CycInt::from_decimal_strings(std::int64_t p, const std::vector<std::string>& v) {
    if (static_cast<std::int64_t>(v.size()) != p - 1)
        throw CacheError("cyclotomic value has wrong coordinate count");
    CycInt z(p);
    for (std::size_t i = 0; i < v.size(); ++i) {
        try {
            z.c_[i] = BigInt(v[i]);
        } catch (const std::exception&) {
            throw CacheError("cyclotomic value has a malformed coordinate");
        }
    }
    return z;
}

CycRat::CycRat(const CycInt& z) : p_(z.prime()), c_(z.coords().size()) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = BigRat(z.coords()[i]);
}

bool CycRat::is_zero() const {
    for (const auto& c : c_)
        if (c != 0) return false;
    return true;
}

std::optional<CycInt> CycRat::as_cyc_int() const {
    CycInt z(p_);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (!is_integer(c_[i])) return std::nullopt;
        z.coord(i) = numerator(c_[i]);
    }
    return z;
}

void CycRat::check_compatible(const CycRat& o) const {
    if (p_ != o.p_) throw InvalidArgument("cyclotomic arithmetic across different primes");
}

CycRat CycRat::operator+(const CycRat& o) const {
    check_compatible(o);
    CycRat r(p_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

CycRat CycRat::operator-(const CycRat& o) const {
    check_compatible(o);
    CycRat r(p_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
}

CycRat CycRat::operator*(const CycRat& o) const {
    check_compatible(o);
    const std::size_t n = c_.size();
    std::vector<BigRat> prod(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (o.c_[j] == 0) continue;
            prod[i + j] += c_[i] * o.c_[j];
        }
    }
    CycRat r(p_);
    r.c_ = fold_to_power_basis(std::move(prod), p_);
    return r;
}

CycRat CycRat::operator*(const BigRat& s) const {
    CycRat r(p_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * s;
    return r;
}

CycRat& CycRat::operator+=(const CycRat& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

bool CycRat::operator==(const CycRat& o) const { return p_ == o.p_ && c_ == o.c_; }

}  // namespace klsym
