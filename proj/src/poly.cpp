#include "klsym/poly.hpp"

#include <algorithm>

#include "klsym/errors.hpp"

namespace klsym {

int IntPoly::degree() const {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        if (c[static_cast<std::size_t>(i)] != 0) return i;
    return 0;  // the zero polynomial is treated as degree 0 here
}

const BigInt& IntPoly::coeff(int i) const {
    static const BigInt zero(0);
    if (i < 0 || i >= static_cast<int>(c.size())) return zero;
    return c[static_cast<std::size_t>(i)];
}

bool IntPoly::operator==(const IntPoly& o) const {
    int d = std::max(static_cast<int>(c.size()), static_cast<int>(o.c.size()));
    for (int i = 0; i < d; ++i)
        if (coeff(i) != o.coeff(i)) return false;
    return true;
}

std::vector<std::string> IntPoly::to_decimal_strings() const {
    std::vector<std::string> out;
    int d = degree();
    out.reserve(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) out.push_back(coeff(i).str());
    return out;
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
    int da = a.degree(), db = b.degree();
    std::vector<BigInt> out(static_cast<std::size_t>(da + db) + 1);
    for (int i = 0; i <= da; ++i) {
        if (a.coeff(i) == 0) continue;
        for (int j = 0; j <= db; ++j) out[static_cast<std::size_t>(i + j)] += a.coeff(i) * b.coeff(j);
    }
    return IntPoly(std::move(out));
}

IntPoly poly_pow(const IntPoly& a, int k) {
    IntPoly r = IntPoly::one();
    for (int i = 0; i < k; ++i) r = poly_mul(r, a);
    return r;
}

IntPoly poly_add(const IntPoly& a, const IntPoly& b) {
    int d = std::max(a.degree(), b.degree());
    std::vector<BigInt> out(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) out[static_cast<std::size_t>(i)] = a.coeff(i) + b.coeff(i);
    return IntPoly(std::move(out));
}

IntPoly poly_sub(const IntPoly& a, const IntPoly& b) {
    int d = std::max(a.degree(), b.degree());
    std::vector<BigInt> out(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) out[static_cast<std::size_t>(i)] = a.coeff(i) - b.coeff(i);
    return IntPoly(std::move(out));
}

std::optional<IntPoly> poly_divide_exact(const IntPoly& num, const IntPoly& den) {
    if (den.coeff(0) != 1 && den.coeff(0) != -1)
        throw InvalidArgument("poly_divide_exact needs a divisor with constant term +-1");
    const int dn = num.degree(), dd = den.degree();
    if (dd > dn) {
        if (num.degree() == 0 && num.coeff(0) == 0) return IntPoly({BigInt(0)});
        return std::nullopt;
    }
    const int dq = dn - dd;
    std::vector<BigInt> rem(num.c.begin(), num.c.end());
    rem.resize(static_cast<std::size_t>(dn) + 1);
    std::vector<BigInt> quo(static_cast<std::size_t>(dq) + 1);
    const BigInt c0 = den.coeff(0);
    // ascending-power division: works from the constant term up
    for (int i = 0; i <= dq; ++i) {
        BigInt qi = rem[static_cast<std::size_t>(i)] * c0;  // c0 = +-1
        quo[static_cast<std::size_t>(i)] = qi;
        if (qi == 0) continue;
        for (int j = 0; j <= dd && i + j <= dn; ++j)
            rem[static_cast<std::size_t>(i + j)] -= qi * den.coeff(j);
    }
    for (const auto& r : rem)
        if (r != 0) return std::nullopt;
    return IntPoly(std::move(quo));
}

bool poly_coprime(const IntPoly& a, const IntPoly& b) {
    // Euclid over Q; sizes here are tiny.
    std::vector<BigRat> x, y;
    for (int i = 0; i <= a.degree(); ++i) x.emplace_back(a.coeff(i));
    for (int i = 0; i <= b.degree(); ++i) y.emplace_back(b.coeff(i));
    auto deg = [](const std::vector<BigRat>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
            if (v[static_cast<std::size_t>(i)] != 0) return i;
        return -1;
    };
    while (deg(y) >= 0) {
        int dx = deg(x), dy = deg(y);
        if (dx < dy) {
            std::swap(x, y);
            continue;
        }
        BigRat f = x[static_cast<std::size_t>(dx)] / y[static_cast<std::size_t>(dy)];
        for (int i = 0; i <= dy; ++i)
            x[static_cast<std::size_t>(dx - dy + i)] -= f * y[static_cast<std::size_t>(i)];
        x.resize(static_cast<std::size_t>(dx));  // leading term cancelled
        if (deg(x) < deg(y)) std::swap(x, y);
    }
    return deg(x) == 0;
}

RatSeries series_exp(const std::vector<BigInt>& sums) {
    const int N = static_cast<int>(sums.size());
    RatSeries s;
    s.c.assign(static_cast<std::size_t>(N) + 1, BigRat(0));
    s.c[0] = 1;
    // c_j = (1/j) * sum_{m=1}^{j} S_m c_{j-m}, from d/dT log.
    for (int j = 1; j <= N; ++j) {
        BigRat acc(0);
        for (int m = 1; m <= j; ++m)
            acc += BigRat(sums[static_cast<std::size_t>(m - 1)]) * s.c[static_cast<std::size_t>(j - m)];
        s.c[static_cast<std::size_t>(j)] = acc / j;
        if (!is_integer(s.c[static_cast<std::size_t>(j)]))
            throw InternalError("L-series coefficient " + std::to_string(j) + " is not an integer");
    }
    return s;
}

LPoly reconstruct(const RatSeries& series, int D, int den_bound) {
    const int N = series.order();
    for (int dd = 0; dd <= den_bound; ++dd) {
        const int dn = D + dd;
        if (dn < 0) continue;
        if (dn + 2 * dd > N) continue;  // not enough coefficients to determine and verify

        // Solve for q_1..q_dd from sum_{j=0}^{dd} q_j c_{r-j} = 0, r = dn+1..dn+dd.
        std::vector<BigRat> q(static_cast<std::size_t>(dd) + 1, BigRat(0));
        q[0] = 1;
        if (dd > 0) {
            std::vector<std::vector<BigRat>> m(static_cast<std::size_t>(dd),
                                               std::vector<BigRat>(static_cast<std::size_t>(dd) + 1, BigRat(0)));
            for (int r = 0; r < dd; ++r) {
                for (int j = 1; j <= dd; ++j) {
                    int idx = dn + 1 + r - j;
                    m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j - 1)] =
                        idx >= 0 ? series.coeff(idx) : BigRat(0);
                }
                m[static_cast<std::size_t>(r)][static_cast<std::size_t>(dd)] = -series.coeff(dn + 1 + r);
            }
            // Gaussian elimination over Q.
            int row = 0;
            std::vector<int> pivot(static_cast<std::size_t>(dd), -1);
            for (int col = 0; col < dd && row < dd; ++col) {
                int pr = -1;
                for (int r = row; r < dd; ++r)
                    if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
                        pr = r;
                        break;
                    }
                if (pr < 0) continue;
                std::swap(m[static_cast<std::size_t>(pr)], m[static_cast<std::size_t>(row)]);
                BigRat iv = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
                for (auto& v : m[static_cast<std::size_t>(row)]) v /= iv;
                for (int r = 0; r < dd; ++r) {
                    if (r == row) continue;
                    BigRat f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
                    if (f == 0) continue;
                    for (int ccol = col; ccol <= dd; ++ccol)
                        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(ccol)] -=
                            f * m[static_cast<std::size_t>(row)][static_cast<std::size_t>(ccol)];
                }
                pivot[static_cast<std::size_t>(col)] = row;
                ++row;
            }
            bool solvable = true;
            for (int col = 0; col < dd; ++col) {
                if (pivot[static_cast<std::size_t>(col)] < 0) {
                    solvable = false;
                    break;
                }
                q[static_cast<std::size_t>(col + 1)] =
                    m[static_cast<std::size_t>(pivot[static_cast<std::size_t>(col)])][static_cast<std::size_t>(dd)];
            }
            if (!solvable) continue;
        }

        // Candidate numerator: first dn+1 coefficients of series * q.
        std::vector<BigRat> num(static_cast<std::size_t>(dn) + 1, BigRat(0));
        for (int i = 0; i <= dn; ++i) {
            BigRat acc(0);
            for (int j = 0; j <= std::min(i, dd); ++j)
                acc += q[static_cast<std::size_t>(j)] * series.coeff(i - j);
            num[static_cast<std::size_t>(i)] = acc;
        }
        // Verify the product against every available coefficient (the guard).
        bool ok = true;
        for (int i = dn + 1; i <= N && ok; ++i) {
            BigRat acc(0);
            for (int j = 0; j <= std::min(i, dd); ++j)
                acc += q[static_cast<std::size_t>(j)] * series.coeff(i - j);
            if (acc != 0) ok = false;
        }
        if (!ok) continue;

        LPoly out;
        std::vector<BigInt> ni, di;
        for (const auto& v : num) {
            if (!is_integer(v)) {
                ok = false;
                break;
            }
            ni.push_back(numerator(v));
        }
        for (const auto& v : q) {
            if (!is_integer(v)) {
                ok = false;
                break;
            }
            di.push_back(numerator(v));
        }
        if (!ok) continue;
        out.num = IntPoly(std::move(ni));
        out.den = IntPoly(std::move(di));
        out.denominator_degree_bound = den_bound;
        if (out.num.coeff(0) != 1 || out.den.coeff(0) != 1) continue;
        if (out.num.degree() - out.den.degree() != D) continue;  // degree bound falsified
        if (!poly_coprime(out.num, out.den)) continue;
        return out;
    }
    throw CheckFailed("rational reconstruction failed: no numerator/denominator pair of degree difference " +
                      std::to_string(D) + " reproduces the series");
}

}  // namespace klsym
