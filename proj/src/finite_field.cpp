#include "klsym/finite_field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

namespace klsym {

namespace {

// Dense polynomials over F_p, constant term first, for the modulus scan.
using Poly = std::vector<std::int64_t>;

int degree(const Poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (f[static_cast<std::size_t>(i)] != 0) return i;
    return -1;
}

Poly poly_mod(Poly a, const Poly& f, std::int64_t p) {
    int df = degree(f);
    for (int i = degree(a); i >= df; --i) {
        std::int64_t c = a[static_cast<std::size_t>(i)] % p;
        if (c == 0) continue;
        for (int j = 0; j <= df; ++j) {
            auto& t = a[static_cast<std::size_t>(i - df + j)];
            t = (t - c * f[static_cast<std::size_t>(j)]) % p;
            if (t < 0) t += p;
        }
    }
    a.resize(static_cast<std::size_t>(df));
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::int64_t p) {
    Poly prod(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
    return poly_mod(std::move(prod), f, p);
}

Poly poly_powmod(Poly base, std::int64_t n, const Poly& f, std::int64_t p) {
    Poly r{1};
    base = poly_mod(std::move(base), f, p);
    while (n) {
        if (n & 1) r = poly_mulmod(r, base, f, p);
        base = poly_mulmod(base, base, f, p);
        n >>= 1;
    }
    return r;
}

Poly make_monic(Poly f, std::int64_t p);

Poly poly_gcd(Poly a, Poly b, std::int64_t p) {
    while (degree(b) >= 0) {
        b = make_monic(std::move(b), p);  // poly_mod requires a monic divisor
        Poly r = poly_mod(std::move(a), b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

Poly make_monic(Poly f, std::int64_t p) {
    int d = degree(f);
    if (d < 0) return f;
    std::int64_t lead = f[static_cast<std::size_t>(d)] % p;
    if (lead == 1) {
        f.resize(static_cast<std::size_t>(d) + 1);
        return f;
    }
    // lead^{p-2} mod p
    std::int64_t inv = 1, b = lead, n = p - 2;
    while (n) {
        if (n & 1) inv = inv * b % p;
        b = b * b % p;
        n >>= 1;
    }
    for (auto& c : f) c = c * inv % p;
    f.resize(static_cast<std::size_t>(d) + 1);
    return f;
}

bool is_irreducible(const Poly& f, std::int64_t p, int e) {
    // gcd(X^{p^i} - X, f) = 1 for 1 <= i <= e/2 certifies there is no
    // irreducible factor of degree <= e/2, hence none at all.
    Poly xp{0, 1};
    for (int i = 1; i <= e / 2; ++i) {
        xp = poly_powmod(std::move(xp), p, f, p);
        Poly diff = xp;
        diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] - 1 + p) % p;
        Poly g = poly_gcd(f, make_monic(std::move(diff), p), p);
        if (degree(g) != 0) return false;
    }
    return true;
}

}  // namespace

Field::Field(std::int64_t p, int e) : p_(p), e_(e) {
    q_ = 1;
    for (int i = 0; i < e; ++i) q_ *= p;
    select_modulus();
    build_tables();
    find_generator();
}

void Field::select_modulus() {
    if (e_ == 1) {
        modulus_ = {0, 1};  // X, the prime-field convention
        return;
    }
    // Scan f = X^e + c_{e-1}X^{e-1} + ... + c_0 with the constant coefficient
    // varying fastest.
    std::int64_t total = q_;
    for (std::int64_t m = 0; m < total; ++m) {
        Poly f(static_cast<std::size_t>(e_) + 1, 0);
        std::int64_t t = m;
        for (int i = 0; i < e_; ++i) {
            f[static_cast<std::size_t>(i)] = t % p_;
            t /= p_;
        }
        f[static_cast<std::size_t>(e_)] = 1;
        if (is_irreducible(f, p_, e_)) {
            modulus_.assign(f.begin(), f.end());
            return;
        }
    }
    throw InternalError("no irreducible modulus found");  // unreachable
}

void Field::build_tables() {
    const std::size_t e = static_cast<std::size_t>(e_);
    // X^{e+i} mod f for i = 0..e-2 (all the overflow degrees of a product)
    reduction_.clear();
    if (e_ >= 2) {
        Coords cur(e, 0);  // X^e mod f = -(low part of f)
        for (std::size_t i = 0; i < e; ++i)
            cur[i] = static_cast<std::int32_t>((p_ - modulus_[i]) % p_);
        for (int i = 0; i + 1 < e_; ++i) {
            reduction_.push_back(cur);
            Coords next(e, 0);
            std::int32_t top = cur[e - 1];
            for (std::size_t j = e - 1; j >= 1; --j) next[j] = cur[j - 1];
            next[0] = 0;
            if (top != 0) {
                for (std::size_t j = 0; j < e; ++j) {
                    std::int64_t t = next[j] + static_cast<std::int64_t>(top) * ((p_ - modulus_[j]) % p_);
                    next[j] = static_cast<std::int32_t>(t % p_);
                }
            }
            cur = std::move(next);
        }
    }

    // Frobenius columns (X^i)^p = (X^p)^i
    frobenius_cols_.assign(e, Coords(e, 0));
    frobenius_cols_[0] = one();
    if (e_ > 1) {
        Coords xp = pow(gen(), static_cast<std::uint64_t>(p_));
        for (std::size_t i = 1; i < e; ++i) frobenius_cols_[i] = mul(frobenius_cols_[i - 1], xp);
    }

    // Absolute trace of each basis element; must be a constant.
    basis_trace_.assign(e, 0);
    for (std::size_t i = 0; i < e; ++i) {
        Coords b(e, 0);
        b[i] = 1;
        Coords acc = b, y = b;
        for (int j = 1; j < e_; ++j) {
            y = frobenius(y);
            acc = add(acc, y);
        }
        for (std::size_t j = 1; j < e; ++j)
            if (acc[j] != 0) throw InternalError("basis trace not in the prime field");
        basis_trace_[i] = acc[0];
    }
}

void Field::find_generator() {
    unit_factors_ = prime_factors(q_ - 1 == 0 ? 1 : q_ - 1);
    if (q_ - 1 <= 1) unit_factors_.clear();
    for (std::int64_t idx = 1; idx < q_; ++idx) {
        Coords x = element_at(idx);
        bool ok = true;
        for (std::int64_t ell : unit_factors_) {
            if (pow(x, static_cast<std::uint64_t>((q_ - 1) / ell)) == one()) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (pow(x, static_cast<std::uint64_t>(q_ - 1)) != one())
            throw InternalError("generator candidate has wrong order");
        generator_ = std::move(x);
        return;
    }
    throw InternalError("no multiplicative generator found");
}

Coords Field::from_int(std::int64_t c) const {
    Coords r(static_cast<std::size_t>(e_), 0);
    c %= p_;
    if (c < 0) c += p_;
    r[0] = static_cast<std::int32_t>(c);
    return r;
}

Coords Field::gen() const {
    Coords r(static_cast<std::size_t>(e_), 0);
    if (e_ == 1) return r;  // class of X is 0 mod X
    r[1] = 1;
    return r;
}

bool Field::is_zero(const Coords& a) const {
    return std::all_of(a.begin(), a.end(), [](std::int32_t c) { return c == 0; });
}

Coords Field::add(const Coords& a, const Coords& b) const {
    Coords r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int32_t t = a[i] + b[i];
        if (t >= p_) t -= static_cast<std::int32_t>(p_);
        r[i] = t;
    }
    return r;
}

Coords Field::sub(const Coords& a, const Coords& b) const {
    Coords r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int32_t t = a[i] - b[i];
        if (t < 0) t += static_cast<std::int32_t>(p_);
        r[i] = t;
    }
    return r;
}

Coords Field::neg(const Coords& a) const {
    Coords r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] == 0 ? 0 : static_cast<std::int32_t>(p_) - a[i];
    return r;
}

Coords Field::mul(const Coords& a, const Coords& b) const {
    const std::size_t e = static_cast<std::size_t>(e_);
    if (e == 1) {
        Coords r(1);
        r[0] = static_cast<std::int32_t>(static_cast<std::int64_t>(a[0]) * b[0] % p_);
        return r;
    }
    std::int64_t prod[64] = {0};
    for (std::size_t i = 0; i < e; ++i) {
        if (a[i] == 0) continue;
        std::int64_t ai = a[i];
        for (std::size_t j = 0; j < e; ++j) prod[i + j] += ai * b[j];
    }
    for (std::size_t i = 0; i < 2 * e - 1; ++i) prod[i] %= p_;
    // Fold degrees e..2e-2 with the precomputed reduction rows.
    Coords r(e);
    for (std::size_t j = 0; j < e; ++j) {
        std::int64_t acc = prod[j];
        for (std::size_t i = 0; i + 1 < e; ++i) {
            std::int64_t c = prod[e + i];
            if (c) acc += c * reduction_[i][j];
        }
        r[j] = static_cast<std::int32_t>(acc % p_);
    }
    return r;
}

Coords Field::mul_scalar(const Coords& a, std::int64_t c) const {
    c %= p_;
    if (c < 0) c += p_;
    Coords r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = static_cast<std::int32_t>(a[i] * c % p_);
    return r;
}

Coords Field::pow(const Coords& a, std::uint64_t n) const {
    Coords r = one(), b = a;
    while (n) {
        if (n & 1) r = mul(r, b);
        b = mul(b, b);
        n >>= 1;
    }
    return r;
}

Coords Field::inv(const Coords& a) const {
    if (is_zero(a)) throw InvalidArgument("inverse of zero");
    return pow(a, static_cast<std::uint64_t>(q_ - 2));
}

Coords Field::frobenius(const Coords& a) const {
    const std::size_t e = static_cast<std::size_t>(e_);
    Coords r(e, 0);
    std::int64_t acc[64] = {0};
    for (std::size_t i = 0; i < e; ++i) {
        if (a[i] == 0) continue;
        std::int64_t ai = a[i];
        const Coords& col = frobenius_cols_[i];
        for (std::size_t j = 0; j < e; ++j) acc[j] += ai * col[j];
    }
    for (std::size_t j = 0; j < e; ++j) r[j] = static_cast<std::int32_t>(acc[j] % p_);
    return r;
}

Coords Field::frobenius_pow(const Coords& a, int j) const {
    Coords r = a;
    for (int i = 0; i < j; ++i) r = frobenius(r);
    return r;
}

std::int64_t Field::trace_to_prime(const Coords& a) const {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * basis_trace_[i];
    return acc % p_;
}

std::int64_t Field::element_index(const Coords& a) const {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < a.size(); ++i) idx = idx * p_ + a[i];
    return idx;
}

Coords Field::element_at(std::int64_t index) const {
    if (index < 0 || index >= q_) throw InvalidArgument("element index out of range");
    Coords r(static_cast<std::size_t>(e_));
    for (int i = e_ - 1; i >= 0; --i) {
        r[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(index % p_);
        index /= p_;
    }
    return r;
}

Coords Field::nth_root_of_unity(std::int64_t n) const {
    if (n <= 0 || (q_ - 1) % n != 0)
        throw InvalidArgument("nth_root_of_unity: n does not divide q-1");
    Coords r = pow(generator_, static_cast<std::uint64_t>((q_ - 1) / n));
    for (std::int64_t ell : prime_factors(n == 1 ? 1 : n)) {
        if (n == 1) break;
        if (pow(r, static_cast<std::uint64_t>(n / ell)) == one())
            throw InternalError("root of unity has smaller order than requested");
    }
    return r;
}

FieldPtr get_field(std::int64_t p, int e, std::int64_t max_q) {
    if (p < 2 || !is_prime(p)) throw InvalidArgument("p = " + std::to_string(p) + " is not prime");
    if (e < 1 || e > 62) throw InvalidArgument("extension degree out of range");
    long double qf = 1;
    for (int i = 0; i < e; ++i) qf *= static_cast<long double>(p);
    if (qf > static_cast<long double>(max_q))
        throw BudgetExceeded("field size p^e = " + std::to_string(p) + "^" + std::to_string(e) +
                             " exceeds budget " + std::to_string(max_q));

    static std::mutex mu;
    static std::map<std::pair<std::int64_t, int>, FieldPtr> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, e);
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
    FieldPtr f(new Field(p, e));
    registry.emplace(key, f);
    return f;
}

Embedding::Embedding(FieldPtr from, FieldPtr to) : from_(std::move(from)), to_(std::move(to)) {
    if (from_->p() != to_->p() || to_->e() % from_->e() != 0)
        throw InvalidArgument("embedding requires F_{p^d} -> F_{p^e} with d | e");
    const int d = from_->e();
    const std::int64_t p = from_->p();

    Coords beta;
    if (from_->e() == to_->e()) {
        beta = to_->gen();  // identity embedding
    } else {
        // Roots of the small modulus lie in the subfield of size p^d:
        // 0 plus the powers of h^{(q_to-1)/(p^d-1)}.
        std::int64_t sub_order = 1;
        for (int i = 0; i < d; ++i) sub_order *= p;
        sub_order -= 1;
        const std::int64_t step = (to_->q() - 1) / sub_order;
        const Coords h_step = to_->pow(to_->mult_generator(), static_cast<std::uint64_t>(step));
        const auto& mod = from_->modulus();

        auto eval_modulus = [&](const Coords& x) {
            Coords acc = to_->from_int(mod[static_cast<std::size_t>(d)]);
            for (int i = d - 1; i >= 0; --i) {
                acc = to_->mul(acc, x);
                acc = to_->add(acc, to_->from_int(mod[static_cast<std::size_t>(i)]));
            }
            return acc;
        };

        std::vector<Coords> roots;
        if (to_->is_zero(eval_modulus(to_->zero()))) roots.push_back(to_->zero());
        Coords y = to_->one();
        for (std::int64_t t = 0; t < sub_order; ++t) {
            if (to_->is_zero(eval_modulus(y))) roots.push_back(y);
            y = to_->mul(y, h_step);
        }
        if (static_cast<int>(roots.size()) != d)
            throw InternalError("embedding: expected exactly d roots of the small modulus");
        beta = *std::min_element(roots.begin(), roots.end(),
                                 [&](const Coords& a, const Coords& b) {
                                     return to_->element_index(a) < to_->element_index(b);
                                 });
    }

    basis_image_.resize(static_cast<std::size_t>(d));
    basis_image_[0] = to_->one();
    for (int i = 1; i < d; ++i) basis_image_[static_cast<std::size_t>(i)] = to_->mul(basis_image_[static_cast<std::size_t>(i - 1)], beta);

    // Row-echelon form of the e x d matrix whose columns are basis images,
    // augmented bookkeeping done at solve time.
    const int e = to_->e();
    echelon_.assign(static_cast<std::size_t>(e), std::vector<std::int32_t>(static_cast<std::size_t>(d), 0));
    for (int r = 0; r < e; ++r)
        for (int c = 0; c < d; ++c)
            echelon_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                basis_image_[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
    pivot_col_.clear();
}

Coords Embedding::apply(const Coords& a) const {
    Coords acc = to_->zero();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0) acc = to_->add(acc, to_->mul_scalar(basis_image_[i], a[i]));
    return acc;
}

std::optional<Coords> Embedding::preimage(const Coords& a) const {
    // Solve M y = a over F_p by fresh Gaussian elimination (d, e are tiny).
    const int e = to_->e(), d = from_->e();
    const std::int64_t p = from_->p();
    std::vector<std::vector<std::int64_t>> m(static_cast<std::size_t>(e),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(d) + 1, 0));
    for (int r = 0; r < e; ++r) {
        for (int c = 0; c < d; ++c) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = echelon_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(d)] = a[static_cast<std::size_t>(r)];
    }
    auto inv_mod = [&](std::int64_t v) {
        std::int64_t r = 1, b = v % p, n = p - 2;
        while (n) {
            if (n & 1) r = r * b % p;
            b = b * b % p;
            n >>= 1;
        }
        return r;
    };
    int row = 0;
    std::vector<int> pivot_of_col(static_cast<std::size_t>(d), -1);
    for (int col = 0; col < d && row < e; ++col) {
        int pr = -1;
        for (int r = row; r < e; ++r)
            if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] % p != 0) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(m[static_cast<std::size_t>(pr)], m[static_cast<std::size_t>(row)]);
        std::int64_t iv = inv_mod(m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]);
        for (auto& v : m[static_cast<std::size_t>(row)]) v = v * iv % p;
        for (int r = 0; r < e; ++r) {
            if (r == row) continue;
            std::int64_t f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] % p;
            if (f == 0) continue;
            for (int c = col; c <= d; ++c) {
                auto& t = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
                t = (t - f * m[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)]) % p;
                if (t < 0) t += p;
            }
        }
        pivot_of_col[static_cast<std::size_t>(col)] = row;
        ++row;
    }
    Coords y(static_cast<std::size_t>(d), 0);
    for (int col = 0; col < d; ++col) {
        int pr = pivot_of_col[static_cast<std::size_t>(col)];
        if (pr < 0) return std::nullopt;  // matrix is injective, so this cannot happen
        y[static_cast<std::size_t>(col)] = static_cast<std::int32_t>(m[static_cast<std::size_t>(pr)][static_cast<std::size_t>(d)] % p);
    }
    // Consistency: rows beyond the pivots must have zero RHS.
    for (int r = row; r < e; ++r)
        if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(d)] % p != 0) return std::nullopt;
    return y;
}

const Embedding& get_embedding(const FieldPtr& from, const FieldPtr& to) {
    static std::mutex mu;
    static std::map<std::tuple<std::int64_t, int, int>, std::unique_ptr<Embedding>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(from->p(), from->e(), to->e());
    auto it = registry.find(key);
    if (it == registry.end())
        it = registry.emplace(key, std::make_unique<Embedding>(from, to)).first;
    return *it->second;
}

Coords rel_trace(const FieldPtr& big, const Coords& x, const FieldPtr& small) {
    if (big->p() != small->p() || big->e() % small->e() != 0)
        throw InvalidArgument("rel_trace requires d | e over the same prime");
    const int d = small->e(), steps = big->e() / d;
    Coords acc = x, y = x;
    for (int i = 1; i < steps; ++i) {
        y = big->frobenius_pow(y, d);
        acc = big->add(acc, y);
    }
    if (big->frobenius_pow(acc, d) != acc)
        throw InternalError("relative trace not fixed by the subfield Frobenius");
    auto pre = get_embedding(small, big).preimage(acc);
    if (!pre) throw InternalError("relative trace not in the subfield");
    return *pre;
}

}  // namespace klsym
