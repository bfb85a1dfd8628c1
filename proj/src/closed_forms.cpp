#include "klsym/closed_forms.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>

#include "klsym/errors.hpp"

namespace klsym {

std::int64_t degree_from_counts(int n, std::int64_t p, int k, const SymCounts& counts) {
    (void)p;
    BigInt total = binomial(k + n - 1, n - 1) - counts.d;
    BigInt deg = exact_div(total, BigInt(n), "degree formula (binom - d_k)/n");
    if (deg < 0 || deg > std::numeric_limits<std::int64_t>::max())
        throw InternalError("degree out of range");
    return deg.convert_to<std::int64_t>();
}

std::int64_t degree_from_counts(int n, std::int64_t p, int k) {
    return degree_from_counts(n, p, k, sym_counts(n, p, k));
}

std::int64_t degree_rank2(std::int64_t p, int k) {
    if (p % 2 == 0) throw InvalidArgument("the n=2 degree formula needs p odd");
    if (k % 2 == 0) return k / 2 - k / (2 * p);
    return (k + 1) / 2 - (k + p) / (2 * p);  // [k/2p + 1/2] = [(k+p)/2p]
}

std::optional<std::int64_t> degree_prime_n(int n, std::int64_t p, int k) {
    if (n < 2 || !is_prime(n) || n == p) return std::nullopt;
    // p must be a primitive (n-1)-th root of unity mod n
    if (mult_order(p % n, n) != n - 1) return std::nullopt;
    // tilde(k/n): the smallest non-negative integer whose image in F_p is k/n
    std::int64_t n_inv = 1, base = n % p, exp = p - 2;
    while (exp) {
        if (exp & 1) n_inv = n_inv * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    std::int64_t tilde = (k % p) * n_inv % p;
    std::int64_t top = k - static_cast<std::int64_t>(n) * tilde;
    if (top < 0) return std::nullopt;
    if (top % p != 0) throw InternalError("k - n*tilde(k/n) is not divisible by p");
    BigInt deg = binomial(k + n - 1, n - 1) - binomial(top / p + n - 1, n - 1);
    deg = exact_div(deg, BigInt(n), "prime-n degree closed form");
    return deg.convert_to<std::int64_t>();
}

std::int64_t inertia_dimension_at_infinity(int n, int k, const SymCounts& counts) {
    if (n % 2 == 1) return counts.a;
    if (k % 2 == 1) return 0;
    return counts.b;
}

IntPoly bad_factor_infinity(int n, std::int64_t p, std::int64_t q, int k, const SymCounts& counts) {
    (void)p;  // the counts already encode (n, p, k); the factor needs only q
    if ((q - 1) % n != 0) throw InvalidArgument("the bad factor at infinity needs n | q-1");
    if (n % 2 == 0 && k % 2 == 1) return IntPoly::one();

    if (k % 2 == 1 && (static_cast<std::int64_t>(k) * (n - 1)) % 2 != 0)
        throw InternalError("weight exponent k(n-1)/2 must be integral here");
    BigInt w = big_pow(BigInt(q), static_cast<std::uint64_t>(static_cast<std::int64_t>(k) * (n - 1) / 2));
    IntPoly minus = IntPoly::one_plus(-w);  // 1 - q^{k(n-1)/2} T
    IntPoly plus = IntPoly::one_plus(w);    // 1 + q^{k(n-1)/2} T

    if (n % 2 == 1) return poly_pow(minus, static_cast<int>(counts.a));

    // n and k both even
    const std::int64_t b = counts.b, c = counts.c;
    if ((q - 1) % (2 * n) == 0) return poly_pow(minus, static_cast<int>(b));
    if (n % 4 == 0 || k % 4 == 0)
        return poly_mul(poly_pow(plus, static_cast<int>(c)), poly_pow(minus, static_cast<int>(b - c)));
    return poly_mul(poly_pow(minus, static_cast<int>(c)), poly_pow(plus, static_cast<int>(b - c)));
}

MkNk mk_nk(std::int64_t p, int k) {
    MkNk r;
    r.m_k = (k % 4 == 0) ? 1 + k / (2 * p) : k / (2 * p);
    r.n_k = (k + 2 * p) / (4 * p);  // [k/4p + 1/2]
    return r;
}

IntPoly p_k_poly(std::int64_t p, int k) {
    if (p % 2 == 0) throw InvalidArgument("P_k is defined for odd p");
    IntPoly one_minus_t = IntPoly::one_plus(BigInt(-1));
    if (k % 2 == 1) return one_minus_t;
    auto [m_k, n_k] = mk_nk(p, k);
    BigInt w = big_pow(BigInt(p), static_cast<std::uint64_t>(k / 2));
    IntPoly minus = IntPoly::one_plus(-w);
    IntPoly plus = IntPoly::one_plus(w);
    if (p % 4 == 1) return poly_mul(one_minus_t, poly_pow(minus, static_cast<int>(m_k)));
    return poly_mul(one_minus_t,
                    poly_mul(poly_pow(plus, static_cast<int>(n_k)), poly_pow(minus, static_cast<int>(m_k - n_k))));
}

FunctionalEqData functional_eq_check(const IntPoly& M, std::int64_t p, int k) {
    if (M.coeff(0) != 1) throw InvalidArgument("functional equation check needs constant term 1");
    FunctionalEqData out;
    out.delta = M.degree();
    const BigInt& top = M.coeff(out.delta);
    if (top == 0) throw InvalidArgument("zero polynomial");
    BigInt B = big_pow(BigInt(p), static_cast<std::uint64_t>(k + 1));
    out.c = BigRat(big_pow(B, static_cast<std::uint64_t>(out.delta))) / BigRat(top);
    // a_i = c a_{delta-i} B^{i-delta}  <=>  a_i a_delta = a_{delta-i} B^i
    out.holds = true;
    BigInt Bi = 1;
    for (int i = 0; i <= out.delta; ++i) {
        if (M.coeff(i) * top != M.coeff(out.delta - i) * Bi) {
            out.holds = false;
            break;
        }
        Bi *= B;
    }
    return out;
}

WeightHistogram weight_classify(const IntPoly& P, std::int64_t q, double tol) {
    if (P.coeff(0) != 1) throw InvalidArgument("weight classification needs constant term 1");
    WeightHistogram out;
    const int d = P.degree();
    if (d == 0) return out;

    // Reciprocal roots of P are the eigenvalues of the companion matrix of
    // x^d + a_1 x^{d-1} + ... + a_d.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i)
        companion(i, d - 1) = -P.coeff(d - i).convert_to<double>();
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw InternalError("eigenvalue computation failed");

    const double logq = std::log(static_cast<double>(q));
    for (int i = 0; i < d; ++i) {
        const double modulus = std::abs(solver.eigenvalues()[i]);
        if (modulus <= 0) throw CheckFailed("reciprocal root with zero modulus");
        const double w = 2.0 * std::log(modulus) / logq;
        const int bucket = static_cast<int>(std::lround(w));
        const double expected = std::pow(static_cast<double>(q), bucket / 2.0);
        if (std::abs(modulus - expected) > tol * expected)
            throw CheckFailed("unclassifiable reciprocal root of modulus " + std::to_string(modulus) +
                              " (q = " + std::to_string(q) + ")");
        out.counts[bucket] += 1;
        out.roots.emplace_back(bucket, modulus);
    }
    return out;
}

std::vector<int> strip_q_power_roots(IntPoly& P, std::int64_t q, int max_i) {
    std::vector<int> stripped;
    for (int i = 0; i <= max_i; ++i) {
        IntPoly factor = IntPoly::one_plus(-big_pow(BigInt(q), static_cast<std::uint64_t>(i)));
        for (;;) {
            auto quo = poly_divide_exact(P, factor);
            if (!quo) break;
            P = *quo;
            stripped.push_back(i);
            if (P.degree() == 0) return stripped;
        }
    }
    return stripped;
}

Decomposition verify_decomposition(const LPoly& L, int n, std::int64_t p, std::int64_t q, int k,
                                   const SymCounts& counts, double weight_tol) {
    Decomposition out;
    const std::int64_t pure_weight = static_cast<std::int64_t>(k) * (n - 1) + 1;

    out.bad_factor_applicable = (q - 1) % n == 0;
    if (out.bad_factor_applicable) {
        out.bad_infinity = bad_factor_infinity(n, p, q, k, counts);
        out.inertia_dim = inertia_dimension_at_infinity(n, k, counts);
        out.bad_degree_matches = out.bad_infinity.degree() == out.inertia_dim;
        out.bad_divides = poly_divide_exact(L.num, out.bad_infinity).has_value();
    }

    out.n2_applicable = n == 2 && q == p && p % 2 == 1 && k >= 1 && L.is_polynomial();
    if (out.n2_applicable) {
        out.p_k = p_k_poly(p, k);
        if (out.bad_factor_applicable) {
            IntPoly predicted = poly_mul(IntPoly::one_plus(BigInt(-1)), out.bad_infinity);
            out.p_k_matches_bad_factor = predicted == out.p_k;
        }
        auto quo = poly_divide_exact(L.num, out.p_k);
        if (quo) {
            out.m_k = *quo;
            out.l_equals_pk_mk = poly_mul(out.p_k, out.m_k) == L.num;
            out.m_k_degree_matches =
                out.m_k.degree() == degree_rank2(p, k) - out.p_k.degree();
            out.feq = functional_eq_check(out.m_k, p, k);
            BigRat c2 = out.feq.c * out.feq.c;
            out.feq_constant_squares =
                c2 == BigRat(big_pow(BigInt(p), static_cast<std::uint64_t>((k + 1)) * out.feq.delta));
            out.weights_applicable = true;
            out.expected_weight = k + 1;
            try {
                out.weights = weight_classify(out.m_k, p, weight_tol);
                out.weights_pure = true;
                for (const auto& [w, cnt] : out.weights.counts)
                    if (w != k + 1) out.weights_pure = false;
            } catch (const CheckFailed& ex) {
                out.weights_pure = false;
                out.weight_error = ex.what();
            }
        }
        // Prop 2.3 for n = 2: the factor at 0 is exactly 1 - T
        out.zero_factor_applicable = true;
        out.zero_factor_exponents = {0};
        out.zero_factor_in_bounds =
            poly_divide_exact(L.num, IntPoly::one_plus(BigInt(-1))).has_value();
    } else if (n % 2 == 1 && out.bad_factor_applicable && L.is_polynomial() && out.bad_divides) {
        // strip the predicted infinity factor, then empirical q-power roots
        IntPoly rest = *poly_divide_exact(L.num, out.bad_infinity);
        out.zero_factor_applicable = true;
        out.zero_factor_exponents = strip_q_power_roots(rest, q, static_cast<int>(static_cast<std::int64_t>(k) * (n - 1) / 2));
        out.zero_factor_in_bounds = true;  // by construction of the strip bound
        out.pure_part = rest;
        out.weights_applicable = true;
        out.expected_weight = static_cast<int>(pure_weight);
        try {
            out.weights = weight_classify(out.pure_part, q, weight_tol);
            out.weights_pure = true;
            for (const auto& [w, cnt] : out.weights.counts)
                if (w != pure_weight) out.weights_pure = false;
        } catch (const CheckFailed& ex) {
            out.weights_pure = false;
            out.weight_error = ex.what();
        }
    }
    return out;
}

}  // namespace klsym
