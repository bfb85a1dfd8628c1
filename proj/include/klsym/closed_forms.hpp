#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "klsym/poly.hpp"
#include "klsym/symcounts.hpp"

namespace klsym {

/// Degree of L as a rational function (deg num - deg den):
/// (binom(k+n-1, n-1) - d_k(n,p)) / n, with the divisibility asserted.
std::int64_t degree_from_counts(int n, std::int64_t p, int k);
std::int64_t degree_from_counts(int n, std::int64_t p, int k, const SymCounts& counts);

/// n = 2 closed form: k/2 - [k/2p] for even k, (k+1)/2 - [k/2p + 1/2] for odd.
std::int64_t degree_rank2(std::int64_t p, int k);

/// Closed form for prime n with p a primitive (n-1)-th root of unity mod n;
/// nullopt when the hypotheses (including k - n*tilde(k/n) >= 0) fail.
std::optional<std::int64_t> degree_prime_n(int n, std::int64_t p, int k);

/// dim (Sym^k Kl_n)^{I_inf}: a_k for odd n, 0 for odd k, b_k otherwise.
std::int64_t inertia_dimension_at_infinity(int n, int k, const SymCounts& counts);

/// det(1 - F_inf T) on the inertia invariants; requires n | q - 1.
IntPoly bad_factor_infinity(int n, std::int64_t p, std::int64_t q, int k, const SymCounts& counts);

/// m_k = 1 + [k/2p] for 4 | k, [k/2p] otherwise; n_k = [k/4p + 1/2].
struct MkNk {
    std::int64_t m_k = 0;
    std::int64_t n_k = 0;
};
MkNk mk_nk(std::int64_t p, int k);

/// P_k for n = 2, q = p odd: the product of the bad factors at 0 and infinity.
IntPoly p_k_poly(std::int64_t p, int k);

struct FunctionalEqData {
    BigRat c;
    int delta = 0;
    bool holds = false;
};

/// Exact check of M(T) = c T^delta M(1/(p^{k+1} T)) with c read off the top
/// coefficient; requires constant term 1.
FunctionalEqData functional_eq_check(const IntPoly& M, std::int64_t p, int k);

struct WeightHistogram {
    std::map<int, int> counts;                  // weight -> multiplicity
    std::vector<std::pair<int, double>> roots;  // (weight, |reciprocal root|)
};

/// Buckets every reciprocal root of P by weight w = 2 log_q |root| using
/// companion-matrix eigenvalues; throws CheckFailed when a root is not
/// within tol (relative) of an integer weight.
WeightHistogram weight_classify(const IntPoly& P, std::int64_t q, double tol = 1e-6);

/// Repeatedly strips exact factors (1 - q^i T), 0 <= i <= max_i, and returns
/// the extracted exponent multiset; P is replaced by the quotient.
std::vector<int> strip_q_power_roots(IntPoly& P, std::int64_t q, int max_i);

/// Everything the decomposition checks produce for one computed L.
struct Decomposition {
    bool bad_factor_applicable = false;  // n | q-1
    IntPoly bad_infinity;
    std::int64_t inertia_dim = 0;
    bool bad_degree_matches = false;
    bool bad_divides = false;

    bool n2_applicable = false;  // n = 2, q = p odd, k >= 1, L polynomial
    IntPoly p_k;
    IntPoly m_k;
    bool p_k_matches_bad_factor = false;  // P_k = (1-T) * bad factor at infinity
    bool l_equals_pk_mk = false;
    bool m_k_degree_matches = false;
    FunctionalEqData feq;
    bool feq_constant_squares = false;  // c^2 = p^{(k+1) delta}

    bool zero_factor_applicable = false;
    std::vector<int> zero_factor_exponents;  // q^i roots stripped after the inf factor
    bool zero_factor_in_bounds = false;
    IntPoly pure_part;

    bool weights_applicable = false;
    WeightHistogram weights;  // of m_k (n = 2) or of the stripped pure part
    bool weights_pure = false;
    int expected_weight = 0;
    std::string weight_error;
};

/// Divides L by the predicted bad factors and checks the n=2 decomposition,
/// functional equation, and weight purity, per applicability.
Decomposition verify_decomposition(const LPoly& L, int n, std::int64_t p, std::int64_t q, int k,
                                   const SymCounts& counts, double weight_tol = 1e-6);

}  // namespace klsym
