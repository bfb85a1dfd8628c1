#pragma once

#include <cstdint>
#include <vector>

#include "klsym/kloosterman.hpp"
#include "klsym/local_factors.hpp"
#include "klsym/poly.hpp"
#include "klsym/symcounts.hpp"

namespace klsym {

enum class ComputeMode { guarded, trust_degree };

/// Dirichlet coefficients S_m = sum_{d|m} sum_{deg-d points} d * sym_trace,
/// m = 1..N, each certified to be a rational integer.
std::vector<BigInt> dirichlet_sums(KlStore& store, int n, int k, const FieldPtr& base, int N);

/// Same contract, generic CycInt path only; oracle for the fast kernel.
std::vector<BigInt> dirichlet_sums_reference(KlStore& store, int n, int k, const FieldPtr& base, int N);

/// Partial Euler product over points of degree <= N, expanded to order N.
/// An assembly route independent of exp(sum S_m T^m / m).
RatSeries euler_product_series(KlStore& store, int n, int k, const FieldPtr& base, int N);

struct ComputeOptions {
    ComputeMode mode = ComputeMode::guarded;
    int guard = 3;
    int den_bound = 2;
};

struct ComputeResult {
    LPoly L;
    std::vector<BigInt> sums;
    SymCounts counts;
    std::int64_t degree_predicted = 0;
    int truncation = 0;
    ComputeOptions options;
};

/// Full pipeline: predicted degree from the count formula, Dirichlet sums,
/// exp-series, and either guarded reconstruction or the degree-trusted
/// truncation.
ComputeResult compute_L(KlStore& store, int n, int k, const FieldPtr& base,
                        const ComputeOptions& options = {});

/// Coefficient-wise congruence mod p^m (polynomials padded with zeros).
bool congruence_check(const LPoly& a, const LPoly& b, std::int64_t p, int m);

}  // namespace klsym
