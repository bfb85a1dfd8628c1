#pragma once

#include <cstdint>
#include <vector>

#include "klsym/cyclotomic.hpp"
#include "klsym/finite_field.hpp"
#include "klsym/kloosterman.hpp"

namespace klsym {

/// A Frobenius orbit on F_{q^d}^* of size exactly d, represented by its
/// coefficient-lexicographically smallest member.
struct ClosedPoint {
    FieldPtr base;         // F_q
    int d = 0;             // degree over the base
    FieldPtr ext;          // F_{q^d}
    Coords rep;            // orbit representative
    std::int64_t rank = 0; // rep's rank in ext (element index - 1)
};

/// All closed points of G_m of degree <= max_degree over the base field.
std::vector<ClosedPoint> closed_points(const FieldPtr& base, int max_degree,
                                       std::int64_t field_budget = Field::kDefaultMaxQ);

/// Closed points of one exact degree, memoized per (base, d): enumeration is
/// deterministic, and big-field orbit scans are too costly to repeat per k.
const std::vector<ClosedPoint>& closed_points_of_degree(const FieldPtr& base, int d,
                                                        std::int64_t field_budget = Field::kDefaultMaxQ);

/// The local factor at a closed point: elementary symmetric functions
/// e_1..e_n of the Frobenius eigenvalues, recovered from the power sums
/// p_1..p_{n-1} (Kloosterman sums over extension fields) plus the
/// determinant twist e_n = q^{d n(n-1)/2}.
struct LocalFactor {
    ClosedPoint point;
    int n = 0;
    std::vector<CycInt> elementary;  // e_1..e_n
    std::vector<CycInt> psums;       // p_1..p_{n-1}

    /// Coefficients 1, -e_1, +e_2, ... of det(1 - F T).
    std::vector<CycInt> poly() const;
};

/// p_j = (-1)^{n-1} Kl_n(F_{q^{d j}}, embed(rep)) for j = 1..count.
std::vector<CycInt> power_sums(KlStore& store, const ClosedPoint& pt, int n, int count);

/// Newton recovery of e_1..e_{n-1} with mandatory integrality checks; when
/// cross_check is set, additionally computes p_n from the degree-dn field
/// and verifies the n-th Newton identity against the determinant value.
LocalFactor local_factor(KlStore& store, const ClosedPoint& pt, int n, bool cross_check = false);

/// p_m for m = 1..M via the characteristic-polynomial recurrence (Newton
/// seeding for m <= n); no Kloosterman sums beyond those already in lf.
std::vector<CycInt> extend_power_sums(const LocalFactor& lf, int M);

/// Trace of F^m on Sym^k: the complete homogeneous function h_k of the m-th
/// eigenvalue powers, via the h-recursion with exact division checks.
CycInt sym_trace(const LocalFactor& lf, int k, int m);

/// det(1 - F T, Sym^k) coefficients, degree binom(k+n-1, n-1); for report
/// and oracle use on small inputs only.
std::vector<CycInt> sym_local_factor(const LocalFactor& lf, int k);

/// Numeric check that every reciprocal root of det(1 - F T) has modulus
/// q^{d(n-1)/2}; throws CheckFailed otherwise.
void check_local_purity(const LocalFactor& lf, double tol = 1e-8);

}  // namespace klsym
