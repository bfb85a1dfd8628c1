#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "klsym/finite_field.hpp"

namespace klsym {

/// An n-part composition (j_0, ..., j_{n-1}) of k.
using SymTuple = std::vector<int>;

/// One sigma-orbit of S_k(n,p): canonical representative (lexicographically
/// smallest rotation), orbit size, and the sign data of its v-vector.
struct SymOrbit {
    SymTuple rep;
    int size = 0;
    bool v_nonzero = false;
    bool weighted_odd = false;  // parity of j_1 + 2 j_2 + ... + (n-1) j_{n-1}
};

struct SymCounts {
    std::int64_t d = 0;  // |S_k(n,p)|
    std::int64_t a = 0;  // number of sigma-orbits
    std::int64_t b = 0;  // orbits with v_j != 0
    std::int64_t c = 0;  // orbits with v_j != 0 and odd weighted sum
    std::vector<SymOrbit> orbits;
};

/// Tuples of S_k(n,p): compositions of k whose zeta-weighted sum vanishes in
/// F_p(zeta_n), zeta a fixed primitive n-th root of unity. Requires (n,p)=1.
/// `zeta_exponent` picks zeta = (default primitive root)^t with gcd(t,n)=1
/// and exists to verify that the count does not depend on the choice.
std::vector<SymTuple> s_k_set(int n, std::int64_t p, int k, std::int64_t zeta_exponent = 1);

std::int64_t d_k(int n, std::int64_t p, int k);

/// The signed vector v_j as a map from monomial (tuple) to accumulated
/// coefficient; for odd n every sign is +1.
std::map<SymTuple, std::int64_t> v_vector(const SymTuple& rep, int n, int k);

/// Full orbit/count data. The v-derived flags are evaluated on every orbit
/// member and checked for representative-independence.
SymCounts sym_counts(int n, std::int64_t p, int k);

}  // namespace klsym
