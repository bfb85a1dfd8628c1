#pragma once

// Exact cyclic convolution over Z via a number-theoretic transform modulo the
// 64-bit prime P = 2^64 - 2^32 + 1 (2^32 | P-1, generator 7). Used by the
// Kloosterman table builder for fields too large for the quadratic
// convolution; results are exact integers provided the true convolution
// coefficients stay below P, which callers must guarantee.

#include <cstdint>
#include <vector>

namespace klsym::ntt {

constexpr std::uint64_t kPrime = 0xffffffff00000001ULL;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b);
std::uint64_t add_mod(std::uint64_t a, std::uint64_t b);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t n);

/// In-place transform of length L = 2^k <= 2^26; values are raw residues.
void transform(std::vector<std::uint64_t>& a, bool inverse);

/// One operand of a 2D cyclic convolution over Z/m x Z/lanes: `lanes` arrays
/// of length m, zero-padded to L = bit_ceil(2m-1) and transformed.
struct Operand {
    std::uint64_t length = 0;  // L
    std::int64_t m = 0;
    std::vector<std::vector<std::uint64_t>> hat;  // lanes, each of size L
};

Operand prepare(const std::vector<std::vector<std::uint64_t>>& lanes, std::int64_t m, int jobs);

/// Pointwise multiply with lane-index addition mod lane count, inverse
/// transform, and fold back to length m. Entries of the result are the true
/// integer coefficients of the 2D cyclic convolution (callers guarantee they
/// are < P).
std::vector<std::vector<std::uint64_t>> multiply(const Operand& a, const Operand& b, int jobs);

}  // namespace klsym::ntt
