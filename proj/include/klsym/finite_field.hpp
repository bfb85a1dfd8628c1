#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "klsym/bigint.hpp"
#include "klsym/errors.hpp"

namespace klsym {

/// Coordinates of a field element in the power basis 1, x, ..., x^{e-1},
/// each entry reduced into [0, p).
using Coords = std::vector<std::int32_t>;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// F_{p^e} as residues modulo a monic irreducible polynomial of degree e.
///
/// The modulus is the first monic irreducible in the scan order "constant
/// coefficient fastest-varying, coefficients ascending 0..p-1", so two
/// constructions of the same (p, e) are bit-identical. For e = 1 the modulus
/// is X. Immutable after construction; all operations are pure.
class Field : public std::enable_shared_from_this<Field> {
public:
    static constexpr std::int64_t kDefaultMaxQ = std::int64_t(1) << 26;

    std::int64_t p() const { return p_; }
    int e() const { return e_; }
    std::int64_t q() const { return q_; }

    /// Monic modulus, constant term first, length e+1.
    const std::vector<std::int32_t>& modulus() const { return modulus_; }

    Coords zero() const { return Coords(static_cast<std::size_t>(e_), 0); }
    Coords one() const { return from_int(1); }
    Coords from_int(std::int64_t c) const;
    /// The residue class of X.
    Coords gen() const;

    bool is_zero(const Coords& a) const;
    Coords add(const Coords& a, const Coords& b) const;
    Coords sub(const Coords& a, const Coords& b) const;
    Coords neg(const Coords& a) const;
    Coords mul(const Coords& a, const Coords& b) const;
    Coords mul_scalar(const Coords& a, std::int64_t c) const;
    Coords pow(const Coords& a, std::uint64_t n) const;
    Coords inv(const Coords& a) const;

    /// x -> x^p (the absolute Frobenius), as a precomputed linear map.
    Coords frobenius(const Coords& a) const;
    Coords frobenius_pow(const Coords& a, int j) const;

    /// Absolute trace down to F_p, as a residue in [0, p).
    std::int64_t trace_to_prime(const Coords& a) const;

    /// Rank in coefficient-lexicographic order with the constant coordinate
    /// most significant; 0 maps to 0, so nonzero elements have ranks 1..q-1.
    std::int64_t element_index(const Coords& a) const;
    Coords element_at(std::int64_t index) const;

    /// First element in coefficient-lexicographic order of multiplicative
    /// order q-1 (order certified against the prime factorization of q-1).
    const Coords& mult_generator() const { return generator_; }

    /// mult_generator^{(q-1)/n}; requires n | q-1, result has exact order n.
    Coords nth_root_of_unity(std::int64_t n) const;

    const std::vector<std::int64_t>& q_minus_1_prime_factors() const { return unit_factors_; }

private:
    friend FieldPtr get_field(std::int64_t p, int e, std::int64_t max_q);
    Field(std::int64_t p, int e);

    void select_modulus();
    void build_tables();
    void find_generator();

    std::int64_t p_ = 0;
    int e_ = 0;
    std::int64_t q_ = 0;
    std::vector<std::int32_t> modulus_;
    std::vector<Coords> reduction_;       // X^{e+i} mod modulus, i = 0..e-2
    std::vector<Coords> frobenius_cols_;  // (X^i)^p, i = 0..e-1
    std::vector<std::int64_t> basis_trace_;
    std::vector<std::int64_t> unit_factors_;
    Coords generator_;
};

/// Deterministic, memoized field construction. Throws InvalidArgument for
/// non-prime p and BudgetExceeded when p^e > max_q.
FieldPtr get_field(std::int64_t p, int e, std::int64_t max_q = Field::kDefaultMaxQ);

/// The ring embedding F_{p^d} -> F_{p^e} (d | e) determined by sending the
/// class of X to the coefficient-lexicographically first root of the small
/// modulus in the target. All observable quantities downstream are invariant
/// under the choice of root (they are fixed by Frobenius).
class Embedding {
public:
    Embedding(FieldPtr from, FieldPtr to);

    const FieldPtr& from() const { return from_; }
    const FieldPtr& to() const { return to_; }

    Coords apply(const Coords& a) const;
    /// Inverse on the image; nullopt when a is not in the subfield.
    std::optional<Coords> preimage(const Coords& a) const;

private:
    FieldPtr from_, to_;
    std::vector<Coords> basis_image_;  // beta^i, i = 0..d-1
    // Row echelon data for preimage solves.
    std::vector<std::vector<std::int32_t>> echelon_;
    std::vector<int> pivot_col_;
};

const Embedding& get_embedding(const FieldPtr& from, const FieldPtr& to);

/// Tr_{F_{p^e}/F_{p^d}}(x) expressed in F_{p^d}; requires d | e.
Coords rel_trace(const FieldPtr& big, const Coords& x, const FieldPtr& small);

}  // namespace klsym
