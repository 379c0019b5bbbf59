#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qtaut/int_matrix.hpp"

namespace qtaut {

/// A pair i < j of 0-based indices into {0..n-1}. Pairs are ordered
/// lexicographically; `position` is the 0-based rank in that order.
struct PairIndex {
  std::size_t i = 0;
  std::size_t j = 0;

  friend bool operator==(const PairIndex&, const PairIndex&) = default;
  friend auto operator<=>(const PairIndex&, const PairIndex&) = default;
};

std::size_t pair_count(std::size_t n);
std::size_t pair_position(std::size_t n, PairIndex p);
PairIndex pair_at(std::size_t n, std::size_t position);
/// Inverse of pair_count; throws InvalidInput if `count` is not C(n,2).
std::size_t rank_for_pair_count(std::size_t count);

/// Element of the second exterior power of Z^n in the e_i ^ e_j basis.
struct Bivector {
  std::size_t n = 0;
  IntVector coords;  // length C(n,2), lexicographic pair order

  static Bivector zero(std::size_t n);
  static Bivector basis(std::size_t n, PairIndex p);
  bool is_zero() const;
  friend bool operator==(const Bivector&, const Bivector&) = default;
};

/// a ^ b for vectors of equal length.
Bivector wedge(const IntVector& a, const IntVector& b);
Bivector operator+(const Bivector& a, const Bivector& b);

/// C(n,2) x C(n,2) matrix of 2x2 minors: entry ((ij),(kl)) uses rows i,j
/// and columns k,l of A. Column (kl) is the bivector (A e_k) ^ (A e_l).
IntMatrix ext_square(const IntMatrix& a);

IntMatrix bivector_to_antisym(const Bivector& w);
/// Reads the strict upper triangle; throws unless the matrix is antisymmetric.
Bivector antisym_to_bivector(const IntMatrix& w);

/// Rank-2 test over Q. Throws InvalidInput on the zero bivector.
bool is_decomposable(const Bivector& w);

/// All quadratic Plücker relations x_ij x_kl - x_ik x_jl + x_il x_jk for
/// i<j<k<l, in lexicographic order of (i,j,k,l).
IntVector plucker_relations(const Bivector& w);
bool plucker_relations_vanish(const Bivector& w);

/// x12 x34 - x13 x24 + x14 x23 (n = 4 only).
Integer plucker_form_n4(const Bivector& w);

/// Gram matrix of the polarization of plucker_form_n4: w^t P w = 2 q(w).
IntMatrix polarization_matrix_n4();

enum class IsometrySign { plus, minus, no };
const char* to_string(IsometrySign s);

/// plus iff B^t P B = P, minus iff B^t P B = -P. B must be 6x6.
IsometrySign is_plucker_isometry(const IntMatrix& b);

/// Recovers A in GL(n,Z) with ext_square(A) == B, up to the inherent sign
/// ambiguity; the returned representative has its first nonzero entry (in
/// row-major order) positive. Empty when no integral exterior root exists.
///
/// Requires N = C(n,2) with n >= 3 and B unimodular.
std::optional<IntMatrix> ext_root(const IntMatrix& b);

}  // namespace qtaut
