#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qtaut/int_matrix.hpp"

namespace qtaut {

/// Exact determinant by Bareiss fraction-free elimination.
Integer det(const IntMatrix& a);

/// Rank over Q by fraction-free elimination.
std::size_t rank(const IntMatrix& a);

/// U*M*V = S with U, V unimodular and S in Smith form.
struct SnfResult {
  IntMatrix U;
  IntMatrix S;
  IntMatrix V;

  std::size_t rank() const;
  /// The nonzero diagonal entries d_1 | d_2 | ... | d_r, all positive.
  IntVector invariant_factors() const;
};

/// Smith normal form with transforms. Total: accepts any shape, including zero.
SnfResult snf(const IntMatrix& m);

/// Basis of the integer kernel lattice {v : A v = 0}; cols - rank vectors.
/// Each vector is sign-normalized so its first nonzero entry is positive.
std::vector<IntVector> kernel_basis(const IntMatrix& a);

bool is_unimodular(const IntMatrix& a);

/// Exact inverse of a unimodular matrix. Throws InvalidInput otherwise.
IntMatrix inverse_unimodular(const IntMatrix& a);

/// Product of `steps` random elementary row operations applied to I_n.
/// Deterministic in `seed`.
IntMatrix random_unimodular(std::size_t n, std::size_t steps, std::uint64_t seed);

}  // namespace qtaut
