#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtaut/exterior.hpp"
#include "qtaut/field.hpp"
#include "qtaut/lambda_model.hpp"
#include "qtaut/permutation.hpp"

namespace qtaut {

/// Multiplicatively antisymmetric matrix of multiparameters q_ij.
class QMatrix {
 public:
  /// Builds q from its strict upper triangle; omitted pairs are 1.
  static QMatrix from_upper(std::size_t n, const Field& field, const std::map<PairIndex, FieldScalar>& upper);
  /// Full matrix; validated for q_ii = 1 and q_ji = q_ij^-1.
  static QMatrix from_entries(std::size_t n, const Field& field, std::vector<FieldScalar> entries);

  std::size_t n() const { return n_; }
  const Field& field() const { return field_; }
  const FieldScalar& at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  Field field_;
  std::vector<FieldScalar> entries_;
};

/// Invertible n x n matrix over a field; row i holds the coefficients of
/// sigma(X_i) = sum_j alpha_ij X_j.
class AlphaMatrix {
 public:
  /// Throws InvalidInput when the determinant vanishes.
  static AlphaMatrix make(std::size_t n, const Field& field, std::vector<FieldScalar> entries);

  std::size_t n() const { return n_; }
  const Field& field() const { return field_; }
  const FieldScalar& at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  bool is_diagonal() const;
  std::string to_string() const;

  friend bool operator==(const AlphaMatrix& a, const AlphaMatrix& b);

 private:
  std::size_t n_ = 0;
  Field field_;
  std::vector<FieldScalar> entries_;
};

FieldScalar determinant(std::size_t n, const std::vector<FieldScalar>& entries);

/// alpha_ik alpha_jl (1 - q_ij q_lk) == alpha_il alpha_jk (q_ij - q_lk)
/// for all i < j and k <= l.
bool is_linear_aut(const AlphaMatrix& alpha, const QMatrix& q);

/// The equivalent form alpha_ik alpha_jl (q_kl - q_ij) == alpha_il alpha_jk (q_kl q_ij - 1).
bool is_linear_aut_rewritten(const AlphaMatrix& alpha, const QMatrix& q);

/// sigma(X_i) = scalars[i] * X_{perm[i]}.
struct MonomialDecomposition {
  Permutation perm;
  std::vector<FieldScalar> scalars;
};

/// Structural split into permutation and diagonal; empty if alpha is not monomial.
std::optional<MonomialDecomposition> as_monomial(const AlphaMatrix& alpha);

/// Monomial decomposition of a linear automorphism when char != 2 and no
/// q_ij (i<j) equals 1. Precondition failures throw InvalidInput; a
/// non-monomial automorphism throws ConsistencyError.
MonomialDecomposition monomial_structure(const AlphaMatrix& alpha, const QMatrix& q);

/// p q p^t == q for the permutation matrix of pi, evaluated as a matrix identity.
bool is_admissible_perm(const Permutation& pi, const QMatrix& q);

/// The subgroup of admissible permutations (n <= 8), lexicographic order.
std::vector<Permutation> admissible_perms(const QMatrix& q);

/// A chain of ordered pairs (a,b) whose entries q_ab must all coincide.
struct ForcedEquality {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  bool holds(const QMatrix& q) const;
  std::string to_string() const;  // 1-based, e.g. "q31 = q12 = q23"
};

std::vector<ForcedEquality> cycle_constraints(const Permutation& pi);

/// First (lexicographic) pair of pairs (i<j), (k<l), (i,j) <= (k,l), with
/// q_ij q_kl == 1.
std::optional<std::pair<PairIndex, PairIndex>> has_inverse_pair(const QMatrix& q);

struct TorusCriterionReport {
  bool applicable = false;  // char != 2 and n >= 3
  std::string reason;
  bool distinct_values = false;  // (i)  q_ij != q_kl for distinct pairs
  bool no_inverse_products = false;  // (ii) q_ij q_kl != 1 for distinct pairs
  std::optional<std::pair<PairIndex, PairIndex>> distinct_witness;
  std::optional<std::pair<PairIndex, PairIndex>> product_witness;
  std::optional<std::string> verdict;
};

TorusCriterionReport check_torus_criterion(const QMatrix& q);

/// |GL(n, p)|, or nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> gl_order(std::size_t n, std::uint64_t p);

/// Every invertible matrix over F_p passing is_linear_aut, in lexicographic
/// order of residues. Throws ResourceError if |GL(n,p)| > budget.
std::vector<AlphaMatrix> brute_force_linear_auts(const QMatrix& q, std::uint64_t budget);

struct RankBoundReport {
  std::size_t n = 0;
  std::size_t lambda_rank = 0;
  std::size_t threshold = 0;  // C(n-1,2) + 1
  bool bound_met = false;
  bool center_trivial = false;
  bool permutation_sweep_done = false;            // needs 3 <= n <= 7
  std::vector<Permutation> high_fix_rank;         // non-identity pi with fix_rank >= threshold
  std::vector<Permutation> permutation_automorphisms;  // non-identity pi whose matrix preserves lambda
  std::optional<std::string> verdict;

  /// Supporting checks agree with the verdict.
  bool consistent() const;
};

RankBoundReport rank_bound_verdict(const MultiparamSpec& spec);

}  // namespace qtaut
