#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtaut/int_matrix.hpp"
#include "qtaut/lambda_model.hpp"

namespace qtaut {

// Automorphisms act on column vectors: A is in Aut(Z^n, lambda) iff
// lambda(A m, A m') = lambda(m, m') for all m, m'.

/// Bivector route: ext_square(A^t) * M == M.
bool is_nonscalar_aut(const IntMatrix& a, const MultiparamSpec& spec);

/// Symplectic route: A^t E_s A == E_s for every exponent form E_s.
bool is_symplectic_all(const IntMatrix& a, const MultiparamSpec& spec);

/// stab_{GL(N,Z)}(M) = U^-1 { X : first r columns of X are those of I_N } U,
/// where U M V is the Smith form of M and r its rank.
struct StabDescription {
  std::size_t N = 0;
  std::size_t r = 0;
  IntMatrix U;
  IntMatrix U_inv;

  /// Membership through the conjugated criterion (never multiplies by M).
  bool contains(const IntMatrix& b) const;
};

StabDescription stab_description(const RelationsMatrix& m);

struct SearchOptions {
  long bound = 1;
  std::uint64_t node_budget = 100'000'000;
  unsigned workers = 1;
};

struct SearchReport {
  long bound = 0;
  std::vector<IntMatrix> found;  // sorted lexicographically by entries
  bool closed_under_product_within_bound = false;
  bool contains_identity = false;
  bool contains_minus_identity = false;
  std::optional<std::string> family_match;
  std::uint64_t nodes = 0;
};

/// Every A in GL(n,Z) with max |entry| <= bound that preserves lambda.
/// Column-by-column backtracking with pairwise form pruning. Throws
/// ResourceError once more than `node_budget` partial assignments are tried.
SearchReport search_auts(const MultiparamSpec& spec, const SearchOptions& options);

/// The closed-form families displayed for the worked examples.
enum class Family { n3_upper, n4_f, n4_phi, pm_identity };

/// Sign of the (1,4) entry of f_{b,eps}: `minus_b` is the family as stated
/// (entry -b), `plus_b` the variant printed at the end of its derivation.
enum class FSign { minus_b, plus_b };

std::string to_string(Family f);
std::size_t family_rank(Family f);

/// n3_upper: [[e,0,a],[0,e,b],[0,0,e]];  n4_f: e*I with (1,4) entry -/+b;
/// n4_phi: e*I with (1,2)=a, (1,3)=b;  pm_identity: e*I_n.
IntMatrix family_member(Family f, long a, long b, int eps, FSign sign = FSign::minus_b, std::size_t n = 0);

/// All members with parameters in [-bound, bound], sorted.
std::vector<IntMatrix> family_members(Family f, long bound, std::size_t n = 0, FSign sign = FSign::minus_b);

/// True iff every member with parameters in [-radius, radius] passes
/// is_nonscalar_aut for `spec`. Throws InvalidInput on a rank mismatch.
bool verify_family(Family f, const MultiparamSpec& spec, long radius, FSign sign = FSign::minus_b);

/// Result of matching the hypothesis pattern of the Z/2 case: for n >= 5,
/// q_12 = ... = q_1(n-2) = 1 and the remaining commutators independent.
struct Z2Verdict {
  std::size_t n = 0;
  std::string statement;  // "Aut(Z^n, lambda) = {I, -I}"
};

std::optional<Z2Verdict> z2_case_check(const MultiparamSpec& spec);

}  // namespace qtaut
