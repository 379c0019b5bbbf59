#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qtaut/exterior.hpp"
#include "qtaut/permutation.hpp"

namespace qtaut {

/// sign * e_i ^ e_j with i < j.
struct SignedPair {
  PairIndex pair;
  int sign = 1;

  friend bool operator==(const SignedPair&, const SignedPair&) = default;
  friend auto operator<=>(const SignedPair&, const SignedPair&) = default;
};

/// All 2*C(n,2) signed pairs, ordered by pair then sign (-1 before +1).
std::vector<SignedPair> signed_pairs(std::size_t n);

/// Image of sign * e_i ^ e_j under ext_square of the permutation matrix:
/// e_{pi(i)} ^ e_{pi(j)}, reoriented when pi(i) > pi(j).
SignedPair perm_ext_action(const Permutation& pi, SignedPair x);

/// Orbits of the cyclic group generated by pi on the signed pairs.
std::vector<std::vector<SignedPair>> signed_pair_orbits(const Permutation& pi);

/// Rank of the sublattice of the bivector module fixed by pi, computed as
/// C(n,2) - rank(ext_square(P) - I). Identity and n < 3 are rejected.
std::size_t fix_rank(const Permutation& pi);

/// Same rank, counted as (orbits with nonzero orbit sum) / 2.
std::size_t fix_rank_by_orbits(const Permutation& pi);

/// Orbit count of <pi> on signed pairs via Burnside's formula:
/// (n(n-1) + sum over non-identity powers phi of 2*C(|Fix(phi)|, 2)) / |<pi>|.
std::size_t burnside_count(const Permutation& pi);

struct FixRankAuditEntry {
  Permutation pi;
  std::size_t fix_rank = 0;
  std::size_t burnside = 0;
  bool transposition = false;
};

struct FixRankAuditReport {
  std::size_t n = 0;
  std::size_t bound = 0;  // C(n-1, 2)
  std::size_t checked = 0;
  std::size_t max_fix_rank = 0;
  std::vector<FixRankAuditEntry> violations;              // fix_rank > bound or > floor(N/2)
  std::vector<FixRankAuditEntry> transposition_failures;  // transpositions below the bound
  std::vector<FixRankAuditEntry> equality_attainers;      // fix_rank == bound
  std::vector<FixRankAuditEntry> transposition_count_mismatches;  // Burnside count != (n-2)(n-3)+(2n-3)

  bool ok() const {
    return violations.empty() && transposition_failures.empty() && transposition_count_mismatches.empty();
  }
};

/// Sweeps every non-identity permutation of S_n, 3 <= n <= 7.
FixRankAuditReport fix_rank_audit(std::size_t n);

}  // namespace qtaut
