#include "qtaut/orbits.hpp"

#include <map>
#include <set>

#include "qtaut/errors.hpp"
#include "qtaut/linalg.hpp"

namespace qtaut {

namespace {

std::size_t choose2(std::size_t k) { return k < 2 ? 0 : k * (k - 1) / 2; }

Permutation power(const Permutation& p, std::size_t k) {
  Permutation r = identity_permutation(p.size());
  for (std::size_t t = 0; t < k; ++t) r = compose(p, r);
  return r;
}

}  // namespace

std::vector<SignedPair> signed_pairs(std::size_t n) {
  std::vector<SignedPair> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (int s : {-1, 1}) out.push_back({{i, j}, s});
  return out;
}

SignedPair perm_ext_action(const Permutation& pi, SignedPair x) {
  const std::size_t a = pi.at(x.pair.i);
  const std::size_t b = pi.at(x.pair.j);
  if (a < b) return {{a, b}, x.sign};
  return {{b, a}, -x.sign};
}

std::vector<std::vector<SignedPair>> signed_pair_orbits(const Permutation& pi) {
  validate_permutation(pi);
  std::vector<std::vector<SignedPair>> out;
  std::set<SignedPair> seen;
  for (const auto& start : signed_pairs(pi.size())) {
    if (seen.count(start)) continue;
    std::vector<SignedPair> orbit;
    for (SignedPair x = start; !seen.count(x); x = perm_ext_action(pi, x)) {
      seen.insert(x);
      orbit.push_back(x);
    }
    out.push_back(std::move(orbit));
  }
  return out;
}

std::size_t fix_rank(const Permutation& pi) {
  validate_permutation(pi);
  if (pi.size() < 3) throw InvalidInput("fix_rank: n must be at least 3");
  if (is_identity(pi)) throw InvalidInput("fix_rank: the identity permutation is excluded (it fixes all of C(n,2))");
  const IntMatrix w = ext_square(permutation_matrix(pi));
  return w.rows() - rank(w - IntMatrix::identity(w.rows()));
}

std::size_t fix_rank_by_orbits(const Permutation& pi) {
  std::size_t nonzero = 0;
  for (const auto& orbit : signed_pair_orbits(pi)) {
    std::map<PairIndex, int> sum;
    for (const auto& x : orbit) sum[x.pair] += x.sign;
    bool zero = true;
    for (const auto& [p, c] : sum) zero = zero && c == 0;
    if (!zero) ++nonzero;
  }
  return nonzero / 2;
}

std::size_t burnside_count(const Permutation& pi) {
  validate_permutation(pi);
  const std::size_t n = pi.size();
  const std::size_t ord = order(pi);
  std::size_t total = n * (n - 1);
  for (std::size_t k = 1; k < ord; ++k) total += 2 * choose2(fixed_points(power(pi, k)).size());
  if (total % ord != 0) throw ConsistencyError("Burnside sum not divisible by group order");
  return total / ord;
}

FixRankAuditReport fix_rank_audit(std::size_t n) {
  if (n < 3 || n > 7) throw InvalidInput("fix_rank_audit: n must be between 3 and 7");
  FixRankAuditReport report;
  report.n = n;
  report.bound = choose2(n - 1);
  const std::size_t expected_transposition_count = (n - 2) * (n - 3) + (2 * n - 3);
  for (const auto& pi : all_permutations(n)) {
    if (is_identity(pi)) continue;
    FixRankAuditEntry entry{pi, fix_rank(pi), burnside_count(pi), is_transposition(pi)};
    ++report.checked;
    report.max_fix_rank = std::max(report.max_fix_rank, entry.fix_rank);
    if (entry.fix_rank > report.bound || entry.fix_rank > entry.burnside / 2) report.violations.push_back(entry);
    if (entry.transposition && entry.fix_rank != report.bound) report.transposition_failures.push_back(entry);
    if (entry.transposition && entry.burnside != expected_transposition_count)
      report.transposition_count_mismatches.push_back(entry);
    if (entry.fix_rank == report.bound) report.equality_attainers.push_back(entry);
  }
  return report;
}

}  // namespace qtaut
