#include "qtaut/affine.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qtaut/errors.hpp"
#include "qtaut/nonscalar.hpp"
#include "qtaut/orbits.hpp"

namespace qtaut {

namespace {

void require_same_field(const AlphaMatrix& alpha, const QMatrix& q) {
  if (alpha.n() != q.n()) throw DimensionError("alpha and q have different sizes");
  if (!(alpha.field() == q.field())) throw InvalidInput("alpha and q live over different fields");
}

std::vector<PairIndex> upper_pairs(std::size_t n) {
  std::vector<PairIndex> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back({i, j});
  return out;
}

std::string pair_label(std::size_t a, std::size_t b) {
  return "q" + std::to_string(a + 1) + (a >= 9 || b >= 9 ? "," : "") + std::to_string(b + 1);
}

template <typename Condition>
bool all_conditions(const AlphaMatrix& alpha, const QMatrix& q, Condition cond) {
  require_same_field(alpha, q);
  const std::size_t n = q.n();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k; l < n; ++l)
          if (!cond(i, j, k, l)) return false;
  return true;
}

}  // namespace

QMatrix QMatrix::from_upper(std::size_t n, const Field& field, const std::map<PairIndex, FieldScalar>& upper) {
  std::vector<FieldScalar> entries(n * n, field.from_int(1));
  for (const auto& [p, v] : upper) {
    if (!(p.i < p.j && p.j < n)) throw InvalidInput("multiparameter pair out of range");
    if (!field.contains(v)) throw InvalidInput("multiparameter not in field " + field.name());
    if (v.is_zero()) throw InvalidInput("multiparameters must be nonzero");
    entries[p.i * n + p.j] = v;
    entries[p.j * n + p.i] = v.inverse();
  }
  return from_entries(n, field, std::move(entries));
}

QMatrix QMatrix::from_entries(std::size_t n, const Field& field, std::vector<FieldScalar> entries) {
  if (entries.size() != n * n) throw DimensionError("q matrix needs n*n entries");
  for (const auto& x : entries)
    if (!field.contains(x)) throw InvalidInput("q entry not in field " + field.name());
  for (std::size_t i = 0; i < n; ++i) {
    if (!entries[i * n + i].is_one()) throw InvalidInput("q must have q_ii = 1");
    for (std::size_t j = i + 1; j < n; ++j)
      if (!(entries[i * n + j] * entries[j * n + i]).is_one())
        throw InvalidInput("q must satisfy q_ji = q_ij^-1 at " + pair_label(i, j));
  }
  QMatrix q;
  q.n_ = n;
  q.field_ = field;
  q.entries_ = std::move(entries);
  return q;
}

FieldScalar determinant(std::size_t n, const std::vector<FieldScalar>& entries) {
  if (entries.size() != n * n) throw DimensionError("determinant: need n*n entries");
  if (n == 0) return FieldScalar::rational(1);
  const std::uint64_t p = entries[0].prime();
  const Field field{p};
  std::vector<FieldScalar> m = entries;
  FieldScalar d = field.from_int(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv * n + c].is_zero()) ++piv;
    if (piv == n) return field.from_int(0);
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m[piv * n + k], m[c * n + k]);
      d = -d;
    }
    d = d * m[c * n + c];
    const FieldScalar inv = m[c * n + c].inverse();
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r * n + c].is_zero()) continue;
      const FieldScalar f = m[r * n + c] * inv;
      for (std::size_t k = c; k < n; ++k) m[r * n + k] = m[r * n + k] - f * m[c * n + k];
    }
  }
  return d;
}

AlphaMatrix AlphaMatrix::make(std::size_t n, const Field& field, std::vector<FieldScalar> entries) {
  if (entries.size() != n * n) throw DimensionError("alpha needs n*n entries");
  for (const auto& x : entries)
    if (!field.contains(x)) throw InvalidInput("alpha entry not in field " + field.name());
  if (determinant(n, entries).is_zero()) throw InvalidInput("alpha is singular");
  AlphaMatrix a;
  a.n_ = n;
  a.field_ = field;
  a.entries_ = std::move(entries);
  return a;
}

bool AlphaMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j && !at(i, j).is_zero()) return false;
  return true;
}

std::string AlphaMatrix::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < n_; ++i) {
    if (i) out << "; ";
    for (std::size_t j = 0; j < n_; ++j) out << (j ? " " : "") << at(i, j).to_string();
  }
  out << ']';
  return out.str();
}

bool operator==(const AlphaMatrix& a, const AlphaMatrix& b) {
  if (a.n_ != b.n_ || !(a.field_ == b.field_)) return false;
  for (std::size_t k = 0; k < a.entries_.size(); ++k)
    if (!(a.entries_[k] == b.entries_[k])) return false;
  return true;
}

bool is_linear_aut(const AlphaMatrix& a, const QMatrix& q) {
  const FieldScalar one = q.field().from_int(1);
  return all_conditions(a, q, [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return a.at(i, k) * a.at(j, l) * (one - q.at(i, j) * q.at(l, k)) ==
           a.at(i, l) * a.at(j, k) * (q.at(i, j) - q.at(l, k));
  });
}

bool is_linear_aut_rewritten(const AlphaMatrix& a, const QMatrix& q) {
  const FieldScalar one = q.field().from_int(1);
  return all_conditions(a, q, [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return a.at(i, k) * a.at(j, l) * (q.at(k, l) - q.at(i, j)) ==
           a.at(i, l) * a.at(j, k) * (q.at(k, l) * q.at(i, j) - one);
  });
}

std::optional<MonomialDecomposition> as_monomial(const AlphaMatrix& alpha) {
  const std::size_t n = alpha.n();
  MonomialDecomposition out{Permutation(n), {}};
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n; ++j) {
      if (alpha.at(i, j).is_zero()) continue;
      if (col) return std::nullopt;
      col = j;
    }
    if (!col || used[*col]) return std::nullopt;
    used[*col] = true;
    out.perm[i] = *col;
    out.scalars.push_back(alpha.at(i, *col));
  }
  return out;
}

MonomialDecomposition monomial_structure(const AlphaMatrix& alpha, const QMatrix& q) {
  require_same_field(alpha, q);
  if (q.field().characteristic() == 2) throw InvalidInput("monomial_structure: characteristic 2 is not supported");
  for (const auto& p : upper_pairs(q.n()))
    if (q.at(p.i, p.j).is_one())
      throw InvalidInput("monomial_structure: requires q_ij != 1 for all i < j, but " + pair_label(p.i, p.j) + " = 1");
  if (!is_linear_aut(alpha, q)) throw InvalidInput("monomial_structure: alpha is not a linear automorphism");
  auto m = as_monomial(alpha);
  if (!m) throw ConsistencyError("linear automorphism " + alpha.to_string() + " is not monomial");
  return *m;
}

bool is_admissible_perm(const Permutation& pi, const QMatrix& q) {
  validate_permutation(pi);
  if (pi.size() != q.n()) throw DimensionError("permutation degree differs from n");
  const std::size_t n = q.n();
  const Field& field = q.field();
  // P e_i = e_{pi(i)}: P[pi(i)][i] = 1. Only nonzero terms are accumulated.
  const IntMatrix p = permutation_matrix(pi);
  std::vector<FieldScalar> pq(n * n, field.from_int(0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(p(r, k)) == 0) continue;
      for (std::size_t c = 0; c < n; ++c) pq[r * n + c] = pq[r * n + c] + q.at(k, c);
    }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      FieldScalar acc = field.from_int(0);
      for (std::size_t k = 0; k < n; ++k)
        if (sgn(p(c, k)) != 0) acc = acc + pq[r * n + k];  // (P^t)[k][c] = P[c][k]
      if (!(acc == q.at(r, c))) return false;
    }
  return true;
}

std::vector<Permutation> admissible_perms(const QMatrix& q) {
  if (q.n() > 8) throw InvalidInput("admissible_perms: n > 8 is too large for enumeration");
  std::vector<Permutation> out;
  for (const auto& pi : all_permutations(q.n()))
    if (is_admissible_perm(pi, q)) out.push_back(pi);
  const std::set<Permutation> group(out.begin(), out.end());
  for (const auto& a : out)
    for (const auto& b : out)
      if (!group.count(compose(a, b))) throw ConsistencyError("admissible permutations not closed under composition");
  return out;
}

bool ForcedEquality::holds(const QMatrix& q) const {
  for (std::size_t k = 1; k < pairs.size(); ++k)
    if (!(q.at(pairs[k].first, pairs[k].second) == q.at(pairs[0].first, pairs[0].second))) return false;
  return true;
}

std::string ForcedEquality::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (k) out += " = ";
    out += pair_label(pairs[k].first, pairs[k].second);
  }
  return out;
}

std::vector<ForcedEquality> cycle_constraints(const Permutation& pi) {
  validate_permutation(pi);
  std::vector<ForcedEquality> out;
  const auto cs = cycles(pi);
  for (const auto& c : cs) {
    ForcedEquality eq;
    const std::size_t r = c.size();
    eq.pairs.emplace_back(c[r - 1], c[0]);
    for (std::size_t t = 0; t + 1 < r; ++t) eq.pairs.emplace_back(c[t], c[t + 1]);
    out.push_back(std::move(eq));
  }
  for (std::size_t k : fixed_points(pi))
    for (const auto& c : cs) {
      ForcedEquality eq;
      for (std::size_t j : c) eq.pairs.emplace_back(j, k);
      out.push_back(std::move(eq));
    }
  return out;
}

std::optional<std::pair<PairIndex, PairIndex>> has_inverse_pair(const QMatrix& q) {
  const auto pairs = upper_pairs(q.n());
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = a; b < pairs.size(); ++b)
      if ((q.at(pairs[a].i, pairs[a].j) * q.at(pairs[b].i, pairs[b].j)).is_one())
        return std::make_pair(pairs[a], pairs[b]);
  return std::nullopt;
}

TorusCriterionReport check_torus_criterion(const QMatrix& q) {
  TorusCriterionReport report;
  if (q.field().characteristic() == 2) {
    report.reason = "characteristic 2 is excluded";
    return report;
  }
  if (q.n() < 3) {
    report.reason = "n >= 3 is required";
    return report;
  }
  report.applicable = true;
  const auto pairs = upper_pairs(q.n());
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      const FieldScalar& x = q.at(pairs[a].i, pairs[a].j);
      const FieldScalar& y = q.at(pairs[b].i, pairs[b].j);
      if (!report.distinct_witness && x == y) report.distinct_witness = std::make_pair(pairs[a], pairs[b]);
      if (!report.product_witness && (x * y).is_one()) report.product_witness = std::make_pair(pairs[a], pairs[b]);
    }
  report.distinct_values = !report.distinct_witness;
  report.no_inverse_products = !report.product_witness;
  if (report.distinct_values && report.no_inverse_products)
    report.verdict = "linear automorphism group = diagonal torus (F*)^" + std::to_string(q.n());
  return report;
}

std::optional<std::uint64_t> gl_order(std::size_t n, std::uint64_t p) {
  unsigned __int128 pn = 1;
  for (std::size_t k = 0; k < n; ++k) {
    pn *= p;
    if (pn > UINT64_MAX) return std::nullopt;
  }
  unsigned __int128 order = 1, pi = 1;
  for (std::size_t i = 0; i < n; ++i) {
    order *= pn - pi;
    if (order > UINT64_MAX) return std::nullopt;
    pi *= p;
  }
  return static_cast<std::uint64_t>(order);
}

std::vector<AlphaMatrix> brute_force_linear_auts(const QMatrix& q, std::uint64_t budget) {
  const Field& field = q.field();
  if (field.is_rational()) throw InvalidInput("brute_force_linear_auts: needs a prime field");
  const std::size_t n = q.n();
  const std::uint64_t p = field.prime;
  const auto order = gl_order(n, p);
  if (!order || *order > budget)
    throw ResourceError("brute_force_linear_auts: |GL(" + std::to_string(n) + "," + std::to_string(p) +
                        ")| exceeds budget " + std::to_string(budget));
  if (p > 1'000'000) throw ResourceError("brute_force_linear_auts: prime too large for enumeration");

  // Residue-level copy of the defining condition; results are re-checked
  // through is_linear_aut before being returned.
  const long m = static_cast<long>(p);
  std::vector<long> qr(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) qr[i * n + j] = static_cast<long>(q.at(i, j).residue());
  struct Instance {
    std::size_t i, j, k, l;
    long lhs_coeff, rhs_coeff;
  };
  std::vector<Instance> conds;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k; l < n; ++l) {
          const long qij = qr[i * n + j], qlk = qr[l * n + k];
          conds.push_back({i, j, k, l, ((1 - qij * qlk) % m + m) % m, ((qij - qlk) % m + m) % m});
        }

  auto det_nonzero = [&](std::vector<long> a) {
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (piv < n && a[piv * n + c] == 0) ++piv;
      if (piv == n) return false;
      if (piv != c)
        for (std::size_t k = 0; k < n; ++k) std::swap(a[piv * n + k], a[c * n + k]);
      const long inv = static_cast<long>(field.from_int(a[c * n + c]).inverse().residue());
      for (std::size_t r = c + 1; r < n; ++r) {
        if (a[r * n + c] == 0) continue;
        const long f = a[r * n + c] * inv % m;
        for (std::size_t k = c; k < n; ++k) a[r * n + k] = ((a[r * n + k] - f * a[c * n + k]) % m + m) % m;
      }
    }
    return true;
  };

  std::vector<AlphaMatrix> out;
  std::vector<long> a(n * n, 0);
  for (;;) {
    bool ok = true;
    for (const auto& c : conds) {
      const long lhs = a[c.i * n + c.k] * a[c.j * n + c.l] % m * c.lhs_coeff % m;
      const long rhs = a[c.i * n + c.l] * a[c.j * n + c.k] % m * c.rhs_coeff % m;
      if (lhs != rhs) {
        ok = false;
        break;
      }
    }
    if (ok && det_nonzero(a)) {
      std::vector<FieldScalar> entries;
      for (long x : a) entries.push_back(field.from_int(x));
      AlphaMatrix alpha = AlphaMatrix::make(n, field, std::move(entries));
      if (!is_linear_aut(alpha, q)) throw ConsistencyError("residue-level check disagrees with is_linear_aut");
      out.push_back(std::move(alpha));
    }
    std::size_t pos = n * n;
    while (pos > 0) {
      --pos;
      if (++a[pos] < m) break;
      a[pos] = 0;
      if (pos == 0) return out;
    }
    if (n == 0) return out;
  }
}

bool RankBoundReport::consistent() const {
  if (!bound_met) return true;
  return center_trivial && high_fix_rank.empty() && permutation_automorphisms.empty();
}

RankBoundReport rank_bound_verdict(const MultiparamSpec& spec) {
  if (!spec.torsion_free) throw InvalidInput("rank_bound_verdict: spec must be torsion-free");
  RankBoundReport report;
  const std::size_t n = spec.n;
  report.n = n;
  report.lambda_rank = lambda_rank(spec);
  report.threshold = (n >= 2 ? pair_count(n - 1) : 0) + 1;
  report.bound_met = report.lambda_rank >= report.threshold;
  report.center_trivial = center_lattice(spec).empty();
  if (n >= 3 && n <= 7) {
    report.permutation_sweep_done = true;
    for (const auto& pi : all_permutations(n)) {
      if (is_identity(pi)) continue;
      if (fix_rank(pi) >= report.threshold) report.high_fix_rank.push_back(pi);
      if (is_nonscalar_aut(permutation_matrix(pi), spec)) report.permutation_automorphisms.push_back(pi);
    }
  }
  if (report.bound_met) report.verdict = "Aut(O_q(F^" + std::to_string(n) + ")) = (F*)^" + std::to_string(n) + " (torus)";
  return report;
}

}  // namespace qtaut
