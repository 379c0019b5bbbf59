#include "qtaut/nonscalar.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "qtaut/errors.hpp"
#include "qtaut/exterior.hpp"
#include "qtaut/linalg.hpp"

namespace qtaut {

namespace {

void check_membership_args(const IntMatrix& a, const MultiparamSpec& spec) {
  if (!spec.torsion_free) throw InvalidInput("membership test needs a torsion-free spec");
  if (a.rows() != spec.n || a.cols() != spec.n)
    throw DimensionError("automorphism must be " + std::to_string(spec.n) + "x" + std::to_string(spec.n));
  if (!is_unimodular(a)) throw InvalidInput("matrix is not in GL(n,Z)");
}

using Column = std::vector<long>;

long to_long(const Integer& x) {
  if (!x.fits_slong_p()) throw InvalidInput("search: form entry exceeds machine range");
  return x.get_si();
}

IntMatrix to_matrix(const std::vector<const Column*>& cols, std::size_t n) {
  IntMatrix a(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) a(r, c) = (*cols[c])[r];
  return a;
}

struct SearchContext {
  std::size_t n = 0;
  std::size_t l = 0;
  std::vector<std::vector<long>> forms;  // l forms, n*n row-major
  std::vector<Column> cands;
  std::vector<long> cand_images;  // per candidate, per form: E_s * v (n entries)
  std::uint64_t budget = 0;
  std::atomic<std::uint64_t> nodes{0};

  const long* image(std::size_t cand, std::size_t s) const { return &cand_images[(cand * l + s) * n]; }
  long target(std::size_t s, std::size_t i, std::size_t j) const { return forms[s][i * n + j]; }
};

class Worker {
 public:
  explicit Worker(SearchContext& ctx) : ctx_(ctx), chosen_(ctx.n) {}

  void run_top(std::size_t first) {
    chosen_[0] = first;
    count_node();
    descend(1);
    flush();
  }

  std::vector<IntMatrix> found;

 private:
  void count_node() {
    if (++pending_ < 4096) return;
    flush();
  }

  void flush() {
    const std::uint64_t total = ctx_.nodes.fetch_add(pending_) + pending_;
    pending_ = 0;
    if (total > ctx_.budget)
      throw ResourceError("search exceeded node budget of " + std::to_string(ctx_.budget) +
                          " partial assignments");
  }

  bool compatible(std::size_t k, std::size_t cand) const {
    const std::size_t n = ctx_.n;
    for (std::size_t i = 0; i < k; ++i) {
      const Column& ci = ctx_.cands[chosen_[i]];
      for (std::size_t s = 0; s < ctx_.l; ++s) {
        const long* ev = ctx_.image(cand, s);
        long dot = 0;
        for (std::size_t r = 0; r < n; ++r) dot += ci[r] * ev[r];
        if (dot != ctx_.target(s, i, k)) return false;
      }
    }
    return true;
  }

  void descend(std::size_t k) {
    const std::size_t n = ctx_.n;
    if (k == n) {
      std::vector<const Column*> cols;
      for (std::size_t c = 0; c < n; ++c) cols.push_back(&ctx_.cands[chosen_[c]]);
      IntMatrix a = to_matrix(cols, n);
      if (abs(det(a)) == 1) found.push_back(std::move(a));
      return;
    }
    for (std::size_t cand = 0; cand < ctx_.cands.size(); ++cand) {
      count_node();
      if (!compatible(k, cand)) continue;
      chosen_[k] = cand;
      descend(k + 1);
    }
  }

  SearchContext& ctx_;
  std::vector<std::size_t> chosen_;
  std::uint64_t pending_ = 0;
};

std::vector<Column> bounded_primitive_columns(std::size_t n, long bound) {
  std::vector<Column> out;
  Column v(n, -bound);
  for (;;) {
    long g = 0;
    for (long x : v) g = std::gcd(g, x);
    if (g == 1) out.push_back(v);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (v[pos] < bound) {
        ++v[pos];
        break;
      }
      v[pos] = -bound;
      if (pos == 0) return out;
    }
  }
}

using Key = std::vector<long>;

Key key_of(const IntMatrix& a) {
  Key k;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) k.push_back(a(r, c).get_si());
  return k;
}

bool closed_within_bound(const std::vector<IntMatrix>& found, std::size_t n, long bound) {
  std::set<Key> keys;
  std::vector<Key> mats;
  for (const auto& a : found) {
    mats.push_back(key_of(a));
    keys.insert(mats.back());
  }
  Key prod(n * n);
  for (const auto& x : mats)
    for (const auto& y : mats) {
      bool inside = true;
      for (std::size_t i = 0; i < n && inside; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          long acc = 0;
          for (std::size_t k = 0; k < n; ++k) acc += x[i * n + k] * y[k * n + j];
          if (acc > bound || acc < -bound) {
            inside = false;
            break;
          }
          prod[i * n + j] = acc;
        }
      if (inside && !keys.count(prod)) return false;
    }
  return true;
}

std::vector<IntMatrix> bounded_sl2(long bound) {
  std::vector<IntMatrix> out;
  for (long a = -bound; a <= bound; ++a)
    for (long b = -bound; b <= bound; ++b)
      for (long c = -bound; c <= bound; ++c)
        for (long d = -bound; d <= bound; ++d)
          if (a * d - b * c == 1) out.push_back(IntMatrix{{a, b}, {c, d}});
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> match_family(const std::vector<IntMatrix>& found, std::size_t n, long bound) {
  std::vector<Family> candidates{Family::pm_identity};
  if (n == 3) candidates.push_back(Family::n3_upper);
  if (n == 4) {
    candidates.push_back(Family::n4_f);
    candidates.push_back(Family::n4_phi);
  }
  for (Family f : candidates)
    if (family_members(f, bound, n) == found) return to_string(f);
  if (n == 2 && bounded_sl2(bound) == found) return std::string("SL(2,Z)");
  return std::nullopt;
}

}  // namespace

bool is_nonscalar_aut(const IntMatrix& a, const MultiparamSpec& spec) {
  check_membership_args(a, spec);
  const IntMatrix m = build_relations_matrix(spec).matrix;
  if (spec.n < 2) return true;
  return ext_square(a.transpose()) * m == m;
}

bool is_symplectic_all(const IntMatrix& a, const MultiparamSpec& spec) {
  check_membership_args(a, spec);
  const IntMatrix at = a.transpose();
  for (std::size_t s = 0; s < spec.l; ++s) {
    const IntMatrix e = form_matrix(spec, s);
    if (at * e * a != e) return false;
  }
  return true;
}

bool StabDescription::contains(const IntMatrix& b) const {
  if (b.rows() != N || b.cols() != N) throw DimensionError("stabilizer membership: expected an N x N matrix");
  if (!is_unimodular(b)) return false;
  const IntMatrix x = U * b * U_inv;
  for (std::size_t c = 0; c < r; ++c)
    for (std::size_t row = 0; row < N; ++row)
      if (x(row, c) != (row == c ? 1 : 0)) return false;
  return true;
}

StabDescription stab_description(const RelationsMatrix& m) {
  const SnfResult f = snf(m.matrix);
  return {m.matrix.rows(), f.rank(), f.U, inverse_unimodular(f.U)};
}

SearchReport search_auts(const MultiparamSpec& spec, const SearchOptions& options) {
  if (!spec.torsion_free) throw InvalidInput("search_auts: spec must be torsion-free");
  if (options.bound < 1) throw InvalidInput("search_auts: bound must be at least 1");
  spec.validate();
  const std::size_t n = spec.n;
  if (n < 1) throw InvalidInput("search_auts: n must be at least 1");

  SearchContext ctx;
  ctx.n = n;
  ctx.l = spec.l;
  ctx.budget = options.node_budget;
  long max_form = 0;
  for (std::size_t s = 0; s < spec.l; ++s) {
    const IntMatrix e = form_matrix(spec, s);
    std::vector<long> flat;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        flat.push_back(to_long(e(r, c)));
        max_form = std::max(max_form, std::abs(flat.back()));
      }
    ctx.forms.push_back(std::move(flat));
  }
  // |c_i^t E c_j| <= n^2 * bound^2 * max|E| must stay well inside long.
  const long double worst = static_cast<long double>(n * n) * options.bound * options.bound * (max_form + 1);
  if (worst > 1e17L) throw InvalidInput("search_auts: bound too large for exact machine arithmetic");

  const long double columns = std::pow(static_cast<long double>(2 * options.bound + 1), n);
  if (columns > static_cast<long double>(options.node_budget))
    throw ResourceError("search_auts: candidate column count exceeds node budget");
  ctx.cands = bounded_primitive_columns(n, options.bound);
  ctx.cand_images.resize(ctx.cands.size() * ctx.l * n);
  for (std::size_t c = 0; c < ctx.cands.size(); ++c)
    for (std::size_t s = 0; s < ctx.l; ++s)
      for (std::size_t r = 0; r < n; ++r) {
        long acc = 0;
        for (std::size_t k = 0; k < n; ++k) acc += ctx.forms[s][r * n + k] * ctx.cands[c][k];
        ctx.cand_images[(c * ctx.l + s) * n + r] = acc;
      }

  const unsigned workers = std::max(1u, options.workers);
  std::vector<Worker> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(ctx);

  std::vector<std::exception_ptr> errors(workers);
  auto job = [&](unsigned w) {
    try {
      for (std::size_t top = w; top < ctx.cands.size(); top += workers) pool[w].run_top(top);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    job(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(job, w);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SearchReport report;
  report.bound = options.bound;
  report.nodes = ctx.nodes.load();
  for (auto& w : pool)
    for (auto& a : w.found) report.found.push_back(std::move(a));
  std::sort(report.found.begin(), report.found.end());

  for (const auto& a : report.found)
    if (!is_nonscalar_aut(a, spec))
      throw ConsistencyError("search produced a matrix that fails the bivector membership test: " + a.to_string());

  const IntMatrix id = IntMatrix::identity(n);
  report.contains_identity = std::binary_search(report.found.begin(), report.found.end(), id);
  report.contains_minus_identity = std::binary_search(report.found.begin(), report.found.end(), -id);
  report.closed_under_product_within_bound = closed_within_bound(report.found, n, options.bound);
  report.family_match = match_family(report.found, n, options.bound);
  return report;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::n3_upper: return "n3_upper";
    case Family::n4_f: return "n4_f";
    case Family::n4_phi: return "n4_phi";
    case Family::pm_identity: return "pm_identity";
  }
  return "unknown";
}

std::size_t family_rank(Family f) {
  switch (f) {
    case Family::n3_upper: return 3;
    case Family::n4_f:
    case Family::n4_phi: return 4;
    case Family::pm_identity: return 0;
  }
  return 0;
}

IntMatrix family_member(Family f, long a, long b, int eps, FSign sign, std::size_t n) {
  if (eps != 1 && eps != -1) throw InvalidInput("family_member: eps must be +1 or -1");
  const std::size_t dim = f == Family::pm_identity ? n : family_rank(f);
  if (dim == 0) throw InvalidInput("family_member: pm_identity needs n >= 1");
  IntMatrix m = Integer(eps) * IntMatrix::identity(dim);
  switch (f) {
    case Family::n3_upper:
      m(0, 2) = a;
      m(1, 2) = b;
      break;
    case Family::n4_f:
      m(0, 3) = sign == FSign::minus_b ? -b : b;
      break;
    case Family::n4_phi:
      m(0, 1) = a;
      m(0, 2) = b;
      break;
    case Family::pm_identity:
      break;
  }
  return m;
}

std::vector<IntMatrix> family_members(Family f, long bound, std::size_t n, FSign sign) {
  const bool uses_a = f == Family::n3_upper || f == Family::n4_phi;
  const bool uses_b = f != Family::pm_identity;
  std::set<IntMatrix> out;
  for (int eps : {-1, 1})
    for (long a = uses_a ? -bound : 0; a <= (uses_a ? bound : 0); ++a)
      for (long b = uses_b ? -bound : 0; b <= (uses_b ? bound : 0); ++b)
        out.insert(family_member(f, a, b, eps, sign, n));
  return {out.begin(), out.end()};
}

bool verify_family(Family f, const MultiparamSpec& spec, long radius, FSign sign) {
  if (f != Family::pm_identity && family_rank(f) != spec.n)
    throw InvalidInput("verify_family: family " + to_string(f) + " needs n = " + std::to_string(family_rank(f)));
  for (const auto& a : family_members(f, radius, spec.n, sign))
    if (!is_nonscalar_aut(a, spec)) return false;
  return true;
}

std::optional<Z2Verdict> z2_case_check(const MultiparamSpec& spec) {
  if (!spec.torsion_free || spec.n < 5) return std::nullopt;
  const std::size_t n = spec.n;
  const IntMatrix m = build_relations_matrix(spec).matrix;
  std::vector<std::size_t> rest;
  for (std::size_t row = 0; row < m.rows(); ++row) {
    const PairIndex p = pair_at(n, row);
    bool zero = true;
    for (std::size_t s = 0; s < m.cols(); ++s) zero = zero && sgn(m(row, s)) == 0;
    const bool trivial_pair = p.i == 0 && p.j <= n - 3;  // q_12 .. q_1(n-2)
    if (trivial_pair != zero) return std::nullopt;
    if (!trivial_pair) rest.push_back(row);
  }
  // Remaining commutators independent: their rows form a basis of Z^l.
  if (rest.size() != spec.l) return std::nullopt;
  std::vector<std::size_t> all_cols(spec.l);
  std::iota(all_cols.begin(), all_cols.end(), 0);
  if (!is_unimodular(m.select(rest, all_cols))) return std::nullopt;
  return Z2Verdict{n, "Aut(Z^" + std::to_string(n) + ", lambda) = {I, -I}"};
}

}  // namespace qtaut
