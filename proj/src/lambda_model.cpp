#include "qtaut/lambda_model.hpp"

#include <set>

#include "qtaut/errors.hpp"
#include "qtaut/linalg.hpp"

namespace qtaut {

namespace {

Integer residue_of(const ExponentVector& v) {
  return v.torsion ? v.torsion->residue : Integer(0);
}

void normalize_residue(TorsionPart& t) {
  mpz_fdiv_r(t.residue.get_mpz_t(), t.residue.get_mpz_t(), t.order.get_mpz_t());
}

void require_torsion_free(const MultiparamSpec& spec, const char* what) {
  if (!spec.torsion_free) throw InvalidInput(std::string(what) + ": spec has torsion; apply torsion_reduce first");
}

// Exponent of prime p in x (x > 0); divides it out.
long strip_prime(Integer& x, unsigned long p) {
  long e = 0;
  while (mpz_divisible_ui_p(x.get_mpz_t(), p)) {
    mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), p);
    ++e;
  }
  return e;
}

void collect_primes(Integer x, std::set<Integer>& primes) {
  x = abs(x);
  for (unsigned long p = 2; Integer(p) * p <= x; ++p)
    if (strip_prime(x, p) > 0) primes.insert(Integer(p));
  if (x > 1) primes.insert(x);
}

long exponent_in(Integer x, const Integer& p) {
  x = abs(x);
  long e = 0;
  while (mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
    ++e;
  }
  return e;
}

Rational rational_pow(const Rational& base, const Integer& e) {
  if (!e.fits_slong_p()) throw InvalidInput("exponent too large to realize");
  long k = e.get_si();
  Rational b = k < 0 ? Rational(1 / base) : base;
  if (k < 0) k = -k;
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(k));
  mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(k));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

ExponentVector ExponentVector::identity(std::size_t l) { return {IntVector(l, Integer(0)), std::nullopt}; }

bool ExponentVector::is_identity() const {
  for (const auto& x : free)
    if (sgn(x) != 0) return false;
  return sgn(residue_of(*this)) == 0;
}

ExponentVector& ExponentVector::operator+=(const ExponentVector& other) {
  if (free.size() != other.free.size()) throw DimensionError("exponent vectors of different free rank");
  for (std::size_t s = 0; s < free.size(); ++s) free[s] += other.free[s];
  if (other.torsion) {
    if (!torsion) {
      torsion = TorsionPart{other.torsion->order, 0};
    } else if (torsion->order != other.torsion->order) {
      throw InvalidInput("torsion components of different orders");
    }
    torsion->residue += other.torsion->residue;
    normalize_residue(*torsion);
  }
  return *this;
}

ExponentVector ExponentVector::operator-() const {
  ExponentVector v = *this;
  for (auto& x : v.free) x = -x;
  if (v.torsion) {
    v.torsion->residue = -v.torsion->residue;
    normalize_residue(*v.torsion);
  }
  return v;
}

ExponentVector operator*(const Integer& k, const ExponentVector& v) {
  ExponentVector out = v;
  for (auto& x : out.free) x *= k;
  if (out.torsion) {
    out.torsion->residue *= k;
    normalize_residue(*out.torsion);
  }
  return out;
}

bool operator==(const ExponentVector& a, const ExponentVector& b) {
  if (a.free != b.free) return false;
  if (a.torsion && b.torsion && a.torsion->order != b.torsion->order) return false;
  return residue_of(a) == residue_of(b);
}

ExponentVector MultiparamSpec::relation(std::size_t i, std::size_t j) const {
  if (i >= j || j >= n) throw InvalidInput("relation: expected 0 <= i < j < n");
  auto it = rel.find({i, j});
  return it == rel.end() ? ExponentVector::identity(l) : it->second;
}

void MultiparamSpec::validate() const {
  for (const auto& [p, v] : rel) {
    if (!(p.i < p.j && p.j < n)) throw InvalidInput("relation pair out of range");
    if (v.free.size() != l) throw InvalidInput("exponent vector length differs from lambda-rank l");
    if (v.torsion) {
      if (torsion_free) throw InvalidInput("torsion component present in a torsion-free spec");
      if (v.torsion->order < 2) throw InvalidInput("torsion order must be at least 2");
    }
  }
  if (generators && generators->size() != l) throw InvalidInput("generator count differs from l");
}

MultiparamSpec MultiparamSpec::from_relations_matrix(std::size_t n, const IntMatrix& m) {
  if (m.rows() != pair_count(n))
    throw DimensionError("relations matrix must have C(n,2) = " + std::to_string(pair_count(n)) + " rows");
  MultiparamSpec spec;
  spec.n = n;
  spec.l = m.cols();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    IntVector row = m.row(r);
    bool zero = true;
    for (const auto& x : row) zero = zero && sgn(x) == 0;
    if (!zero) spec.rel[pair_at(n, r)] = ExponentVector{std::move(row), std::nullopt};
  }
  return spec;
}

std::string RelationsMatrix::row_label(std::size_t row) const {
  const PairIndex p = pair_at(n, row);
  if (n <= 9) return "(" + std::to_string(p.i + 1) + std::to_string(p.j + 1) + ")";
  return "(" + std::to_string(p.i + 1) + "," + std::to_string(p.j + 1) + ")";
}

RelationsMatrix build_relations_matrix(const MultiparamSpec& spec) {
  require_torsion_free(spec, "build_relations_matrix");
  spec.validate();
  RelationsMatrix out{spec.n, IntMatrix(pair_count(spec.n), spec.l)};
  for (const auto& [p, v] : spec.rel) {
    const std::size_t row = pair_position(spec.n, p);
    for (std::size_t s = 0; s < spec.l; ++s) out.matrix(row, s) = v.free[s];
  }
  return out;
}

ExponentVector lambda_eval(const MultiparamSpec& spec, const IntVector& m, const IntVector& mp) {
  if (m.size() != spec.n || mp.size() != spec.n) throw DimensionError("lambda_eval: vectors must have length n");
  ExponentVector acc = ExponentVector::identity(spec.l);
  for (const auto& [p, v] : spec.rel) {
    const Integer coeff = m[p.i] * mp[p.j] - m[p.j] * mp[p.i];
    if (sgn(coeff) != 0) acc += coeff * v;
  }
  return acc;
}

IntMatrix form_matrix(const MultiparamSpec& spec, std::size_t s) {
  require_torsion_free(spec, "form_matrix");
  if (s >= spec.l) throw InvalidInput("form_matrix: index out of range");
  IntMatrix e(spec.n, spec.n);
  for (const auto& [p, v] : spec.rel) {
    e(p.i, p.j) = v.free[s];
    e(p.j, p.i) = -v.free[s];
  }
  return e;
}

MultiparamSpec rationals_to_spec(std::size_t n, const std::map<PairIndex, Rational>& q) {
  std::set<Integer> prime_set;
  bool negative = false;
  for (const auto& [p, value] : q) {
    if (!(p.i < p.j && p.j < n)) throw InvalidInput("rational multiparameter pair out of range");
    if (sgn(value) == 0) throw InvalidInput("multiparameters must be nonzero");
    negative = negative || sgn(value) < 0;
    collect_primes(value.get_num(), prime_set);
    collect_primes(value.get_den(), prime_set);
  }
  const std::vector<Integer> primes(prime_set.begin(), prime_set.end());
  const std::size_t rows = pair_count(n);

  IntMatrix x(rows, primes.size());
  for (const auto& [p, value] : q) {
    const std::size_t r = pair_position(n, p);
    for (std::size_t t = 0; t < primes.size(); ++t)
      x(r, t) = exponent_in(value.get_num(), primes[t]) - exponent_in(value.get_den(), primes[t]);
  }

  // Keep the prime basis when the exponent lattice is all of Z^k; otherwise
  // read a lattice basis off the Smith form: X = U^-1 S V^-1.
  IntMatrix m = x;
  std::vector<Rational> gens;
  const SnfResult f = snf(x);
  const IntVector d = f.invariant_factors();
  bool prime_basis = d.size() == primes.size();
  for (const auto& di : d) prime_basis = prime_basis && di == 1;
  if (prime_basis) {
    for (const auto& p : primes) gens.emplace_back(p);
  } else {
    const IntMatrix u_inv = inverse_unimodular(f.U);
    const IntMatrix v_inv = inverse_unimodular(f.V);
    m = IntMatrix(rows, d.size());
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t s = 0; s < d.size(); ++s) m(r, s) = u_inv(r, s);
    for (std::size_t s = 0; s < d.size(); ++s) {
      Rational g = 1;
      for (std::size_t t = 0; t < primes.size(); ++t) g *= rational_pow(Rational(primes[t]), d[s] * v_inv(s, t));
      gens.push_back(g);
    }
  }

  MultiparamSpec spec = MultiparamSpec::from_relations_matrix(n, m);
  spec.generators = std::move(gens);
  spec.torsion_free = !negative;
  if (negative) {
    for (const auto& [p, value] : q) {
      if (sgn(value) > 0) continue;
      auto it = spec.rel.find(p);
      if (it == spec.rel.end()) it = spec.rel.emplace(p, ExponentVector::identity(spec.l)).first;
      it->second.torsion = TorsionPart{2, 1};
    }
  }
  spec.validate();
  return spec;
}

Rational realize(const MultiparamSpec& spec, const ExponentVector& v) {
  if (!spec.generators) throw InvalidInput("realize: spec has no realized generators");
  Rational out = 1;
  for (std::size_t s = 0; s < spec.l; ++s) out *= rational_pow((*spec.generators)[s], v.free[s]);
  if (v.torsion && sgn(v.torsion->residue) != 0) {
    if (v.torsion->order != 2) throw InvalidInput("realize: only sign torsion can be realized in Q*");
    out = -out;
  }
  return out;
}

std::size_t lambda_rank(const MultiparamSpec& spec) {
  require_torsion_free(spec, "lambda_rank");
  return rank(build_relations_matrix(spec).matrix);
}

std::vector<IntVector> center_lattice(const MultiparamSpec& spec) {
  require_torsion_free(spec, "center_lattice");
  IntMatrix stacked(spec.l * spec.n, spec.n);
  for (std::size_t s = 0; s < spec.l; ++s) {
    const IntMatrix e = form_matrix(spec, s);
    for (std::size_t r = 0; r < spec.n; ++r)
      for (std::size_t c = 0; c < spec.n; ++c) stacked(s * spec.n + r, c) = e(r, c);
  }
  return kernel_basis(stacked);
}

MultiparamSpec basis_change(const MultiparamSpec& spec, const IntMatrix& p) {
  if (p.rows() != spec.l || p.cols() != spec.l) throw DimensionError("basis_change: P must be l x l");
  if (!is_unimodular(p)) throw InvalidInput("basis_change: P must be unimodular");
  MultiparamSpec out = spec;
  for (auto& [pair, v] : out.rel) {
    IntVector row(spec.l, Integer(0));
    for (std::size_t t = 0; t < spec.l; ++t)
      for (std::size_t s = 0; s < spec.l; ++s) row[t] += v.free[s] * p(s, t);
    v.free = std::move(row);
  }
  if (spec.generators) {
    // Realized values are unchanged: g'_t = prod_s g_s^{(P^-1)_{ts}}.
    const IntMatrix p_inv = inverse_unimodular(p);
    std::vector<Rational> gens;
    for (std::size_t t = 0; t < spec.l; ++t) {
      Rational g = 1;
      for (std::size_t s = 0; s < spec.l; ++s) g *= rational_pow((*spec.generators)[s], p_inv(t, s));
      gens.push_back(g);
    }
    out.generators = std::move(gens);
  }
  return out;
}

TorsionReduction torsion_reduce(const MultiparamSpec& spec) {
  spec.validate();
  if (spec.torsion_free) return {spec, Integer(1)};
  Integer scale = 1;
  for (const auto& [p, v] : spec.rel) {
    if (!v.torsion) continue;
    if (v.torsion->order < 2) throw InvalidInput("torsion_reduce: unbounded torsion description");
    scale = lcm(scale, v.torsion->order);
  }
  MultiparamSpec out = spec;
  const Integer sq = scale * scale;
  for (auto& [p, v] : out.rel) {
    for (auto& x : v.free) x *= sq;
    v.torsion.reset();
  }
  out.torsion_free = true;
  return {out, scale};
}

}  // namespace qtaut
