#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qtaut/errors.hpp"
#include "qtaut/lambda_model.hpp"
#include "qtaut/linalg.hpp"

using namespace qtaut;

namespace {

MultiparamSpec n3r2() { return oracle::independent_spec(3, {{0, 2}, {1, 2}}); }

IntVector unit(std::size_t n, std::size_t i) {
  IntVector v(n, Integer(0));
  v[i] = 1;
  return v;
}

Rational pow_q(const Rational& b, long e) {
  Rational r = 1;
  for (long k = 0; k < (e < 0 ? -e : e); ++k) r *= b;
  return e < 0 ? Rational(1) / r : r;
}

// q_ij reconstructed directly from the spec, independent of realize().
Rational q_from_spec(const MultiparamSpec& s, PairIndex p) {
  const ExponentVector v = s.relation(p.i, p.j);
  Rational q = 1;
  for (std::size_t t = 0; t < s.l; ++t) q *= pow_q((*s.generators)[t], v.free[t].get_si());
  if (v.torsion && v.torsion->residue != 0) q = -q;
  return q;
}

}  // namespace

TEST_CASE("relations matrix") {
  const RelationsMatrix m = build_relations_matrix(n3r2());
  CHECK(m.matrix == IntMatrix{{0, 0}, {1, 0}, {0, 1}});
  CHECK(m.row_label(0) == "(12)");
  CHECK(m.row_label(2) == "(23)");
  CHECK(build_relations_matrix(oracle::independent_spec(2, {{0, 1}})).matrix == IntMatrix{{1}});
  MultiparamSpec trivial;
  trivial.n = 4;
  trivial.l = 2;
  CHECK(build_relations_matrix(trivial).matrix == IntMatrix(6, 2));

  MultiparamSpec tors = n3r2();
  tors.torsion_free = false;
  tors.rel[{0, 1}] = ExponentVector{IntVector(2, Integer(0)), TorsionPart{2, 1}};
  CHECK_THROWS_AS(build_relations_matrix(tors), InvalidInput);
}

TEST_CASE("spec validation") {
  MultiparamSpec s = n3r2();
  s.rel[{0, 1}] = ExponentVector{IntVector(3, Integer(1)), std::nullopt};
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  MultiparamSpec t = n3r2();
  t.rel[{0, 1}] = ExponentVector{IntVector(2, Integer(0)), TorsionPart{2, 1}};
  CHECK_THROWS_AS(t.validate(), InvalidInput);  // torsion in a torsion-free spec
}

TEST_CASE("lambda_eval") {
  const MultiparamSpec s = n3r2();
  std::mt19937_64 rng(31);
  CHECK(lambda_eval(s, IntVector{1, 2, 3}, IntVector{1, 2, 3}).is_identity());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) CHECK(lambda_eval(s, unit(3, i), unit(3, j)) == s.relation(i, j));
  for (int t = 0; t < 100; ++t) {
    const MultiparamSpec r = oracle::random_spec(4, 3, rng);
    const IntVector m = oracle::random_vector(4, -5, 5, rng), mp = oracle::random_vector(4, -5, 5, rng);
    const IntVector m2 = oracle::random_vector(4, -5, 5, rng);
    CHECK(lambda_eval(r, m, mp) == -lambda_eval(r, mp, m));
    CHECK(lambda_eval(r, m, m).is_identity());
    IntVector sum(4);
    for (std::size_t k = 0; k < 4; ++k) sum[k] = m[k] + m2[k];
    CHECK(lambda_eval(r, sum, mp) == lambda_eval(r, m, mp) + lambda_eval(r, m2, mp));
    CHECK(lambda_eval(r, mp, sum) == lambda_eval(r, mp, m) + lambda_eval(r, mp, m2));
  }
  CHECK_THROWS_AS(lambda_eval(s, IntVector{1, 2}, IntVector{1, 2, 3}), DimensionError);
}

TEST_CASE("lambda_eval with torsion") {
  MultiparamSpec s;
  s.n = 2;
  s.l = 1;
  s.torsion_free = false;
  s.rel[{0, 1}] = ExponentVector{IntVector{1}, TorsionPart{2, 1}};
  const ExponentVector v = lambda_eval(s, IntVector{2, 0}, IntVector{0, 1});
  CHECK(v.free == IntVector{2});
  CHECK(v.torsion.value().residue == 0);
  CHECK(lambda_eval(s, IntVector{1, 0}, IntVector{0, 3}).torsion.value().residue == 1);
}

TEST_CASE("form_matrix") {
  CHECK(form_matrix(n3r2(), 0) == IntMatrix{{0, 0, 1}, {0, 0, 0}, {-1, 0, 0}});
  MultiparamSpec zero;
  zero.n = 3;
  zero.l = 1;
  CHECK(form_matrix(zero, 0) == IntMatrix(3, 3));
  CHECK_THROWS_AS(form_matrix(n3r2(), 2), InvalidInput);

  std::mt19937_64 rng(32);
  for (int t = 0; t < 100; ++t) {
    const MultiparamSpec r = oracle::random_spec(4, 2, rng);
    const IntVector m = oracle::random_vector(4, -4, 4, rng), mp = oracle::random_vector(4, -4, 4, rng);
    const ExponentVector v = lambda_eval(r, m, mp);
    for (std::size_t s = 0; s < 2; ++s) {
      const IntMatrix col = IntMatrix::from_columns({mp}, 4);
      const IntMatrix row = IntMatrix::from_columns({m}, 4).transpose();
      CHECK((row * form_matrix(r, s) * col)(0, 0) == v.free[s]);
    }
  }
}

TEST_CASE("rationals_to_spec") {
  const MultiparamSpec s = rationals_to_spec(3, {{{0, 2}, Rational(2)}, {{1, 2}, Rational(3)}});
  CHECK(s.l == 2);
  CHECK(s.torsion_free);
  CHECK(build_relations_matrix(s).matrix == IntMatrix{{0, 0}, {1, 0}, {0, 1}});

  const MultiparamSpec ones = rationals_to_spec(3, {{{0, 1}, Rational(1)}});
  CHECK(ones.l == 0);

  const MultiparamSpec neg = rationals_to_spec(2, {{{0, 1}, Rational(-1)}});
  CHECK_FALSE(neg.torsion_free);
  CHECK(neg.relation(0, 1).torsion.has_value());

  CHECK_THROWS_AS(rationals_to_spec(2, {{{0, 1}, Rational(0)}}), InvalidInput);

  // Dependent values: 4 = 2^2 and 8 = 2^3 generate the lattice 2^Z.
  const MultiparamSpec dep = rationals_to_spec(3, {{{0, 1}, Rational(4)}, {{0, 2}, Rational(8)}});
  CHECK(dep.l == 1);
  CHECK(realize(dep, dep.relation(0, 1)) == 4);
  CHECK(realize(dep, dep.relation(0, 2)) == 8);
}

TEST_CASE("rationals_to_spec round-trips through realization") {
  std::mt19937_64 rng(33);
  const long primes[] = {2, 3, 5, 7};
  std::uniform_int_distribution<int> e(-2, 2), sign(0, 4), pick(0, 3);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 3 + t % 3;
    std::map<PairIndex, Rational> q;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Rational v = 1;
        for (int k = 0; k < 2; ++k) v *= pow_q(Rational(primes[pick(rng)]), e(rng));
        if (sign(rng) == 0) v = -v;
        q[{i, j}] = v;
      }
    const MultiparamSpec s = rationals_to_spec(n, q);
    for (const auto& [p, v] : q) {
      CHECK(realize(s, s.relation(p.i, p.j)) == v);
      CHECK(q_from_spec(s, p) == v);
    }
  }
}

TEST_CASE("lambda_rank") {
  CHECK(lambda_rank(n3r2()) == 2);
  MultiparamSpec zero;
  zero.n = 3;
  CHECK(lambda_rank(zero) == 0);
  const IntMatrix product{{1, 1, 1, 1, 1}, {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0},
                          {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}};
  CHECK(lambda_rank(MultiparamSpec::from_relations_matrix(4, product)) == 5);
}

TEST_CASE("center_lattice") {
  CHECK(center_lattice(oracle::independent_spec(2, {{0, 1}})).empty());
  CHECK(center_lattice(n3r2()).empty());
  MultiparamSpec ones;
  ones.n = 3;
  CHECK(center_lattice(ones).size() == 3);
  const auto c = center_lattice(oracle::independent_spec(4, {{1, 2}, {1, 3}, {2, 3}}));
  REQUIRE(c.size() == 1);
  CHECK(c[0] == IntVector{1, 0, 0, 0});

  std::mt19937_64 rng(34);
  for (int t = 0; t < 40; ++t) {
    const MultiparamSpec r = oracle::random_spec(5, 1 + t % 2, rng);
    for (const auto& v : center_lattice(r))
      for (std::size_t j = 0; j < 5; ++j) CHECK(lambda_eval(r, v, unit(5, j)).is_identity());
  }
}

TEST_CASE("basis_change") {
  const MultiparamSpec s = n3r2();
  const MultiparamSpec same = basis_change(s, IntMatrix::identity(2));
  CHECK(build_relations_matrix(same).matrix == build_relations_matrix(s).matrix);
  const MultiparamSpec flipped = basis_change(s, IntMatrix{{1, 0}, {0, -1}});
  CHECK(build_relations_matrix(flipped).matrix == IntMatrix{{0, 0}, {1, 0}, {0, -1}});
  CHECK_THROWS_AS(basis_change(s, IntMatrix{{2, 0}, {0, 1}}), InvalidInput);

  std::mt19937_64 rng(35);
  for (int t = 0; t < 30; ++t) {
    const MultiparamSpec r = oracle::random_spec(4, 3, rng);
    const IntMatrix p = random_unimodular(3, 8, 70 + t);
    CHECK(build_relations_matrix(basis_change(r, p)).matrix == build_relations_matrix(r).matrix * p);
  }

  const MultiparamSpec real = rationals_to_spec(3, {{{0, 1}, Rational(6)}, {{1, 2}, Rational(3, 2)}});
  const MultiparamSpec moved = basis_change(real, IntMatrix{{1, 1}, {0, 1}});
  CHECK(realize(moved, moved.relation(0, 1)) == 6);
  CHECK(realize(moved, moved.relation(1, 2)) == Rational(3, 2));
}

TEST_CASE("torsion_reduce") {
  const auto same = torsion_reduce(n3r2());
  CHECK(same.scale == 1);
  CHECK(build_relations_matrix(same.spec).matrix == build_relations_matrix(n3r2()).matrix);

  const MultiparamSpec neg = rationals_to_spec(2, {{{0, 1}, Rational(-2)}});
  const auto red = torsion_reduce(neg);
  CHECK(red.scale == 2);
  CHECK(red.spec.torsion_free);
  CHECK(build_relations_matrix(red.spec).matrix == IntMatrix{{4}});
  // lambda(2 e1, 2 e2) = q12^4 = 16, whose exponent of 2 is 4.
  CHECK(realize(neg, lambda_eval(neg, IntVector{2, 0}, IntVector{0, 2})) == 16);

  std::mt19937_64 rng(36);
  for (int t = 0; t < 20; ++t) {
    MultiparamSpec r = oracle::random_spec(4, 2, rng);
    const std::size_t free_rank = lambda_rank(r);
    r.torsion_free = false;
    r.rel[{0, 1}].free.resize(2);
    r.rel[{0, 1}].torsion = TorsionPart{3, 1};
    const auto out = torsion_reduce(r);
    CHECK(out.scale == 3);
    CHECK(lambda_rank(out.spec) == free_rank);
  }
}
