#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "qtaut/errors.hpp"
#include "qtaut/exterior.hpp"
#include "qtaut/linalg.hpp"
#include "qtaut/orbits.hpp"
#include "qtaut/permutation.hpp"

using namespace qtaut;

namespace {

std::size_t binom2(std::size_t n) { return n * (n - 1) / 2; }

// Orbit partition built by repeatedly applying the action, no Burnside.
std::size_t orbit_count_directly(const Permutation& pi) {
  std::set<SignedPair> seen;
  std::size_t orbits = 0;
  for (const auto& x : signed_pairs(pi.size())) {
    if (seen.count(x)) continue;
    ++orbits;
    SignedPair y = x;
    do {
      seen.insert(y);
      y = perm_ext_action(pi, y);
    } while (!(y == x));
  }
  return orbits;
}

IntVector signed_basis(std::size_t n, SignedPair x) {
  IntVector v(pair_count(n), Integer(0));
  v[pair_position(n, x.pair)] = x.sign;
  return v;
}

std::string cycle_type(const Permutation& p) {
  std::vector<std::size_t> lens;
  for (const auto& c : cycles(p)) lens.push_back(c.size());
  std::sort(lens.begin(), lens.end());
  std::string s;
  for (auto l : lens) s += std::to_string(l) + ",";
  return s;
}

}  // namespace

TEST_CASE("permutation basics") {
  const Permutation c = parse_cycles("(1 2 3)", 4);
  CHECK(c == Permutation{1, 2, 0, 3});
  CHECK(cycle_string(c) == "(1 2 3)");
  CHECK(cycle_string(identity_permutation(3)) == "()");
  CHECK(parse_cycles("id", 3) == identity_permutation(3));
  CHECK(parse_cycles("(1 2)(3 4)", 4) == Permutation{1, 0, 3, 2});
  CHECK(compose(c, inverse(c)) == identity_permutation(4));
  CHECK(order(parse_cycles("(1 2)(3 4 5)", 5)) == 6);
  CHECK(is_transposition(parse_cycles("(2 4)", 4)));
  CHECK_FALSE(is_transposition(c));
  CHECK(fixed_points(c) == std::vector<std::size_t>{3});
  CHECK(all_permutations(4).size() == 24);
  const auto s4 = all_permutations(4);
  CHECK(std::is_sorted(s4.begin(), s4.end()));
  const IntMatrix p = permutation_matrix(c);
  for (std::size_t i = 0; i < 4; ++i) CHECK(p(c[i], i) == 1);
  CHECK_THROWS_AS(parse_cycles("(1 1)", 3), InvalidInput);
  CHECK_THROWS_AS(parse_cycles("(1 5)", 3), InvalidInput);
  // products of overlapping cycles compose right to left
  CHECK(parse_cycles("(1 2)(2 3)", 3) == compose(parse_cycles("(1 2)", 3), parse_cycles("(2 3)", 3)));
  CHECK(parse_cycles("(1 2)(2 3)", 3) == parse_cycles("(1 2 3)", 3));
  CHECK_THROWS_AS(validate_permutation(Permutation{0, 0}), InvalidInput);
}

TEST_CASE("perm_ext_action") {
  for (const auto& x : signed_pairs(4)) CHECK(perm_ext_action(identity_permutation(4), x) == x);
  CHECK(signed_pairs(5).size() == 20);
  const SignedPair e12{{0, 1}, 1};
  CHECK(perm_ext_action(parse_cycles("(1 2)", 3), e12) == SignedPair{{0, 1}, -1});

  // agrees with the matrix action of ext_square(P)
  for (std::size_t n = 3; n <= 5; ++n)
    for (const auto& pi : all_permutations(n)) {
      const IntMatrix b = ext_square(permutation_matrix(pi));
      for (const auto& x : signed_pairs(n)) CHECK(mat_vec(b, signed_basis(n, x)) == signed_basis(n, perm_ext_action(pi, x)));
    }
}

TEST_CASE("fix_rank") {
  for (const char* t : {"(1 2)", "(1 4)", "(2 3)", "(3 4)"}) CHECK(fix_rank(parse_cycles(t, 4)) == 3);
  CHECK(fix_rank(parse_cycles("(1 2 3 4 5)", 5)) == 2);
  CHECK(fix_rank(parse_cycles("(1 2 3)", 3)) == 1);
  // direct kernel dimension of ext_square(P) - I
  const Permutation c3 = parse_cycles("(1 2 3)", 3);
  CHECK(kernel_basis(ext_square(permutation_matrix(c3)) - IntMatrix::identity(3)).size() == 1);
  CHECK_THROWS_AS(fix_rank(identity_permutation(4)), InvalidInput);
  CHECK_THROWS_AS(fix_rank(parse_cycles("(1 2)", 2)), InvalidInput);
}

TEST_CASE("fix_rank by kernel equals fix_rank by orbit sums") {
  for (std::size_t n = 3; n <= 6; ++n)
    for (const auto& pi : all_permutations(n)) {
      if (is_identity(pi)) continue;
      CHECK(fix_rank(pi) == fix_rank_by_orbits(pi));
    }
}

TEST_CASE("zero-sum orbits are exactly the orbits containing both signs") {
  for (std::size_t n = 3; n <= 5; ++n)
    for (const auto& pi : all_permutations(n))
      for (const auto& orbit : signed_pair_orbits(pi)) {
        IntVector sum(pair_count(n), Integer(0));
        std::set<SignedPair> members(orbit.begin(), orbit.end());
        bool both = false;
        for (const auto& x : orbit) {
          sum[pair_position(n, x.pair)] += x.sign;
          both = both || members.count(SignedPair{x.pair, -x.sign});
        }
        const bool zero = std::all_of(sum.begin(), sum.end(), [](const Integer& v) { return v == 0; });
        CHECK(zero == both);
      }
}

TEST_CASE("burnside_count") {
  for (std::size_t n = 3; n <= 7; ++n) {
    CHECK(burnside_count(identity_permutation(n)) == 2 * binom2(n));
    Permutation t = identity_permutation(n);
    std::swap(t[0], t[1]);
    CHECK(burnside_count(t) == (n - 2) * (n - 3) + (2 * n - 3));
  }
  CHECK(burnside_count(parse_cycles("(1 2)", 4)) == 7);
  for (const auto& pi : all_permutations(5)) CHECK(burnside_count(pi) == orbit_count_directly(pi));
  // depends only on cycle type
  std::map<std::string, std::size_t> by_type;
  for (const auto& pi : all_permutations(5)) {
    const auto [it, fresh] = by_type.emplace(cycle_type(pi), burnside_count(pi));
    if (!fresh) CHECK(it->second == burnside_count(pi));
  }
}

TEST_CASE("fix_rank_audit") {
  const FixRankAuditReport r4 = fix_rank_audit(4);
  CHECK(r4.ok());
  CHECK(r4.bound == 3);
  CHECK(r4.max_fix_rank == 3);
  CHECK(r4.checked == 23);
  CHECK(r4.equality_attainers.size() == 6);
  for (const auto& e : r4.equality_attainers) CHECK(e.transposition);

  const FixRankAuditReport r5 = fix_rank_audit(5);
  CHECK(r5.ok());
  CHECK(r5.max_fix_rank <= 6);

  const FixRankAuditReport r3 = fix_rank_audit(3);
  CHECK(r3.ok());
  CHECK(r3.bound == 1);
  // at n = 3 the 3-cycles reach the bound as well
  CHECK(r3.equality_attainers.size() == 5);

  for (const auto& e : fix_rank_audit(6).violations) FAIL("violation at " << cycle_string(e.pi));
  CHECK_THROWS_AS(fix_rank_audit(2), InvalidInput);
  CHECK_THROWS_AS(fix_rank_audit(8), InvalidInput);
}
