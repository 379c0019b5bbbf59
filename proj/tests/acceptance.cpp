// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli.hpp"
#include "document.hpp"
#include "oracles.hpp"
#include "qtaut/affine.hpp"
#include "qtaut/exterior.hpp"
#include "qtaut/linalg.hpp"
#include "qtaut/nonscalar.hpp"
#include "qtaut/orbits.hpp"

using namespace qtaut;

namespace {

const std::string data = QTAUT_DATA_DIR;

struct Result {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<Result()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (dt > limit_s) {
    r.pass = false;
    r.detail += " [time limit " + std::to_string(limit_s) + " s exceeded]";
  }
  failures += !r.pass;
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(2);
  line << (r.pass ? "[PASS] " : "[FAIL] ") << id << ". " << title << " (" << dt << " s)";
  if (!r.detail.empty()) line << "\n         " << r.detail;
  std::cout << line.str() << std::endl;
}

MultiparamSpec doc_spec(const std::string& file) { return cli::load_document(data + "/" + file).torus_spec(); }

std::set<IntMatrix> as_set(const std::vector<IntMatrix>& v) { return {v.begin(), v.end()}; }

SearchReport search(const MultiparamSpec& s, long bound) {
  SearchOptions o;
  o.bound = bound;
  return search_auts(s, o);
}

std::string count_line(std::size_t got, std::size_t want) {
  return "found " + std::to_string(got) + ", expected " + std::to_string(want);
}

}  // namespace

int main() {
  criterion(1, "n = 2: membership iff det = 1 on 500 random unimodular matrices", 1.0, [] {
    const MultiparamSpec s = doc_spec("n2.yaml");
    std::size_t agree = 0, positive = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      const IntMatrix a = random_unimodular(2, 4 + seed % 12, seed);
      const bool member = is_nonscalar_aut(a, s);
      agree += member == (det(a) == 1);
      positive += member;
    }
    return Result{agree == 500 && positive > 0 && positive < 500,
                  std::to_string(agree) + "/500 agree, " + std::to_string(positive) + " with det 1"};
  });

  criterion(2, "rank-two n = 3 example: bound 2 gives the 50 family matrices, bound 1 gives 18", 5.0, [] {
    const MultiparamSpec s = doc_spec("n3r2.yaml");
    const auto b2 = search(s, 2), b1 = search(s, 1);
    const bool ok = as_set(b2.found) == as_set(family_members(Family::n3_upper, 2)) && b2.found.size() == 50 &&
                    as_set(b1.found) == as_set(family_members(Family::n3_upper, 1)) && b1.found.size() == 18;
    return Result{ok, "bound 2: " + count_line(b2.found.size(), 50) + "; bound 1: " + count_line(b1.found.size(), 18)};
  });

  criterion(3, "n = 4, q12 = q13 = 1: bound 2 gives the 10 matrices f_{b,e}", 30.0, [] {
    const MultiparamSpec s = doc_spec("n4_f_family.yaml");
    const auto r = search(s, 2);
    const auto minus = family_members(Family::n4_f, 2, 0, FSign::minus_b);
    const auto plus = family_members(Family::n4_f, 2, 0, FSign::plus_b);
    // The (1,4) sign: membership of f_{b,e} for fixed b, and the displayed
    // exterior square with b at (5,1), (6,2).
    bool minus_members = true, plus_members = true, display_minus = true, display_plus = true;
    for (long b = -3; b <= 3; ++b)
      for (int e : {1, -1}) {
        minus_members = minus_members && is_nonscalar_aut(family_member(Family::n4_f, 0, b, e, FSign::minus_b), s);
        plus_members = plus_members && is_nonscalar_aut(family_member(Family::n4_f, 0, b, e, FSign::plus_b), s);
      }
    for (long b = -3; b <= 3; ++b) {
      if (b == 0) continue;
      IntMatrix shown = IntMatrix::identity(6);
      shown(4, 0) = b;
      shown(5, 1) = b;
      display_minus = display_minus && ext_square(family_member(Family::n4_f, 0, b, 1, FSign::minus_b).transpose()) == shown;
      display_plus = display_plus && ext_square(family_member(Family::n4_f, 0, b, 1, FSign::plus_b).transpose()) == shown;
    }
    const bool ok = as_set(r.found) == as_set(minus) && r.found.size() == 10;
    std::string sign = std::string("entry -b: members ") + (minus_members ? "yes" : "no") + ", matches displayed square " +
                       (display_minus ? "yes" : "no") + "; entry +b: members " + (plus_members ? "yes" : "no") +
                       ", matches displayed square " + (display_plus ? "yes" : "no");
    return Result{ok && minus_members && display_minus, count_line(r.found.size(), 10) + "; " + sign};
  });

  criterion(4, "three trivial commutators: bound 2 gives the 50 matrices phi_{a,b,e}", 30.0, [] {
    const MultiparamSpec s = doc_spec("n4_three_trivial.yaml");
    const auto r = search(s, 2);
    const auto phi = as_set(family_members(Family::n4_phi, 2));
    const auto found = as_set(r.found);
    std::size_t phi_inside = 0;
    for (const auto& m : phi) phi_inside += found.count(m);
    // What the search does find: first column +-e1, any bounded first row,
    // and a common sign on the rest of the diagonal.
    std::set<IntMatrix> wider;
    for (int e1 : {1, -1})
      for (int e : {1, -1})
        for (long a = -2; a <= 2; ++a)
          for (long b = -2; b <= 2; ++b)
            for (long c = -2; c <= 2; ++c)
              wider.insert(IntMatrix{{e1, a, b, c}, {0, e, 0, 0}, {0, 0, e, 0}, {0, 0, 0, e}});
    const auto center = center_lattice(s);
    std::string detail = count_line(found.size(), 50) + "; all " + std::to_string(phi_inside) +
                         " phi matrices present; found set equals {[[e',a,b,c],[0,eI]]} with |a|,|b|,|c| <= 2: " +
                         (found == wider ? "yes" : "no") + " (e1 spans the radical, size " +
                         std::to_string(center.size()) + ")";
    return Result{found == phi, detail};
  });

  criterion(5, "product relation: Smith form (1,1,1,1,1) and bound 2 gives exactly +-I_4", 60.0, [] {
    const MultiparamSpec s = doc_spec("n4_product.yaml");
    const IntMatrix m = build_relations_matrix(s).matrix;
    const SnfResult f = snf(m);
    const bool snf_ok = f.invariant_factors() == IntVector{1, 1, 1, 1, 1} && f.U * m * f.V == f.S;
    const auto r = search(s, 2);
    const bool search_ok = as_set(r.found) == std::set<IntMatrix>{IntMatrix::identity(4), -IntMatrix::identity(4)};
    return Result{snf_ok && search_ok, std::string("invariant factors ok: ") + (snf_ok ? "yes" : "no") + "; " +
                                           count_line(r.found.size(), 2)};
  });

  criterion(6, "Z/2 case at n = 5: bound 1 gives exactly +-I_5", 60.0, [] {
    const MultiparamSpec s = doc_spec("z2_n5.yaml");
    const auto r = search(s, 1);
    const bool ok = as_set(r.found) == std::set<IntMatrix>{IntMatrix::identity(5), -IntMatrix::identity(5)};
    const bool pattern = z2_case_check(s).has_value();
    return Result{ok && pattern, count_line(r.found.size(), 2) + ", nodes " + std::to_string(r.nodes) +
                                     ", hypothesis pattern recognized: " + (pattern ? "yes" : "no")};
  });

  criterion(7, "bivector and symplectic membership agree on 500 random pairs, n in {3,4,5}", 60.0, [] {
    std::mt19937_64 rng(2024);
    std::size_t agree = 0, members = 0;
    for (int t = 0; t < 500; ++t) {
      const std::size_t n = 3 + t % 3;
      const MultiparamSpec s = oracle::random_spec(n, 1 + t % 3, rng);
      IntMatrix a = random_unimodular(n, t % 5 == 0 ? 0 : 3 + t % 9, 77'000 + t);
      if (t % 10 == 0) a = -a;
      const bool x = is_nonscalar_aut(a, s), y = is_symplectic_all(a, s);
      agree += x == y;
      members += x;
    }
    return Result{agree == 500, std::to_string(agree) + "/500 agree, " + std::to_string(members) + " members"};
  });

  criterion(8, "exterior square identities and exterior roots on 200 random unimodular matrices per n = 3..6", 30.0, [] {
    std::size_t checks = 0, bad = 0;
    for (std::size_t n = 3; n <= 6; ++n)
      for (std::uint64_t k = 0; k < 200; ++k) {
        const IntMatrix a = random_unimodular(n, 6 + k % 10, 1'000'000 * n + 2 * k);
        const IntMatrix b = random_unimodular(n, 6 + k % 10, 1'000'000 * n + 2 * k + 1);
        const IntMatrix sa = ext_square(a);
        Integer d = 1;
        for (std::size_t e = 0; e + 1 < n; ++e) d *= det(a);
        bad += !(ext_square(a * b) == sa * ext_square(b));
        bad += !(det(sa) == d);
        bad += !(ext_square(a.transpose()) == sa.transpose());
        const auto root = ext_root(sa);
        bad += !(root && (*root == a || *root == -a));
        checks += 4;
      }
    return Result{bad == 0, std::to_string(checks - bad) + "/" + std::to_string(checks) + " checks hold"};
  });

  criterion(9, "Plücker suite at n = 4", 30.0, [] {
    std::size_t bad = 0, minus = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
      const IntMatrix a = random_unimodular(4, 5 + k % 15, 5'000 + k);
      const IntMatrix b = ext_square(a);
      for (std::size_t c = 0; c < 6; ++c) bad += !is_decomposable(Bivector{4, b.column(c)});
      const IsometrySign s = is_plucker_isometry(b);
      bad += s == IsometrySign::no;
      minus += s == IsometrySign::minus;
    }
    for (long t = -5; t <= 5; ++t) {
      IntMatrix u = IntMatrix::identity(6);
      u(4, 0) = t;
      u(5, 1) = t;
      bad += is_plucker_isometry(u) != IsometrySign::plus;
    }
    return Result{bad == 0, std::to_string(bad) + " failures; " + std::to_string(minus) + " of 100 with B^t P B = -P"};
  });

  criterion(10, "orbit bound over S_3..S_6, fix rank of (12345), Burnside counts over S_5", 30.0, [] {
    bool ok = true;
    std::ostringstream note;
    for (std::size_t n = 3; n <= 6; ++n) {
      const std::size_t bound = (n - 1) * (n - 2) / 2;
      std::size_t others = 0;
      for (const auto& pi : all_permutations(n)) {
        if (is_identity(pi)) continue;
        const std::size_t r = fix_rank(pi);
        ok = ok && r <= bound && r == fix_rank_by_orbits(pi) && r <= burnside_count(pi) / 2;
        if (is_transposition(pi)) {
          ok = ok && r == bound && burnside_count(pi) == (n - 2) * (n - 3) + (2 * n - 3);
        } else if (r == bound) {
          ++others;
        }
      }
      if (n >= 4) ok = ok && others == 0;
      if (others) note << "n = " << n << ": " << others << " non-transpositions also reach the bound; ";
    }
    ok = ok && fix_rank(parse_cycles("(1 2 3 4 5)", 5)) == 2;
    for (const auto& pi : all_permutations(5)) {
      std::set<SignedPair> seen;
      std::size_t orbits = 0;
      for (const auto& x : signed_pairs(5)) {
        if (seen.count(x)) continue;
        ++orbits;
        for (SignedPair y = x; seen.insert(y).second;) y = perm_ext_action(pi, y);
      }
      ok = ok && orbits == burnside_count(pi);
    }
    note << "transpositions attain the bound with count (n-2)(n-3)+(2n-3)";
    return Result{ok, note.str()};
  });

  criterion(11, "F_5 fixture: GL(3,5) sweep gives exactly the 64 diagonal matrices, all monomial", 600.0, [] {
    const Field f5 = Field::prime_field(5);
    // Scan (q12, q13, q23) in lexicographic order for hypotheses (i) and (ii).
    std::optional<QMatrix> scanned;
    for (long a = 1; a <= 4 && !scanned; ++a)
      for (long b = 1; b <= 4 && !scanned; ++b)
        for (long c = 1; c <= 4 && !scanned; ++c) {
          const QMatrix q = QMatrix::from_upper(3, f5, {{{0, 1}, f5.from_int(a)}, {{0, 2}, f5.from_int(b)}, {{1, 2}, f5.from_int(c)}});
          const auto h = check_torus_criterion(q);
          if (h.distinct_values && h.no_inverse_products) scanned = q;
        }
    const QMatrix q = cli::load_document(data + "/f5_fixture.yaml").q_matrix();
    bool same = scanned.has_value();
    for (std::size_t i = 0; same && i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) same = same && scanned->at(i, j) == q.at(i, j);
    const auto order = gl_order(3, 5);
    const auto auts = brute_force_linear_auts(q, 1'488'000);
    std::set<std::string> got, diag;
    bool monomial_identity = true;
    for (const auto& a : auts) {
      got.insert(a.to_string());
      const auto m = as_monomial(a);
      monomial_identity = monomial_identity && m && is_identity(m->perm);
    }
    for (long x = 1; x <= 4; ++x)
      for (long y = 1; y <= 4; ++y)
        for (long z = 1; z <= 4; ++z) {
          std::vector<FieldScalar> e(9, f5.from_int(0));
          e[0] = f5.from_int(x);
          e[4] = f5.from_int(y);
          e[8] = f5.from_int(z);
          diag.insert(AlphaMatrix::make(3, f5, e).to_string());
        }
    const bool ok = same && order == std::optional<std::uint64_t>(1'488'000) && got == diag && auts.size() == 64 &&
                    monomial_identity;
    return Result{ok, "fixture equals first scanned Q: " + std::string(same ? "yes" : "no") + "; |GL(3,5)| = " +
                          std::to_string(order.value_or(0)) + "; " + count_line(auts.size(), 64)};
  });

  criterion(12, "admissibility: circulant 5-cycle and the no-inverse-product document", 60.0, [] {
    std::ostringstream out, err;
    const int code = cli::run({"report", data + "/circulant5.yaml", "--json"}, out, err);
    if (code != 0) return Result{false, "report exited with " + std::to_string(code) + ": " + err.str()};
    const auto j = nlohmann::json::parse(out.str());
    const auto& adm = j["affine"]["admissible_perms"];
    const bool cycle = std::find(adm.begin(), adm.end(), "(1 2 3 4 5)") != adm.end();
    const std::size_t rank = j["torus"]["lambda_rank"];
    const bool unmet = j["torus"]["rank_bound"]["bound_met"] == false;
    const auto club = admissible_perms(cli::load_document(data + "/club.yaml").q_matrix());
    const bool trivial = club == std::vector<Permutation>{identity_permutation(3)};
    return Result{cycle && rank <= 2 && unmet && trivial,
                  std::string("(1 2 3 4 5) admissible: ") + (cycle ? "yes" : "no") + ", lambda rank " +
                      std::to_string(rank) + ", rank bound met: " + (unmet ? "no" : "yes") +
                      ", no-inverse-product document admits only the identity: " + (trivial ? "yes" : "no")};
  });

  std::cout << (failures ? std::to_string(failures) + " criterion(s) failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
