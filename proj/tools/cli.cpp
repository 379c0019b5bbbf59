#include "cli.hpp"

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "document.hpp"
#include "qtaut/affine.hpp"
#include "qtaut/errors.hpp"
#include "qtaut/exterior.hpp"
#include "qtaut/lambda_model.hpp"
#include "qtaut/nonscalar.hpp"
#include "qtaut/orbits.hpp"

namespace qtaut::cli {

using Json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::string cur;
  for (char c : text) {
    if (c == ';') {
      rows.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  rows.push_back(cur);
  return rows;
}

std::vector<std::string> tokens(const std::string& row) {
  std::istringstream in(row);
  std::vector<std::string> out;
  for (std::string t; in >> t;) {
    // allow "1,2,3" as well as "1 2 3"
    std::string part;
    for (char c : t) {
      if (c == ',') {
        if (!part.empty()) out.push_back(part);
        part.clear();
      } else {
        part += c;
      }
    }
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

Integer to_integer(const std::string& t) {
  Integer v;
  if (v.set_str(t, 10) != 0) throw InvalidInput("not an integer: '" + t + "'");
  return v;
}

std::vector<std::vector<std::string>> parse_table(const std::string& text) {
  std::vector<std::vector<std::string>> table;
  for (const auto& row : split_rows(text)) table.push_back(tokens(row));
  if (table.empty() || table[0].empty()) throw InvalidInput("empty matrix literal");
  for (const auto& r : table)
    if (r.size() != table[0].size()) throw InvalidInput("ragged matrix literal '" + text + "'");
  return table;
}

Json integer_json(const Integer& v) {
  if (v.fits_slong_p()) return Json(v.get_si());
  return Json(v.get_str());
}

Json matrix_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(integer_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json vector_json(const IntVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(integer_json(x));
  return out;
}

std::string vector_string(const IntVector& v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + v[k].get_str();
  return s + ")";
}

std::string pair_string(PairIndex p) { return std::to_string(p.i + 1) + std::to_string(p.j + 1); }

Json pair_pair_json(const std::optional<std::pair<PairIndex, PairIndex>>& w) {
  if (!w) return nullptr;
  return Json::array({pair_string(w->first), pair_string(w->second)});
}

std::string pair_pair_string(const std::optional<std::pair<PairIndex, PairIndex>>& w) {
  if (!w) return "none";
  return "(" + pair_string(w->first) + "), (" + pair_string(w->second) + ")";
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

struct Globals {
  bool json = false;
  long bound = 1;
  std::uint64_t budget = 100'000'000;
  bool budget_given = false;
  long seed = 0;
  std::string field;
  unsigned workers = 1;
};

ProblemDocument load(const std::string& path, const Globals& g) {
  ProblemDocument doc = load_document(path);
  if (!g.field.empty()) doc.field = parse_field(g.field);
  return doc;
}

MultiparamSpec torsion_free_spec(const ProblemDocument& doc) {
  MultiparamSpec spec = doc.torus_spec();
  if (!spec.torsion_free)
    throw InvalidInput("this command needs a torsion-free lambda-group; the document has sign torsion");
  return spec;
}

Json relmat_json(const RelationsMatrix& m) {
  Json labels = Json::array();
  for (std::size_t r = 0; r < m.matrix.rows(); ++r) labels.push_back(m.row_label(r));
  return Json{{"rows", m.matrix.rows()}, {"cols", m.matrix.cols()}, {"labels", labels}, {"matrix", matrix_json(m.matrix)}};
}

void print_relmat(std::ostream& out, const RelationsMatrix& m) {
  out << "relations matrix " << m.matrix.rows() << " x " << m.matrix.cols() << "\n";
  for (std::size_t r = 0; r < m.matrix.rows(); ++r) {
    out << m.row_label(r) << ":";
    for (std::size_t c = 0; c < m.matrix.cols(); ++c) out << " " << m.matrix(r, c).get_str();
    out << "\n";
  }
}

int cmd_relmat(const std::string& path, const Globals& g, std::ostream& out) {
  const ProblemDocument doc = load(path, g);
  const RelationsMatrix m = build_relations_matrix(torsion_free_spec(doc));
  if (g.json)
    emit(out, relmat_json(m));
  else
    print_relmat(out, m);
  return ok;
}

int cmd_check_aut(const std::string& path, const std::string& literal, const Globals& g, std::ostream& out,
                  std::ostream& err) {
  const ProblemDocument doc = load(path, g);
  const MultiparamSpec spec = torsion_free_spec(doc);
  const IntMatrix a = parse_matrix(literal);
  if (a.rows() != doc.n || a.cols() != doc.n)
    throw DimensionError("matrix must be " + std::to_string(doc.n) + " x " + std::to_string(doc.n));
  const bool bivector = is_nonscalar_aut(a, spec);
  const bool symplectic = is_symplectic_all(a, spec);
  const bool agree = bivector == symplectic;
  if (g.json) {
    emit(out, Json{{"matrix", matrix_json(a)},
                   {"member", agree ? Json(bivector) : Json(nullptr)},
                   {"bivector_route", bivector},
                   {"symplectic_route", symplectic},
                   {"routes_agree", agree}});
  } else {
    out << "matrix: " << a.to_string() << "\n";
    out << "member: " << (agree ? yes_no(bivector) : "undetermined") << "\n";
    out << "bivector route: " << yes_no(bivector) << "\n";
    out << "symplectic route: " << yes_no(symplectic) << "\n";
    out << "routes agree: " << yes_no(agree) << "\n";
  }
  if (!agree) {
    err << "internal consistency failure: membership routes disagree\n";
    return consistency_failure;
  }
  return ok;
}

SearchOptions search_options(const Globals& g) {
  if (g.bound < 1) throw InvalidInput("--bound must be at least 1");
  SearchOptions o;
  o.bound = g.bound;
  o.node_budget = g.budget;
  o.workers = std::max(1u, g.workers);
  return o;
}

Json search_summary_json(const SearchReport& r) {
  return Json{{"bound", r.bound},
              {"count", r.found.size()},
              {"contains_identity", r.contains_identity},
              {"contains_minus_identity", r.contains_minus_identity},
              {"closed_under_product_within_bound", r.closed_under_product_within_bound},
              {"family_match", r.family_match ? Json(*r.family_match) : Json(nullptr)},
              {"nodes", r.nodes}};
}

std::string search_summary_line(const SearchReport& r) {
  std::ostringstream s;
  s << "count " << r.found.size() << ", identity " << yes_no(r.contains_identity) << ", minus identity "
    << yes_no(r.contains_minus_identity) << ", closed within bound " << yes_no(r.closed_under_product_within_bound)
    << ", family " << r.family_match.value_or("none");
  return s.str();
}

int cmd_search(const std::string& path, const Globals& g, std::ostream& out) {
  const ProblemDocument doc = load(path, g);
  const SearchReport r = search_auts(torsion_free_spec(doc), search_options(g));
  if (g.json) {
    Json j = search_summary_json(r);
    Json found = Json::array();
    for (const auto& a : r.found) found.push_back(matrix_json(a));
    j["found"] = found;
    emit(out, j);
  } else {
    for (const auto& a : r.found) out << a.to_string() << "\n";
    out << "summary: " << search_summary_line(r) << "\n";
  }
  return ok;
}

int cmd_ext(const std::string& sub, const std::string& literal, const Globals& g, std::ostream& out) {
  if (sub == "square") {
    const IntMatrix b = ext_square(parse_matrix(literal));
    if (g.json)
      emit(out, Json{{"ext_square", matrix_json(b)}});
    else
      out << b.to_string() << "\n";
  } else if (sub == "root") {
    const auto a = ext_root(parse_matrix(literal));
    if (g.json)
      emit(out, Json{{"ext_root", a ? matrix_json(*a) : Json(nullptr)}});
    else
      out << (a ? a->to_string() : std::string("no exterior root")) << "\n";
  } else if (sub == "decomposable") {
    const IntVector coords = parse_vector(literal);
    const std::size_t n = rank_for_pair_count(coords.size());
    const Bivector w{n, coords};
    const bool dec = is_decomposable(w);
    const IntVector rel = plucker_relations(w);
    if (g.json) {
      emit(out, Json{{"n", n}, {"decomposable", dec}, {"plucker_values", vector_json(rel)}});
    } else {
      out << "decomposable: " << yes_no(dec) << "\n";
      out << "plucker values: " << vector_string(rel) << "\n";
    }
  } else {
    throw InvalidInput("ext subcommand must be square, root or decomposable");
  }
  return ok;
}

std::vector<FieldScalar> parse_field_matrix(const std::string& text, const Field& field, std::size_t& n) {
  const auto table = parse_table(text);
  n = table.size();
  if (table[0].size() != n) throw DimensionError("matrix literal must be square");
  std::vector<FieldScalar> entries;
  for (const auto& row : table)
    for (const auto& t : row) entries.push_back(field.from_rational(parse_rational(t)));
  return entries;
}

Json perms_json(const std::vector<Permutation>& perms) {
  Json out = Json::array();
  for (const auto& p : perms) out.push_back(cycle_string(p));
  return out;
}

Json torus_criterion_json(const TorusCriterionReport& r) {
  return Json{{"applicable", r.applicable},
              {"reason", r.reason},
              {"distinct_values", r.distinct_values},
              {"no_inverse_products", r.no_inverse_products},
              {"distinct_witness", pair_pair_json(r.distinct_witness)},
              {"product_witness", pair_pair_json(r.product_witness)},
              {"verdict", r.verdict ? Json(*r.verdict) : Json(nullptr)}};
}

void print_torus_criterion(std::ostream& out, const TorusCriterionReport& r) {
  out << "applicable: " << yes_no(r.applicable);
  if (!r.applicable) out << " (" << r.reason << ")";
  out << "\n";
  if (!r.applicable) return;
  out << "(i) distinct values: " << yes_no(r.distinct_values) << "  witness " << pair_pair_string(r.distinct_witness)
      << "\n";
  out << "(ii) no inverse products: " << yes_no(r.no_inverse_products) << "  witness "
      << pair_pair_string(r.product_witness) << "\n";
  out << "verdict: " << r.verdict.value_or("none") << "\n";
}

int cmd_affine(const std::string& sub, const std::string& path, const std::string& literal, const Globals& g,
               std::ostream& out) {
  const ProblemDocument doc = load(path, g);
  if (doc.mode == Mode::torus) throw InvalidInput("affine commands need a document with mode affine or both");
  const QMatrix q = doc.q_matrix();
  if (sub == "perms") {
    const auto perms = admissible_perms(q);
    const auto witness = has_inverse_pair(q);
    if (g.json) {
      emit(out, Json{{"field", q.field().name()}, {"admissible", perms_json(perms)}, {"inverse_pair", pair_pair_json(witness)}});
    } else {
      out << "admissible permutations (" << perms.size() << "):";
      for (const auto& p : perms) out << " " << cycle_string(p);
      out << "\ninverse pair: " << pair_pair_string(witness) << "\n";
    }
  } else if (sub == "linear-check") {
    if (literal.empty()) throw InvalidInput("linear-check needs a matrix literal");
    std::size_t n = 0;
    auto entries = parse_field_matrix(literal, q.field(), n);
    if (n != q.n()) throw DimensionError("matrix must be " + std::to_string(q.n()) + " x " + std::to_string(q.n()));
    const AlphaMatrix alpha = AlphaMatrix::make(n, q.field(), std::move(entries));
    const bool lin = is_linear_aut(alpha, q);
    const bool rewritten = is_linear_aut_rewritten(alpha, q);
    if (lin != rewritten) throw ConsistencyError("the two forms of the linear-automorphism condition disagree");
    const auto mono = as_monomial(alpha);
    if (g.json) {
      Json j{{"linear_automorphism", lin}, {"monomial", mono.has_value()}};
      j["permutation"] = mono ? Json(cycle_string(mono->perm)) : Json(nullptr);
      emit(out, j);
    } else {
      out << "linear automorphism: " << yes_no(lin) << "\n";
      out << "monomial: " << (mono ? "yes, permutation " + cycle_string(mono->perm) : std::string("no")) << "\n";
    }
  } else if (sub == "hypotheses") {
    const auto r = check_torus_criterion(q);
    if (g.json)
      emit(out, torus_criterion_json(r));
    else
      print_torus_criterion(out, r);
  } else if (sub == "brute") {
    if (!g.budget_given) throw InvalidInput("brute needs --budget");
    const auto auts = brute_force_linear_auts(q, g.budget);
    std::size_t diagonal = 0, monomial = 0;
    for (const auto& a : auts) {
      diagonal += a.is_diagonal();
      monomial += as_monomial(a).has_value();
    }
    if (g.json) {
      Json list = Json::array();
      for (const auto& a : auts) list.push_back(a.to_string());
      emit(out, Json{{"field", q.field().name()},
                     {"group_order", *gl_order(q.n(), q.field().prime)},
                     {"count", auts.size()},
                     {"diagonal", diagonal},
                     {"monomial", monomial},
                     {"automorphisms", list}});
    } else {
      for (const auto& a : auts) out << a.to_string() << "\n";
      out << "summary: " << auts.size() << " linear automorphisms over " << q.field().name() << ", " << diagonal
          << " diagonal, " << monomial << " monomial\n";
    }
  } else {
    throw InvalidInput("affine subcommand must be perms, linear-check, hypotheses or brute");
  }
  return ok;
}

Json rank_bound_json(const RankBoundReport& r) {
  return Json{{"threshold", r.threshold},
              {"bound_met", r.bound_met},
              {"verdict", r.verdict ? Json(*r.verdict) : Json(nullptr)},
              {"center_trivial", r.center_trivial},
              {"permutation_sweep_done", r.permutation_sweep_done},
              {"high_fix_rank", perms_json(r.high_fix_rank)},
              {"permutation_automorphisms", perms_json(r.permutation_automorphisms)},
              {"consistent", r.consistent()}};
}

int cmd_report(const std::string& path, const Globals& g, std::ostream& out) {
  const ProblemDocument doc = load(path, g);
  Json report{{"n", doc.n}, {"mode", to_string(doc.mode)}, {"field", doc.field.name()}};
  std::ostringstream text;
  text << "n = " << doc.n << ", mode " << to_string(doc.mode) << ", field " << doc.field.name() << "\n";

  // Over F_p every multiparameter has finite order, so the lattice data
  // only make sense for torus documents or affine documents over Q.
  if (doc.mode != Mode::affine || doc.field.is_rational()) {
    const MultiparamSpec original = doc.torus_spec();
    Json torus;
    MultiparamSpec spec = original;
    if (!original.torsion_free) {
      const TorsionReduction red = torsion_reduce(original);
      spec = red.spec;
      torus["torsion_reduction_scale"] = integer_json(red.scale);
      text << "torsion: present, analysed on the sublattice scaled by " << red.scale.get_str() << "\n";
    }
    const RelationsMatrix m = build_relations_matrix(spec);
    const std::size_t rank = lambda_rank(spec);
    const auto center = center_lattice(spec);
    torus["torsion_free"] = original.torsion_free;
    torus["l"] = spec.l;
    torus["lambda_rank"] = rank;
    torus["relations_matrix"] = relmat_json(m);
    Json cj = Json::array();
    for (const auto& v : center) cj.push_back(vector_json(v));
    torus["center_lattice"] = cj;
    torus["center_trivial"] = center.empty();
    text << "lambda rank: " << rank << "\n";
    print_relmat(text, m);
    text << "center lattice: ";
    if (center.empty()) text << "trivial";
    for (const auto& v : center) text << vector_string(v) << " ";
    text << "\n";

    if (original.torsion_free) {
      std::optional<std::string> n2;
      if (doc.n == 2) n2 = m.matrix.is_zero() ? "Aut(Z^2, lambda) = GL(2,Z)" : "Aut(Z^2, lambda) = SL(2,Z)";
      torus["n2_verdict"] = n2 ? Json(*n2) : Json(nullptr);
      if (n2) text << "n = 2 verdict: " << *n2 << "\n";

      const auto z2 = z2_case_check(spec);
      torus["z2_verdict"] = z2 ? Json(z2->statement) : Json(nullptr);
      text << "Z/2 case: " << (z2 ? z2->statement : std::string("not applicable")) << "\n";

      if (doc.n >= 2) {
        const auto tb = rank_bound_verdict(spec);
        torus["rank_bound"] = rank_bound_json(tb);
        text << "rank bound C(n-1,2)+1 = " << tb.threshold << ": " << (tb.bound_met ? "met" : "not met") << "\n";
        text << "torus verdict: " << tb.verdict.value_or("none") << "\n";
        if (!tb.consistent()) throw ConsistencyError("rank-bound verdict contradicted by its supporting checks");
      }

      const SearchReport sr = search_auts(spec, search_options(g));
      torus["search"] = search_summary_json(sr);
      text << "search (bound " << sr.bound << "): " << search_summary_line(sr) << "\n";
    }
    report["torus"] = torus;
  }

  if (doc.n >= 3 && doc.n <= 7) {
    const auto audit = fix_rank_audit(doc.n);
    report["fix_rank_audit"] = Json{{"bound", audit.bound},
                                 {"checked", audit.checked},
                                 {"max_fix_rank", audit.max_fix_rank},
                                 {"equality_attainers", audit.equality_attainers.size()},
                                 {"ok", audit.ok()}};
    text << "fixed-rank bound over S_" << doc.n << ": max " << audit.max_fix_rank << " <= " << audit.bound << ", "
         << (audit.ok() ? "ok" : "VIOLATED") << "\n";
  }

  if (doc.mode != Mode::torus) {
    const QMatrix q = doc.q_matrix();
    const auto perms = admissible_perms(q);
    const auto witness = has_inverse_pair(q);
    const auto criterion = check_torus_criterion(q);
    report["affine"] = Json{{"field", q.field().name()},
                            {"admissible_perms", perms_json(perms)},
                            {"inverse_pair", pair_pair_json(witness)},
                            {"hypotheses", torus_criterion_json(criterion)}};
    text << "admissible permutations (" << perms.size() << "):";
    for (const auto& p : perms) text << " " << cycle_string(p);
    text << "\ninverse pair: " << pair_pair_string(witness) << "\n";
    print_torus_criterion(text, criterion);
  }

  if (g.json)
    emit(out, report);
  else
    out << text.str();
  return ok;
}

}  // namespace

IntMatrix parse_matrix(const std::string& text) {
  const auto table = parse_table(text);
  IntMatrix m(table.size(), table[0].size());
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = 0; j < table[i].size(); ++j) m(i, j) = to_integer(table[i][j]);
  return m;
}

IntVector parse_vector(const std::string& text) {
  const auto t = tokens(text);
  if (t.empty()) throw InvalidInput("empty vector literal");
  IntVector v;
  for (const auto& x : t) v.push_back(to_integer(x));
  return v;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return invalid_input;
  } catch (const ConsistencyError& e) {
    err << "internal consistency failure: " << e.what() << "\n";
    return consistency_failure;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return resource_exhausted;
  } catch (const std::exception& e) {
    err << "internal failure: " << e.what() << "\n";
    return consistency_failure;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Automorphisms of quantum tori and quantum affine spaces"};
  app.require_subcommand(1);
  Globals g;
  auto add_common = [&](CLI::App* c) {
    c->add_flag("--json", g.json, "Machine-readable output");
    c->add_option("--bound", g.bound, "Entry bound for searches");
    c->add_option("--budget", g.budget, "Node or matrix budget")->each([&](const std::string&) { g.budget_given = true; });
    c->add_option("--seed", g.seed, "Accepted for scripting; no command randomizes");
    c->add_option("--field", g.field, "Override the document field: Q or a prime");
    c->add_option("--workers", g.workers, "Search worker threads");
  };
  std::string doc, literal, sub;

  auto* relmat = app.add_subcommand("relmat", "Print the relations matrix");
  relmat->add_option("document", doc)->required();
  add_common(relmat);

  auto* check = app.add_subcommand("check-aut", "Test membership of a matrix in Aut(Z^n, lambda)");
  check->add_option("document", doc)->required();
  check->add_option("matrix", literal, "Matrix literal \"a b; c d\"")->required();
  add_common(check);

  auto* search = app.add_subcommand("search", "Enumerate automorphisms with bounded entries");
  search->add_option("document", doc)->required();
  add_common(search);

  auto* ext = app.add_subcommand("ext", "Exterior square tools");
  ext->add_option("action", sub, "square, root or decomposable")->required();
  ext->add_option("literal", literal, "Matrix or bivector literal")->required();
  add_common(ext);

  auto* affine = app.add_subcommand("affine", "Quantum affine space audits");
  affine->add_option("action", sub, "perms, linear-check, hypotheses or brute")->required();
  affine->add_option("document", doc)->required();
  affine->add_option("matrix", literal, "Matrix literal for linear-check");
  add_common(affine);

  auto* report = app.add_subcommand("report", "Full pipeline report");
  report->add_option("document", doc)->required();
  add_common(report);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : invalid_input;
  }

  return guarded(
      [&]() -> int {
        if (*relmat) return cmd_relmat(doc, g, out);
        if (*check) return cmd_check_aut(doc, literal, g, out, err);
        if (*search) return cmd_search(doc, g, out);
        if (*ext) return cmd_ext(sub, literal, g, out);
        if (*affine) return cmd_affine(sub, doc, literal, g, out);
        if (*report) return cmd_report(doc, g, out);
        throw InvalidInput("no command given");
      },
      err);
}

}  // namespace qtaut::cli
