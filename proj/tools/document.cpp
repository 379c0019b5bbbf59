#include "document.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "qtaut/errors.hpp"

namespace qtaut::cli {

namespace {

Integer parse_integer(const std::string& text) {
  Integer v;
  if (text.empty() || v.set_str(text, 10) != 0) throw InvalidInput("not an integer: '" + text + "'");
  return v;
}

std::string scalar(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) throw InvalidInput(what + " must be a scalar");
  return node.Scalar();
}

IntVector integer_list(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) throw InvalidInput(what + " must be a list of integers");
  IntVector out;
  for (const auto& x : node) out.push_back(parse_integer(scalar(x, what)));
  return out;
}

ExponentVector parse_exponent(const YAML::Node& node, std::size_t l, const std::string& key) {
  ExponentVector v;
  if (node.IsSequence()) {
    v.free = integer_list(node, "relation " + key);
  } else if (node.IsMap()) {
    if (!node["free"]) throw InvalidInput("relation " + key + " needs a 'free' list");
    v.free = integer_list(node["free"], "relation " + key);
    if (const auto t = node["torsion"]) {
      if (!t.IsMap() || !t["order"] || !t["residue"])
        throw InvalidInput("relation " + key + ": torsion needs 'order' and 'residue'");
      v.torsion = TorsionPart{parse_integer(scalar(t["order"], "order")), parse_integer(scalar(t["residue"], "residue"))};
    }
  } else {
    throw InvalidInput("relation " + key + " must be a list or a map");
  }
  if (v.free.size() != l)
    throw InvalidInput("relation " + key + " has " + std::to_string(v.free.size()) + " exponents, rank is " +
                       std::to_string(l));
  return v;
}

MultiparamSpec parse_lambda(const YAML::Node& node, std::size_t n) {
  if (!node.IsMap() || !node["rank"]) throw InvalidInput("lambda needs 'rank'");
  MultiparamSpec spec;
  spec.n = n;
  const long l = std::stol(scalar(node["rank"], "rank"));
  if (l < 0) throw InvalidInput("lambda rank must be non-negative");
  spec.l = static_cast<std::size_t>(l);
  if (const auto rel = node["relations"]) {
    if (!rel.IsMap()) throw InvalidInput("lambda.relations must be a map");
    for (const auto& kv : rel) {
      const std::string key = scalar(kv.first, "pair key");
      const PairIndex p = parse_pair_key(key, n);
      if (spec.rel.count(p)) throw InvalidInput("duplicate pair " + key);
      ExponentVector v = parse_exponent(kv.second, spec.l, key);
      if (v.torsion) spec.torsion_free = false;
      spec.rel[p] = std::move(v);
    }
  }
  spec.validate();
  return spec;
}

std::size_t nth_prime(std::size_t s) {
  std::size_t count = 0;
  for (std::size_t c = 2;; ++c) {
    bool prime = true;
    for (std::size_t d = 2; d * d <= c; ++d)
      if (c % d == 0) {
        prime = false;
        break;
      }
    if (prime && count++ == s) return c;
  }
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::torus: return "torus";
    case Mode::affine: return "affine";
    case Mode::both: return "both";
  }
  return "?";
}

PairIndex parse_pair_key(const std::string& key, std::size_t n) {
  const auto comma = key.find(',');
  if (comma == std::string::npos) throw InvalidInput("pair key '" + key + "' must look like \"i,j\"");
  long i = 0, j = 0;
  try {
    std::size_t used = 0;
    const std::string a = key.substr(0, comma), b = key.substr(comma + 1);
    i = std::stol(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    j = std::stol(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
  } catch (const std::logic_error&) {
    throw InvalidInput("pair key '" + key + "' must look like \"i,j\"");
  }
  if (!(1 <= i && i < j && static_cast<std::size_t>(j) <= n))
    throw InvalidInput("pair key '" + key + "' must satisfy 1 <= i < j <= " + std::to_string(n));
  return {static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)};
}

Rational parse_rational(const std::string& text) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0 || q.get_den() == 0) throw InvalidInput("not a rational: '" + text + "'");
  q.canonicalize();
  return q;
}

Field parse_field(const std::string& text) {
  if (text == "Q" || text == "rational" || text == "0") return Field::rationals();
  std::size_t used = 0;
  unsigned long long p = 0;
  try {
    p = std::stoull(text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw InvalidInput("field must be 'Q' or a prime, got '" + text + "'");
  return Field::prime_field(p);
}

ProblemDocument parse_document(const std::string& text) {
  YAML::Node loaded;
  try {
    loaded = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw InvalidInput(std::string("document is not well formed: ") + e.what());
  }
  const YAML::Node root = loaded;
  if (!root.IsMap()) throw InvalidInput("document must be a map");
  for (const auto& kv : root) {
    const std::string k = kv.first.as<std::string>();
    if (k != "n" && k != "mode" && k != "lambda" && k != "rational_q" && k != "field" && k != "name" &&
        k != "note")
      throw InvalidInput("unknown document key '" + k + "'");
  }
  ProblemDocument doc;
  if (!root["n"]) throw InvalidInput("document needs 'n'");
  try {
    const long n = std::stol(scalar(root["n"], "n"));
    if (n < 1) throw InvalidInput("n must be positive");
    doc.n = static_cast<std::size_t>(n);
  } catch (const std::logic_error&) {
    throw InvalidInput("n must be a positive integer");
  }
  if (const auto m = root["mode"]) {
    const std::string s = scalar(m, "mode");
    if (s == "torus") doc.mode = Mode::torus;
    else if (s == "affine") doc.mode = Mode::affine;
    else if (s == "both") doc.mode = Mode::both;
    else throw InvalidInput("mode must be torus, affine or both");
  }
  if (const auto f = root["field"]) {
    if (f.IsMap()) {
      if (!f["prime"]) throw InvalidInput("field map needs 'prime'");
      doc.field = parse_field(scalar(f["prime"], "prime"));
    } else {
      doc.field = parse_field(scalar(f, "field"));
    }
  }
  if (const auto l = root["lambda"]) doc.lambda = parse_lambda(l, doc.n);
  if (const auto q = root["rational_q"]) {
    if (!q.IsMap()) throw InvalidInput("rational_q must be a map");
    std::map<PairIndex, Rational> values;
    for (const auto& kv : q) {
      const std::string key = scalar(kv.first, "pair key");
      const PairIndex p = parse_pair_key(key, doc.n);
      if (values.count(p)) throw InvalidInput("duplicate pair " + key);
      const Rational v = parse_rational(scalar(kv.second, "value of " + key));
      if (v == 0) throw InvalidInput("multiparameter " + key + " is zero");
      values[p] = v;
    }
    doc.rational_q = std::move(values);
  }
  if (doc.mode == Mode::torus && doc.lambda.has_value() == doc.rational_q.has_value())
    throw InvalidInput("torus documents need exactly one of 'lambda' and 'rational_q'");
  if (doc.mode != Mode::torus && !doc.lambda && !doc.rational_q)
    throw InvalidInput("affine documents need 'rational_q' or 'lambda'");
  if (doc.lambda && doc.rational_q) throw InvalidInput("give 'lambda' or 'rational_q', not both");
  return doc;
}

ProblemDocument load_document(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read document '" + path + "'");
    buf << in.rdbuf();
  }
  return parse_document(buf.str());
}

MultiparamSpec ProblemDocument::torus_spec() const {
  if (lambda) return *lambda;
  return rationals_to_spec(n, *rational_q);
}

QMatrix ProblemDocument::q_matrix() const {
  std::map<PairIndex, FieldScalar> upper;
  if (rational_q) {
    for (const auto& [p, v] : *rational_q) upper[p] = field.from_rational(v);
  } else {
    const MultiparamSpec& spec = *lambda;
    if (!spec.torsion_free) throw InvalidInput("affine realization of a lambda spec needs it torsion-free");
    for (const auto& [p, v] : spec.rel) {
      Rational value = 1;
      for (std::size_t s = 0; s < spec.l; ++s) {
        Rational base = static_cast<unsigned long>(nth_prime(s));
        const long e = v.free[s].get_si();
        mpz_class num, den = 1;
        mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
        value *= e < 0 ? Rational(den, num) : Rational(num, den);
      }
      value.canonicalize();
      upper[p] = field.from_rational(value);
    }
  }
  for (const auto& [p, v] : upper)
    if (v.is_zero()) throw InvalidInput("multiparameter vanishes in " + field.name());
  return QMatrix::from_upper(n, field, upper);
}

}  // namespace qtaut::cli
