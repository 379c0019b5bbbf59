#include "qtaut/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "qtaut/errors.hpp"

namespace qtaut {

Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

bool is_identity(const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

void validate_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (std::size_t x : p) {
    if (x >= p.size() || seen[x]) throw InvalidInput("not a permutation");
    seen[x] = true;
  }
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) throw DimensionError("compose: permutations of different degree");
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[q[i]];
  return r;
}

Permutation inverse(const Permutation& p) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = i;
  return r;
}

std::size_t order(const Permutation& p) {
  std::size_t o = 1;
  for (const auto& c : cycles(p)) o = std::lcm(o, c.size());
  return o;
}

std::vector<std::vector<std::size_t>> cycles(const Permutation& p) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t start = 0; start < p.size(); ++start) {
    if (seen[start] || p[start] == start) continue;
    std::vector<std::size_t> cyc;
    for (std::size_t x = start; !seen[x]; x = p[x]) {
      seen[x] = true;
      cyc.push_back(x);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

std::vector<std::size_t> fixed_points(const Permutation& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] == i) out.push_back(i);
  return out;
}

bool is_transposition(const Permutation& p) {
  const auto cs = cycles(p);
  return cs.size() == 1 && cs[0].size() == 2;
}

std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<Permutation> out;
  Permutation p = identity_permutation(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

IntMatrix permutation_matrix(const Permutation& p) {
  IntMatrix m(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m(p[i], i) = 1;
  return m;
}

std::string cycle_string(const Permutation& p) {
  const auto cs = cycles(p);
  if (cs.empty()) return "()";
  std::ostringstream out;
  for (const auto& c : cs) {
    out << '(';
    for (std::size_t k = 0; k < c.size(); ++k) out << (k ? " " : "") << c[k] + 1;
    out << ')';
  }
  return out.str();
}

Permutation parse_cycles(const std::string& text, std::size_t n) {
  Permutation p = identity_permutation(n);
  if (text == "id") return p;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    if (text[pos] != '(') throw InvalidInput("cycle notation: expected '(' in \"" + text + "\"");
    const std::size_t close = text.find(')', pos);
    if (close == std::string::npos) throw InvalidInput("cycle notation: missing ')'");
    std::string body = text.substr(pos + 1, close - pos - 1);
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream in(body);
    std::vector<std::size_t> cyc;
    long x;
    while (in >> x) {
      if (x < 1 || static_cast<std::size_t>(x) > n) throw InvalidInput("cycle notation: point out of range");
      cyc.push_back(static_cast<std::size_t>(x - 1));
    }
    if (!in.eof()) throw InvalidInput("cycle notation: bad token in \"" + body + "\"");
    std::vector<std::size_t> sorted = cyc;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidInput("cycle notation: repeated point in a cycle");
    Permutation c = identity_permutation(n);
    for (std::size_t k = 0; k < cyc.size(); ++k) c[cyc[k]] = cyc[(k + 1) % cyc.size()];
    validate_permutation(c);
    // Cycles written left to right compose right to left: (a)(b) = a o b.
    p = compose(p, c);
    pos = close + 1;
  }
  return p;
}

}  // namespace qtaut
