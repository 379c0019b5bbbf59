#include "qtaut/exterior.hpp"

#include <string>

#include "qtaut/errors.hpp"
#include "qtaut/linalg.hpp"

namespace qtaut {

std::size_t pair_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

std::size_t pair_position(std::size_t n, PairIndex p) {
  if (!(p.i < p.j && p.j < n)) throw InvalidInput("pair index out of range");
  // Pairs starting with 0..i-1 precede (i, *).
  return p.i * n - p.i * (p.i + 1) / 2 + (p.j - p.i - 1);
}

PairIndex pair_at(std::size_t n, std::size_t position) {
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t row = n - 1 - i;
    if (position < row) return {i, i + 1 + position};
    position -= row;
  }
  throw InvalidInput("pair position out of range");
}

std::size_t rank_for_pair_count(std::size_t count) {
  for (std::size_t n = 2; pair_count(n) <= count; ++n)
    if (pair_count(n) == count) return n;
  throw InvalidInput(std::to_string(count) + " is not a binomial coefficient C(n,2)");
}

Bivector Bivector::zero(std::size_t n) { return {n, IntVector(pair_count(n), Integer(0))}; }

Bivector Bivector::basis(std::size_t n, PairIndex p) {
  Bivector w = zero(n);
  w.coords[pair_position(n, p)] = 1;
  return w;
}

bool Bivector::is_zero() const {
  for (const auto& x : coords)
    if (sgn(x) != 0) return false;
  return true;
}

Bivector wedge(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw DimensionError("wedge: length mismatch");
  const std::size_t n = a.size();
  Bivector w = Bivector::zero(n);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) w.coords[pos++] = a[i] * b[j] - a[j] * b[i];
  return w;
}

Bivector operator+(const Bivector& a, const Bivector& b) {
  if (a.n != b.n) throw DimensionError("bivector sum: rank mismatch");
  Bivector w = a;
  for (std::size_t k = 0; k < w.coords.size(); ++k) w.coords[k] += b.coords[k];
  return w;
}

IntMatrix ext_square(const IntMatrix& a) {
  if (!a.is_square()) throw DimensionError("ext_square: matrix must be square");
  const std::size_t n = a.rows();
  if (n < 2) throw DimensionError("ext_square: n must be at least 2");
  const std::size_t big = pair_count(n);
  IntMatrix out(big, big);
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++row) {
      std::size_t col = 0;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l, ++col)
          out(row, col) = a(i, k) * a(j, l) - a(i, l) * a(j, k);
    }
  return out;
}

IntMatrix bivector_to_antisym(const Bivector& w) {
  if (w.coords.size() != pair_count(w.n)) throw DimensionError("bivector has wrong coordinate count");
  IntMatrix m(w.n, w.n);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < w.n; ++i)
    for (std::size_t j = i + 1; j < w.n; ++j, ++pos) {
      m(i, j) = w.coords[pos];
      m(j, i) = -w.coords[pos];
    }
  return m;
}

Bivector antisym_to_bivector(const IntMatrix& m) {
  if (!m.is_square()) throw DimensionError("antisym_to_bivector: matrix must be square");
  const std::size_t n = m.rows();
  Bivector w = Bivector::zero(n);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(m(i, i)) != 0) throw InvalidInput("antisym_to_bivector: nonzero diagonal");
    for (std::size_t j = i + 1; j < n; ++j, ++pos) {
      if (m(i, j) != -m(j, i)) throw InvalidInput("antisym_to_bivector: matrix is not antisymmetric");
      w.coords[pos] = m(i, j);
    }
  }
  return w;
}

bool is_decomposable(const Bivector& w) {
  if (w.is_zero()) throw InvalidInput("is_decomposable: zero bivector");
  return rank(bivector_to_antisym(w)) == 2;
}

IntVector plucker_relations(const Bivector& w) {
  const std::size_t n = w.n;
  auto x = [&](std::size_t a, std::size_t b) -> const Integer& { return w.coords[pair_position(n, {a, b})]; };
  IntVector out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l)
          out.push_back(x(i, j) * x(k, l) - x(i, k) * x(j, l) + x(i, l) * x(j, k));
  return out;
}

bool plucker_relations_vanish(const Bivector& w) {
  for (const auto& v : plucker_relations(w))
    if (sgn(v) != 0) return false;
  return true;
}

Integer plucker_form_n4(const Bivector& w) {
  if (w.n != 4) throw DimensionError("plucker_form_n4: n must be 4");
  const auto& x = w.coords;  // order 12 13 14 23 24 34
  return x[0] * x[5] - x[1] * x[4] + x[2] * x[3];
}

IntMatrix polarization_matrix_n4() {
  return IntMatrix{{0, 0, 0, 0, 0, 1},  {0, 0, 0, 0, -1, 0}, {0, 0, 0, 1, 0, 0},
                   {0, 0, 1, 0, 0, 0},  {0, -1, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 0}};
}

const char* to_string(IsometrySign s) {
  switch (s) {
    case IsometrySign::plus: return "plus";
    case IsometrySign::minus: return "minus";
    case IsometrySign::no: return "no";
  }
  return "no";
}

IsometrySign is_plucker_isometry(const IntMatrix& b) {
  if (b.rows() != 6 || b.cols() != 6) throw DimensionError("is_plucker_isometry: expected a 6x6 matrix");
  const IntMatrix p = polarization_matrix_n4();
  const IntMatrix g = b.transpose() * p * b;
  if (g == p) return IsometrySign::plus;
  if (g == -p) return IsometrySign::minus;
  return IsometrySign::no;
}

namespace {

IntVector primitive(IntVector v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (sgn(g) == 0) return v;
  for (auto& x : v) x /= g;
  return v;
}

// Two independent columns spanning the (rank 2) column space of w, or empty.
std::optional<std::pair<IntVector, IntVector>> plane_of(const Bivector& w) {
  const IntMatrix m = bivector_to_antisym(w);
  if (w.is_zero() || rank(m) != 2) return std::nullopt;
  for (std::size_t a = 0; a < m.cols(); ++a)
    for (std::size_t b = a + 1; b < m.cols(); ++b) {
      IntMatrix two = IntMatrix::from_columns({m.column(a), m.column(b)}, m.rows());
      if (rank(two) == 2) return std::make_pair(m.column(a), m.column(b));
    }
  return std::nullopt;
}

bool in_span(const std::pair<IntVector, IntVector>& plane, const IntVector& v) {
  return rank(IntMatrix::from_columns({plane.first, plane.second, v}, v.size())) == 2;
}

// Common line of two planes, as a primitive vector.
std::optional<IntVector> intersect(const std::pair<IntVector, IntVector>& p,
                                   const std::pair<IntVector, IntVector>& q) {
  const std::size_t n = p.first.size();
  const IntMatrix stacked = IntMatrix::from_columns({p.first, p.second, q.first, q.second}, n);
  const auto ker = kernel_basis(stacked);
  if (ker.size() != 1) return std::nullopt;
  IntVector v(n, Integer(0));
  for (std::size_t r = 0; r < n; ++r) v[r] = ker[0][0] * p.first[r] + ker[0][1] * p.second[r];
  v = primitive(std::move(v));
  for (const auto& x : v)
    if (sgn(x) != 0) return v;
  return std::nullopt;
}

// c with target == c * base exactly, if such an integer exists.
std::optional<Integer> exact_ratio(const Bivector& target, const Bivector& base) {
  std::optional<Integer> c;
  for (std::size_t k = 0; k < base.coords.size(); ++k) {
    if (sgn(base.coords[k]) == 0) continue;
    if (!mpz_divisible_p(target.coords[k].get_mpz_t(), base.coords[k].get_mpz_t())) return std::nullopt;
    c = target.coords[k] / base.coords[k];
    break;
  }
  if (!c) return std::nullopt;
  for (std::size_t k = 0; k < base.coords.size(); ++k)
    if (target.coords[k] != *c * base.coords[k]) return std::nullopt;
  return c;
}

}  // namespace

std::optional<IntMatrix> ext_root(const IntMatrix& b) {
  if (!b.is_square()) throw DimensionError("ext_root: matrix must be square");
  const std::size_t n = rank_for_pair_count(b.rows());
  if (n < 3) throw InvalidInput("ext_root: requires n >= 3 (N = C(n,2) >= 3)");
  if (!is_unimodular(b)) throw InvalidInput("ext_root: matrix is not unimodular");

  auto column_bivector = [&](std::size_t i, std::size_t j) {
    return Bivector{n, b.column(pair_position(n, {i, j}))};
  };

  // Column (ij) is a_i ^ a_j, whose antisymmetric matrix has column space
  // span(a_i, a_j). The line of a_k is the common line of those planes.
  std::vector<std::vector<std::optional<std::pair<IntVector, IntVector>>>> planes(n);
  for (auto& row : planes) row.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto plane = plane_of(column_bivector(i, j));
      if (!plane) return std::nullopt;
      planes[i][j] = plane;
      planes[j][i] = plane;
    }

  std::vector<IntVector> line(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) others.push_back(j);
    auto v = intersect(*planes[k][others[0]], *planes[k][others[1]]);
    if (!v) return std::nullopt;
    for (std::size_t t = 2; t < others.size(); ++t)
      if (!in_span(*planes[k][others[t]], *v)) return std::nullopt;
    line[k] = std::move(*v);
  }

  // a_k = t_k * line_k with t_i t_j = c_ij.
  std::vector<std::vector<Integer>> c(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto ratio = exact_ratio(column_bivector(i, j), wedge(line[i], line[j]));
      if (!ratio || sgn(*ratio) == 0) return std::nullopt;
      c[i][j] = c[j][i] = *ratio;
    }
  const Integer num = c[0][1] * c[0][2];
  if (!mpz_divisible_p(num.get_mpz_t(), c[1][2].get_mpz_t())) return std::nullopt;
  const Integer t0_sq = num / c[1][2];
  if (sgn(t0_sq) <= 0 || !mpz_perfect_square_p(t0_sq.get_mpz_t())) return std::nullopt;
  const Integer t0 = sqrt(t0_sq);

  std::vector<IntVector> cols(n);
  for (std::size_t k = 0; k < n; ++k) {
    Integer t = t0;
    if (k != 0) {
      if (!mpz_divisible_p(c[0][k].get_mpz_t(), t0.get_mpz_t())) return std::nullopt;
      t = c[0][k] / t0;
    }
    cols[k] = line[k];
    for (auto& x : cols[k]) x *= t;
  }
  IntMatrix a = IntMatrix::from_columns(cols, n);
  if (ext_square(a) != b) return std::nullopt;

  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t col = 0; col < n; ++col) {
      if (sgn(a(r, col)) == 0) continue;
      if (sgn(a(r, col)) < 0) a = -a;
      return a;
    }
  return a;
}

}  // namespace qtaut
