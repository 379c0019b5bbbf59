#include "qtaut/linalg.hpp"

#include <random>

#include "qtaut/errors.hpp"

namespace qtaut {

namespace {

void require_square(const IntMatrix& a, const char* what) {
  if (!a.is_square())
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
}

// Fraction-free row echelon form in place; returns the rank and the
// Bareiss sign (parity of row swaps) through `swaps`.
std::size_t bareiss_echelon(IntMatrix& m, int& swaps) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  Integer prev = 1;
  std::size_t r = 0;
  swaps = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m(p, c)) == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      m.swap_rows(p, r);
      ++swaps;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        m(i, j) = m(r, c) * m(i, j) - m(i, c) * m(r, j);
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      m(i, c) = 0;
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

// Position of the smallest nonzero |entry| in column t (rows >= t) and
// row t (cols >= t). Returns false when both are zero.
bool smallest_in_cross(const IntMatrix& s, std::size_t t, std::size_t& pr, std::size_t& pc) {
  bool found = false;
  Integer best;
  auto consider = [&](std::size_t r, std::size_t c) {
    const Integer& x = s(r, c);
    if (sgn(x) == 0) return;
    if (!found || abs(x) < best) {
      best = abs(x);
      pr = r;
      pc = c;
      found = true;
    }
  };
  for (std::size_t r = t; r < s.rows(); ++r) consider(r, t);
  for (std::size_t c = t + 1; c < s.cols(); ++c) consider(t, c);
  return found;
}

}  // namespace

Integer det(const IntMatrix& a) {
  require_square(a, "det");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  int swaps = 0;
  if (bareiss_echelon(m, swaps) < n) return 0;
  Integer d = m(n - 1, n - 1);
  return swaps % 2 ? Integer(-d) : d;
}

std::size_t rank(const IntMatrix& a) {
  IntMatrix m = a;
  int swaps = 0;
  return bareiss_echelon(m, swaps);
}

std::size_t SnfResult::rank() const { return invariant_factors().size(); }

IntVector SnfResult::invariant_factors() const {
  IntVector d;
  for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) {
    if (sgn(S(i, i)) == 0) break;
    d.push_back(S(i, i));
  }
  return d;
}

SnfResult snf(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  SnfResult out{IntMatrix::identity(rows), m, IntMatrix::identity(cols)};
  IntMatrix& S = out.S;
  IntMatrix& U = out.U;
  IntMatrix& V = out.V;
  Integer q;

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // Global smallest nonzero entry of the trailing block becomes the pivot.
    bool any = false;
    std::size_t pr = t, pc = t;
    Integer best;
    for (std::size_t r = t; r < rows; ++r)
      for (std::size_t c = t; c < cols; ++c)
        if (sgn(S(r, c)) != 0 && (!any || abs(S(r, c)) < best)) {
          best = abs(S(r, c));
          pr = r;
          pc = c;
          any = true;
        }
    if (!any) break;
    S.swap_rows(t, pr);
    U.swap_rows(t, pr);
    S.swap_cols(t, pc);
    V.swap_cols(t, pc);

    for (;;) {
      if (smallest_in_cross(S, t, pr, pc)) {
        S.swap_rows(t, pr);
        U.swap_rows(t, pr);
        S.swap_cols(t, pc);
        V.swap_cols(t, pc);
      }
      bool residue = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (sgn(S(i, t)) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), S(i, t).get_mpz_t(), S(t, t).get_mpz_t());
        S.add_row_multiple(i, t, -q);
        U.add_row_multiple(i, t, -q);
        residue = residue || sgn(S(i, t)) != 0;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (sgn(S(t, j)) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), S(t, j).get_mpz_t(), S(t, t).get_mpz_t());
        S.add_col_multiple(j, t, -q);
        V.add_col_multiple(j, t, -q);
        residue = residue || sgn(S(t, j)) != 0;
      }
      if (residue) continue;

      // Row and column are clear; enforce d_t | every trailing entry.
      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(S(i, j).get_mpz_t(), S(t, t).get_mpz_t())) {
            S.add_row_multiple(t, i, 1);
            U.add_row_multiple(t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (sgn(S(t, t)) < 0) {
      S.negate_row(t);
      U.negate_row(t);
    }
  }
  return out;
}

std::vector<IntVector> kernel_basis(const IntMatrix& a) {
  const SnfResult f = snf(a);
  const std::size_t r = f.rank();
  std::vector<IntVector> basis;
  for (std::size_t c = r; c < a.cols(); ++c) {
    IntVector v = f.V.column(c);
    for (const auto& x : v) {
      if (sgn(x) == 0) continue;
      if (sgn(x) < 0)
        for (auto& y : v) y = -y;
      break;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

bool is_unimodular(const IntMatrix& a) {
  require_square(a, "is_unimodular");
  return abs(det(a)) == 1;
}

IntMatrix inverse_unimodular(const IntMatrix& a) {
  require_square(a, "inverse_unimodular");
  const std::size_t n = a.rows();
  // Gauss-Jordan over Q on [A | I].
  std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j);
    m[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) throw InvalidInput("inverse_unimodular: matrix is singular");
    std::swap(m[p], m[c]);
    const mpq_class inv = 1 / m[c][c];
    for (auto& x : m[c]) x *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || sgn(m[i][c]) == 0) continue;
      const mpq_class f = m[i][c];
      for (std::size_t j = c; j < 2 * n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  IntMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const mpq_class& x = m[i][n + j];
      if (x.get_den() != 1) throw InvalidInput("inverse_unimodular: matrix is not unimodular");
      out(i, j) = x.get_num();
    }
  return out;
}

IntMatrix random_unimodular(std::size_t n, std::size_t steps, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("random_unimodular: n must be at least 1");
  std::mt19937_64 rng(seed);
  IntMatrix a = IntMatrix::identity(n);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> mult(-2, 1);
  std::uniform_int_distribution<int> kind(0, 7);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t i = pick(rng);
    if (n == 1 || kind(rng) == 0) {
      a.negate_row(i);
      continue;
    }
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    int k = mult(rng);
    if (k >= 0) ++k;  // k in {-2,-1,1,2}
    a.add_row_multiple(i, j, Integer(k));
  }
  return a;
}

}  // namespace qtaut
