#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace qtaut {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

/// Dense row-major matrix of arbitrary-precision integers.
///
/// Every matrix in the library (A, its exterior square, relations matrices,
/// form matrices, the Plücker polarization) is carried by this type. All
/// arithmetic is exact.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<IntVector>& rows);
  static IntMatrix from_columns(const std::vector<IntVector>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool is_zero() const;

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector row(std::size_t r) const;
  IntVector column(std::size_t c) const;
  IntMatrix transpose() const;
  /// Submatrix of the listed rows and columns, in the given order.
  IntMatrix select(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;

  IntMatrix operator-() const;
  IntMatrix& operator+=(const IntMatrix& other);
  IntMatrix& operator-=(const IntMatrix& other);
  friend IntMatrix operator+(IntMatrix a, const IntMatrix& b) { return a += b; }
  friend IntMatrix operator-(IntMatrix a, const IntMatrix& b) { return a -= b; }
  friend IntMatrix operator*(const Integer& k, IntMatrix a);

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  /// Lexicographic on (rows, cols, entries); used for canonical orderings.
  friend bool operator<(const IntMatrix& a, const IntMatrix& b);

  Integer max_abs() const;
  std::string to_string() const;

  // Elementary operations, used by the normal-form routines.
  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& k);  // row dst += k*row src
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& k);  // col dst += k*col src
  void negate_row(std::size_t r);
  void negate_col(std::size_t c);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);
inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) { return mat_mul(a, b); }
IntVector mat_vec(const IntMatrix& a, const IntVector& v);

}  // namespace qtaut
