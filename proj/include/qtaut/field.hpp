#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace qtaut {

/// Exact element of Q or of a prime field F_p. Mixing fields throws.
class FieldScalar {
 public:
  FieldScalar() = default;  // rational zero
  static FieldScalar rational(const mpq_class& q);
  static FieldScalar modular(long residue, std::uint64_t p);

  bool is_rational() const { return p_ == 0; }
  std::uint64_t prime() const { return p_; }
  const mpq_class& as_rational() const { return q_; }
  std::uint64_t residue() const { return r_; }

  bool is_zero() const;
  bool is_one() const;
  FieldScalar inverse() const;

  FieldScalar operator-() const;
  friend FieldScalar operator+(const FieldScalar& a, const FieldScalar& b);
  friend FieldScalar operator-(const FieldScalar& a, const FieldScalar& b);
  friend FieldScalar operator*(const FieldScalar& a, const FieldScalar& b);
  friend FieldScalar operator/(const FieldScalar& a, const FieldScalar& b);
  friend bool operator==(const FieldScalar& a, const FieldScalar& b);

  std::string to_string() const;

 private:
  mpq_class q_ = 0;
  std::uint64_t p_ = 0;
  std::uint64_t r_ = 0;
};

/// Q (prime == 0) or F_p.
struct Field {
  std::uint64_t prime = 0;

  static Field rationals() { return {}; }
  /// Throws InvalidInput unless p is prime.
  static Field prime_field(std::uint64_t p);

  bool is_rational() const { return prime == 0; }
  std::uint64_t characteristic() const { return prime; }
  FieldScalar from_int(long v) const;
  /// Maps a rational into the field; throws if the denominator vanishes mod p.
  FieldScalar from_rational(const mpq_class& q) const;
  bool contains(const FieldScalar& x) const { return x.prime() == prime; }
  std::string name() const;

  friend bool operator==(const Field&, const Field&) = default;
};

}  // namespace qtaut
