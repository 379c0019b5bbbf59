#include "qtaut/field.hpp"

#include "qtaut/errors.hpp"

namespace qtaut {

namespace {

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  unsigned __int128 result = 1, base = b % p;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

void same_field(const FieldScalar& a, const FieldScalar& b) {
  if (a.prime() != b.prime()) throw InvalidInput("field mismatch between scalars");
}

}  // namespace

FieldScalar FieldScalar::rational(const mpq_class& q) {
  FieldScalar x;
  x.q_ = q;
  x.q_.canonicalize();
  return x;
}

FieldScalar FieldScalar::modular(long residue, std::uint64_t p) {
  if (p < 2) throw InvalidInput("modulus must be a prime");
  FieldScalar x;
  x.p_ = p;
  const long m = static_cast<long>(p);
  x.r_ = static_cast<std::uint64_t>(((residue % m) + m) % m);
  return x;
}

bool FieldScalar::is_zero() const { return is_rational() ? sgn(q_) == 0 : r_ == 0; }

bool FieldScalar::is_one() const { return is_rational() ? q_ == 1 : r_ == 1; }

FieldScalar FieldScalar::inverse() const {
  if (is_zero()) throw InvalidInput("division by zero in field arithmetic");
  if (is_rational()) return rational(1 / q_);
  FieldScalar x = *this;
  x.r_ = mod_pow(r_, p_ - 2, p_);
  return x;
}

FieldScalar FieldScalar::operator-() const {
  FieldScalar x = *this;
  if (is_rational())
    x.q_ = -q_;
  else
    x.r_ = r_ == 0 ? 0 : p_ - r_;
  return x;
}

FieldScalar operator+(const FieldScalar& a, const FieldScalar& b) {
  same_field(a, b);
  FieldScalar x = a;
  if (a.is_rational())
    x.q_ = a.q_ + b.q_;
  else
    x.r_ = (a.r_ + b.r_) % a.p_;
  return x;
}

FieldScalar operator-(const FieldScalar& a, const FieldScalar& b) { return a + (-b); }

FieldScalar operator*(const FieldScalar& a, const FieldScalar& b) {
  same_field(a, b);
  FieldScalar x = a;
  if (a.is_rational())
    x.q_ = a.q_ * b.q_;
  else
    x.r_ = static_cast<std::uint64_t>(static_cast<unsigned __int128>(a.r_) * b.r_ % a.p_);
  return x;
}

FieldScalar operator/(const FieldScalar& a, const FieldScalar& b) {
  same_field(a, b);
  return a * b.inverse();
}

bool operator==(const FieldScalar& a, const FieldScalar& b) {
  same_field(a, b);
  return a.is_rational() ? a.q_ == b.q_ : a.r_ == b.r_;
}

std::string FieldScalar::to_string() const { return is_rational() ? q_.get_str() : std::to_string(r_); }

Field Field::prime_field(std::uint64_t p) {
  if (p < 2) throw InvalidInput("field characteristic must be a prime");
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw InvalidInput(std::to_string(p) + " is not prime");
  return {p};
}

FieldScalar Field::from_int(long v) const {
  return is_rational() ? FieldScalar::rational(mpq_class(v)) : FieldScalar::modular(v, prime);
}

FieldScalar Field::from_rational(const mpq_class& q) const {
  if (is_rational()) return FieldScalar::rational(q);
  mpz_class num = q.get_num() % mpz_class(prime);
  mpz_class den = q.get_den() % mpz_class(prime);
  if (sgn(den) == 0) throw InvalidInput("denominator of " + q.get_str() + " vanishes in F_" + std::to_string(prime));
  return FieldScalar::modular(num.get_si(), prime) / FieldScalar::modular(den.get_si(), prime);
}

std::string Field::name() const { return is_rational() ? "Q" : "F_" + std::to_string(prime); }

}  // namespace qtaut
