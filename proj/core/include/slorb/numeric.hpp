#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace slorb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Raised when truncated arithmetic cannot certify a result (cancellation
// exhausted all significant digits, or a decision needs digits beyond the
// working precision).
struct precision_error : std::runtime_error {
  explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised on violated preconditions (division by exact zero, inseparable
// descriptors, wrong ambient, ...).
struct value_error : std::runtime_error {
  explicit value_error(const std::string& what) : std::runtime_error(what) {}
};

inline Rational q_pow(long q, long e) {
  Rational r = 1;
  BigInt p = 1;
  for (long i = 0; i < (e < 0 ? -e : e); ++i) p *= q;
  if (e >= 0) return Rational(p);
  return Rational(1, p);
}

std::string to_string(const Rational& r);

// Exact value a + b*sqrt(base).  Transfer factors live in q^{Z/2}, so their
// products with rational orbital integrals need sqrt(q) tracked exactly.
// When base is a perfect square the sqrt part collapses into the rational
// part and b stays 0.
class QSqrt {
 public:
  QSqrt() : a_(0), b_(0), base_(0) {}
  QSqrt(Rational a) : a_(std::move(a)), b_(0), base_(0) {}
  QSqrt(Rational a, Rational b, long base);

  static QSqrt sqrt_of(const Rational& x, long base);

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt_part() const { return b_; }
  long base() const { return base_; }

  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  QSqrt operator+(const QSqrt& o) const;
  QSqrt operator-(const QSqrt& o) const;
  QSqrt operator*(const QSqrt& o) const;
  QSqrt operator*(const Rational& r) const { return QSqrt(a_ * r, b_ * r, base_); }
  QSqrt inverse() const;
  bool operator==(const QSqrt& o) const;
  bool operator!=(const QSqrt& o) const { return !(*this == o); }

  std::string str() const;

 private:
  void merge_base(const QSqrt& o, long& out_base) const;
  Rational a_, b_;
  long base_;  // 0 when the value is plain rational
};

}  // namespace slorb
