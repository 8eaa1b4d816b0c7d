#include "slorb/numeric.hpp"

#include <cmath>
#include <sstream>

namespace slorb {

namespace {
bool perfect_square(long n, long& root) {
  if (n < 0) return false;
  long r = static_cast<long>(std::lround(std::sqrt(static_cast<double>(n))));
  for (long c = r - 2; c <= r + 2; ++c)
    if (c >= 0 && c * c == n) {
      root = c;
      return true;
    }
  return false;
}
}  // namespace

QSqrt::QSqrt(Rational a, Rational b, long base) : a_(std::move(a)), b_(std::move(b)), base_(base) {
  long r;
  if (b_ != 0 && perfect_square(base_, r)) {
    a_ += b_ * r;
    b_ = 0;
  }
  if (b_ == 0) base_ = 0;
}

QSqrt QSqrt::sqrt_of(const Rational& x, long base) {
  // exact square root of base^e (x must be +-a power of base); used for the
  // normalized eigenvalue-gap factor q^{-v/2}
  if (x == 0) return QSqrt(Rational(0));
  Rational v = x;
  long e = 0;
  while (v > 1) {
    v /= base;
    ++e;
  }
  while (v < 1) {
    v *= base;
    --e;
  }
  if (v != 1) throw value_error("QSqrt::sqrt_of expects a power of the base");
  Rational half = q_pow(base, e / 2);
  if (e % 2 == 0) return QSqrt(half);
  if (e < 0 && e % 2 != 0) half = q_pow(base, (e - 1) / 2);
  return QSqrt(Rational(0), half, base);
}

void QSqrt::merge_base(const QSqrt& o, long& out_base) const {
  if (base_ != 0 && o.base_ != 0 && base_ != o.base_)
    throw value_error("QSqrt values with different bases");
  out_base = base_ != 0 ? base_ : o.base_;
}

QSqrt QSqrt::operator+(const QSqrt& o) const {
  long base;
  merge_base(o, base);
  return QSqrt(a_ + o.a_, b_ + o.b_, base);
}

QSqrt QSqrt::operator-(const QSqrt& o) const {
  long base;
  merge_base(o, base);
  return QSqrt(a_ - o.a_, b_ - o.b_, base);
}

QSqrt QSqrt::operator*(const QSqrt& o) const {
  long base;
  merge_base(o, base);
  return QSqrt(a_ * o.a_ + b_ * o.b_ * base, a_ * o.b_ + b_ * o.a_, base);
}

QSqrt QSqrt::inverse() const {
  if (is_zero()) throw value_error("inverse of zero QSqrt");
  Rational den = a_ * a_ - b_ * b_ * base_;
  if (den == 0) throw value_error("non-invertible QSqrt");
  return QSqrt(a_ / den, -b_ / den, base_);
}

bool QSqrt::operator==(const QSqrt& o) const {
  return a_ == o.a_ && b_ == o.b_ && (b_ == 0 || base_ == o.base_);
}

std::string QSqrt::str() const {
  std::ostringstream os;
  if (b_ == 0) {
    os << a_;
  } else {
    os << a_ << "+" << b_ << "*sqrt(" << base_ << ")";
  }
  return os.str();
}

}  // namespace slorb
