#pragma once

#include <cstdint>
#include <vector>

#include "slorb/numeric.hpp"

namespace slorb {

// F_q for q = p^f <= 16, as polynomials over F_p modulo a fixed irreducible,
// with exhaustive operation tables.  An element is its index in 0..q-1; the
// index encodes the coefficient vector in base p (constant term first), so
// for prime q the index is just the value mod p.
class ResidueField {
 public:
  ResidueField(int p, int f);

  int p() const { return p_; }
  int f() const { return f_; }
  int q() const { return q_; }

  int add(int a, int b) const { return add_[a * q_ + b]; }
  int sub(int a, int b) const { return add_[a * q_ + neg_[b]]; }
  int mul(int a, int b) const { return mul_[a * q_ + b]; }
  int neg(int a) const { return neg_[a]; }
  int inv(int a) const;
  int div(int a, int b) const { return mul(a, inv(b)); }
  int pow(int a, long e) const;

  // x -> x^p
  int frobenius(int a) const { return frob_[a]; }
  bool is_square(int a) const { return sqrt_[a] >= 0; }
  // smallest-index square root, -1 if none
  int sqrt(int a) const { return sqrt_[a]; }
  // smallest-index non-square unit; only meaningful for odd p
  int smallest_nonsquare() const { return nonsquare_; }
  // absolute trace to F_p, returned as an integer in 0..p-1
  int trace_to_prime(int a) const { return trace_[a]; }

  int one() const { return 1; }

 private:
  int p_, f_, q_;
  int nonsquare_ = -1;
  std::vector<int> add_, mul_, neg_, inv_, frob_, sqrt_, trace_;
};

}  // namespace slorb
