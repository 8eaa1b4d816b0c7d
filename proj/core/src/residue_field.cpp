#include "slorb/residue_field.hpp"

#include <array>

namespace slorb {

namespace {

// Conway-style defining polynomials x^f + c_{f-1}x^{f-1} + ... + c_0 over F_p
// for the prime powers up to 16.  Stored as the coefficient vector of the
// reduction rule x^f = -(c_{f-1}x^{f-1} + ... + c_0).
std::vector<int> defining_poly(int p, int f) {
  if (f == 1) return {};
  if (p == 2 && f == 2) return {1, 1};        // x^2 + x + 1
  if (p == 2 && f == 3) return {1, 1, 0};     // x^3 + x + 1
  if (p == 2 && f == 4) return {1, 1, 0, 0};  // x^4 + x + 1
  if (p == 3 && f == 2) return {2, 2};        // x^2 + 2x + 2
  throw value_error("residue field size not supported (need q = p^f <= 16)");
}

}  // namespace

ResidueField::ResidueField(int p, int f) : p_(p), f_(f) {
  q_ = 1;
  for (int i = 0; i < f; ++i) q_ *= p;
  if (q_ > 16) throw value_error("residue field too large, q <= 16 required");

  auto digits = [&](int a) {
    std::array<int, 4> d{0, 0, 0, 0};
    for (int i = 0; i < f_; ++i) {
      d[i] = a % p_;
      a /= p_;
    }
    return d;
  };
  auto index = [&](const std::array<int, 4>& d) {
    int a = 0;
    for (int i = f_ - 1; i >= 0; --i) a = a * p_ + d[i];
    return a;
  };

  add_.assign(q_ * q_, 0);
  mul_.assign(q_ * q_, 0);
  neg_.assign(q_, 0);
  inv_.assign(q_, -1);
  frob_.assign(q_, 0);
  sqrt_.assign(q_, -1);
  trace_.assign(q_, 0);

  std::vector<int> rule = defining_poly(p_, f_);

  for (int a = 0; a < q_; ++a) {
    auto da = digits(a);
    std::array<int, 4> dn{};
    for (int i = 0; i < f_; ++i) dn[i] = (p_ - da[i]) % p_;
    neg_[a] = index(dn);
    for (int b = 0; b < q_; ++b) {
      auto db = digits(b);
      std::array<int, 4> ds{};
      for (int i = 0; i < f_; ++i) ds[i] = (da[i] + db[i]) % p_;
      add_[a * q_ + b] = index(ds);

      // polynomial product, then reduce by the defining rule
      std::array<int, 8> prod{};
      for (int i = 0; i < f_; ++i)
        for (int j = 0; j < f_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
      for (int k = 2 * f_ - 2; k >= f_; --k) {
        int c = prod[k];
        if (c == 0) continue;
        prod[k] = 0;
        for (int i = 0; i < f_; ++i)
          prod[k - f_ + i] = (prod[k - f_ + i] + (p_ - rule[i]) % p_ * c) % p_;
      }
      std::array<int, 4> dm{};
      for (int i = 0; i < f_; ++i) dm[i] = prod[i];
      mul_[a * q_ + b] = index(dm);
    }
  }

  for (int a = 1; a < q_; ++a)
    for (int b = 1; b < q_; ++b)
      if (mul_[a * q_ + b] == 1) inv_[a] = b;

  for (int a = 0; a < q_; ++a) {
    int x = a;
    for (int i = 1; i < p_; ++i) x = mul_[x * q_ + a];
    frob_[a] = x;  // a^p
    int sq = mul_[a * q_ + a];
    if (sqrt_[sq] < 0) sqrt_[sq] = a;
    int tr = 0, y = a;
    for (int i = 0; i < f_; ++i) {
      tr = add_[tr * q_ + y];
      int yp = y;
      for (int j = 1; j < p_; ++j) yp = mul_[yp * q_ + y];
      y = yp;
    }
    // tr lies in the prime field, so its index is its value mod p
    trace_[a] = tr;
  }

  for (int a = 1; a < q_; ++a) {
    if (sqrt_[a] < 0) {
      nonsquare_ = a;
      break;
    }
  }
}

int ResidueField::inv(int a) const {
  if (a == 0) throw value_error("inverse of zero in residue field");
  return inv_[a];
}

int ResidueField::pow(int a, long e) const {
  if (e < 0) return pow(inv(a), -e);
  int r = 1, b = a;
  while (e > 0) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

}  // namespace slorb
