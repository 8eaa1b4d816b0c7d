#include "slorb/squares.hpp"

#include <algorithm>

namespace slorb {

namespace {

int unit_mod8(const Field& F, const FieldElem& x) {
  // unit part of x as an integer mod 8; requires 3 known digits
  if (x.prec() < 3 && !x.exact)
    throw precision_error("mixed characteristic 2 needs 3 digits for square decisions");
  int u = 0;
  for (int i = 2; i >= 0; --i) u = 2 * u + fe_digit_at(F, x, x.val + i);
  return u;
}

// Newton iteration for sqrt of a unit u whose residue is a square; p odd
FieldElem unit_sqrt_odd(const Field& F, const FieldElem& u) {
  const ResidueField& k = F.residue();
  int s0 = k.sqrt(fe_leading_digit(F, u));
  FieldElem w = fe_digit(F, s0);
  FieldElem half = fe_inv(F, fe_int(F, 2));
  int target = u.exact ? F.precision() : std::min(u.prec(), F.precision());
  for (int it = 0; it < F.precision() + 3; ++it) {
    // w <- (w + u/w)/2
    FieldElem next = fe_mul(F, half, fe_add(F, w, fe_div(F, u, w)));
    SubResult diff = fe_sub_checked(F, next, w);
    w = next;
    if (!diff.value) break;  // converged to working precision
    if (diff.value->is_zero()) break;
    if (fe_val(*diff.value) >= target) break;
  }
  // the computed root is an approximation even when u is exact
  if (w.exact && fe_mul(F, w, w) != u) w.exact = false;
  return w;
}

// digit lifting for sqrt of a 2-adic unit congruent to 1 mod 8
FieldElem unit_sqrt_two(const Field& F, const FieldElem& u) {
  int P = std::min(u.exact ? F.precision() : u.prec(), F.precision());
  BigInt mod = 1;
  for (int i = 0; i < P; ++i) mod *= 2;
  BigInt target = 0;
  for (int i = P - 1; i >= 0; --i) target = target * 2 + fe_digit_at(F, u, u.val + i);
  BigInt w = 1, pk = 8;   // w^2 == target mod 8
  BigInt half_pk = 4;     // 2^{k-1}
  while (pk < mod) {
    if ((w * w - target) % (2 * pk) != 0) w += half_pk;
    half_pk = pk;
    pk *= 2;
  }
  std::vector<uint8_t> digits;
  BigInt m = w;
  for (int i = 0; i < P - 1; ++i) {  // last digit of w is not certified
    digits.push_back(static_cast<uint8_t>(m % 2));
    m /= 2;
  }
  return fe_make(F, 0, std::move(digits), false);
}

}  // namespace

SquareCheck fe_is_square(const Field& F, const FieldElem& x) {
  if (x.is_zero()) throw value_error("is_square: zero input");
  SquareCheck out;
  if (x.val % 2 != 0) {
    out.square = false;
    return out;
  }
  // strip the even valuation
  FieldElem u = x;
  int half_val = x.val / 2;
  u.val = 0;

  if (F.p() != 2) {
    const ResidueField& k = F.residue();
    if (!k.is_square(fe_leading_digit(F, u))) {
      out.square = false;
      return out;
    }
    out.square = true;
    FieldElem w = unit_sqrt_odd(F, u);
    w.val += half_val;
    out.witness = w;
    return out;
  }

  if (F.mixed()) {
    int um8 = unit_mod8(F, u);
    if (um8 != 1) {
      out.square = false;
      return out;
    }
    out.square = true;
    FieldElem w = unit_sqrt_two(F, u);
    w.val += half_val;
    out.witness = w;
    return out;
  }

  // equal characteristic 2: squares have digits only in even positions
  for (size_t i = 1; i < u.digits.size(); i += 2) {
    if (u.digits[i] != 0) {
      out.square = false;
      return out;
    }
  }
  out.square = true;
  out.certified = u.exact;
  const ResidueField& k = F.residue();
  std::vector<uint8_t> wd;
  for (size_t i = 0; i < u.digits.size(); i += 2)
    wd.push_back(static_cast<uint8_t>(k.sqrt(u.digits[i])));
  FieldElem w = fe_make(F, half_val, std::move(wd), u.exact);
  out.witness = w;
  return out;
}

SquareClassGroup square_classes(const Field& F, int level) {
  if (level < 1) throw value_error("square_classes: level >= 1 required");
  if (F.mixed() && F.p() == 2 && level < 3)
    throw value_error("square_classes over Q_2 needs level >= 3");
  SquareClassGroup G;
  G.level = level;

  std::vector<std::vector<uint8_t>> units;
  if (F.p() != 2) {
    units = {{1}, {static_cast<uint8_t>(F.residue().smallest_nonsquare())}};
    G.stabilized = true;
  } else if (F.mixed()) {
    // unit classes mod 8, lexicographically smallest digit strings first
    units = {{1}, {1, 0, 1}, {1, 1}, {1, 1, 1}};  // 1, 5, 3, 7
    G.stabilized = true;
  } else {
    // equal characteristic 2: free digits at odd positions < level
    std::vector<int> odd_positions;
    for (int i = 1; i < level; i += 2) odd_positions.push_back(i);
    size_t count = 1;
    for (size_t i = 0; i < odd_positions.size(); ++i) count *= F.q();
    for (size_t code = 0; code < count; ++code) {
      std::vector<uint8_t> d(level, 0);
      d[0] = 1;
      size_t c = code;
      for (int pos : odd_positions) {
        d[pos] = static_cast<uint8_t>(c % F.q());
        c /= F.q();
      }
      while (!d.empty() && d.back() == 0) d.pop_back();
      units.push_back(std::move(d));
    }
    std::sort(units.begin(), units.end());
    G.stabilized = false;
  }

  for (int piexp = 0; piexp <= 1; ++piexp)
    for (const auto& u : units) G.reps.push_back(fe_make(F, piexp, u, true));
  return G;
}

int trivial_class_index(const SquareClassGroup& G) {
  for (size_t i = 0; i < G.reps.size(); ++i)
    if (G.reps[i].val == 0 && G.reps[i].digits == std::vector<uint8_t>{1})
      return static_cast<int>(i);
  throw value_error("square class group has no identity rep");
}

int square_class_of(const Field& F, const SquareClassGroup& G, const FieldElem& x) {
  if (x.is_zero()) throw value_error("square_class_of: zero input");
  int piexp = ((x.val % 2) + 2) % 2;
  FieldElem u = x;
  u.val = 0;

  std::vector<uint8_t> key;
  if (F.p() != 2) {
    bool sq = F.residue().is_square(fe_leading_digit(F, u));
    key = sq ? std::vector<uint8_t>{1}
             : std::vector<uint8_t>{static_cast<uint8_t>(F.residue().smallest_nonsquare())};
  } else if (F.mixed()) {
    switch (unit_mod8(F, u)) {
      case 1: key = {1}; break;
      case 3: key = {1, 1}; break;
      case 5: key = {1, 0, 1}; break;
      case 7: key = {1, 1, 1}; break;
      default: throw value_error("unit part not odd");
    }
  } else {
    // normalize the unit so that even positions < level vanish
    if (!u.exact && u.prec() < G.level)
      throw precision_error("precision insufficient to separate square classes");
    const ResidueField& k = F.residue();
    // scale leading digit to 1 by the square of a constant
    int c = k.sqrt(k.inv(fe_leading_digit(F, u)));
    u = fe_mul(F, u, fe_mul(F, fe_digit(F, c), fe_digit(F, c)));
    for (int pos = 2; pos < G.level; pos += 2) {
      int e;
      try {
        e = fe_digit_at(F, u, pos);
      } catch (const precision_error&) {
        break;  // exact elements only: cannot happen for certified input
      }
      if (e == 0) continue;
      // multiply by (1 + sqrt(e) t^{pos/2})^2 = 1 + e t^pos
      FieldElem m = fe_add(F, fe_one(F), fe_make(F, pos, {static_cast<uint8_t>(e)}, true));
      u = fe_mul(F, u, m);
    }
    key.assign(G.level, 0);
    key[0] = 1;
    for (int pos = 1; pos < G.level; pos += 2) {
      int d = 0;
      try {
        d = fe_digit_at(F, u, pos);
      } catch (const precision_error&) {
        throw precision_error("precision insufficient to separate square classes");
      }
      key[pos] = static_cast<uint8_t>(d);
    }
    while (!key.empty() && key.back() == 0) key.pop_back();
  }

  for (size_t i = 0; i < G.reps.size(); ++i)
    if (G.reps[i].val == piexp && G.reps[i].digits == key) return static_cast<int>(i);
  throw value_error("square class representative not found");
}

int hilbert_symbol(const Field& F, const FieldElem& a, const FieldElem& b) {
  if (a.is_zero() || b.is_zero()) throw value_error("hilbert symbol of zero");
  if (F.equal_char_two())
    throw value_error("hilbert symbol undefined in equal characteristic 2");
  long alpha = fe_val(a), beta = fe_val(b);
  if (F.p() != 2) {
    const ResidueField& k = F.residue();
    auto chi = [&](int digit) { return k.is_square(digit) ? 1 : -1; };
    int sign = 1;
    if ((alpha * beta) % 2 != 0 && ((F.q() - 1) / 2) % 2 != 0) sign = -sign;
    if (beta % 2 != 0 && chi(fe_leading_digit(F, a)) < 0) sign = -sign;
    if (alpha % 2 != 0 && chi(fe_leading_digit(F, b)) < 0) sign = -sign;
    return sign;
  }
  // Q_2
  int u = unit_mod8(F, a), w = unit_mod8(F, b);
  auto eps = [](int m) { return ((m - 1) / 2) % 2; };
  auto omega = [](int m) { return ((m * m - 1) / 8) % 2; };
  long e = eps(u) * eps(w) + (alpha % 2) * omega(w) + (beta % 2) * omega(u);
  return e % 2 == 0 ? 1 : -1;
}

ASReduction artin_schreier_reduce(const Field& F, const FieldElem& a0) {
  if (!F.equal_char_two())
    throw value_error("Artin-Schreier reduction needs equal characteristic 2");
  const ResidueField& k = F.residue();
  FieldElem a = a0;
  while (!a.is_zero() && a.val < 0) {
    if (a.val % 2 != 0) return {ASClass::Ramified, a};
    // strip the even-order pole: subtract c^2 + c with c = sqrt(lead) t^{v/2}
    FieldElem c = fe_make(F, a.val / 2, {static_cast<uint8_t>(k.sqrt(fe_leading_digit(F, a)))}, true);
    FieldElem peel = fe_add(F, fe_mul(F, c, c), c);
    SubResult r = fe_sub_checked(F, a, peel);
    if (!r.value) {
      if (r.cancel_floor < 1)
        throw precision_error("Artin-Schreier reduction exhausted the precision");
      return {ASClass::Trivial, fe_zero()};
    }
    a = *r.value;
  }
  if (a.is_zero()) return {ASClass::Trivial, a};
  int a0digit = fe_digit_at(F, a, 0);
  if (k.trace_to_prime(a0digit) == 1) return {ASClass::Unramified, a};
  // constant term is in the image of x^2+x; the positive tail always is
  return {ASClass::Trivial, a};
}

std::optional<FieldElem> artin_schreier_root(const Field& F, const FieldElem& a0) {
  if (!F.equal_char_two())
    throw value_error("Artin-Schreier root needs equal characteristic 2");
  const ResidueField& k = F.residue();
  FieldElem a = a0;
  std::vector<FieldElem> parts;  // accumulated solution terms
  while (!a.is_zero() && a.val < 0) {
    if (a.val % 2 != 0) return std::nullopt;  // ramified extension
    FieldElem c = fe_make(F, a.val / 2,
                          {static_cast<uint8_t>(k.sqrt(fe_leading_digit(F, a)))}, true);
    parts.push_back(c);
    FieldElem peel = fe_add(F, fe_mul(F, c, c), c);
    SubResult r = fe_sub_checked(F, a, peel);
    if (!r.value) {
      // remainder vanishes to the floor; a positive floor certifies that the
      // residue term is 0 and the tail lies in the image of x^2 + x
      if (r.cancel_floor < 1)
        throw precision_error("Artin-Schreier reduction exhausted the precision");
      a = fe_zero();
      break;
    }
    a = *r.value;
  }
  if (!a.is_zero()) {
    int a0digit = fe_digit_at(F, a, 0);
    if (k.trace_to_prime(a0digit) == 1) return std::nullopt;  // unramified extension
    // constant part: table search in the residue field
    if (a0digit != 0) {
      for (int c0 = 0; c0 < F.q(); ++c0) {
        if (k.add(k.mul(c0, c0), c0) == a0digit) {
          parts.push_back(fe_digit(F, c0));
          SubResult r = fe_sub_checked(F, a, fe_digit(F, a0digit));
          a = r.value ? *r.value : fe_zero();
          break;
        }
      }
    }
    // positive tail: c = a + a^2 + a^4 + ... converges t-adically
    if (!a.is_zero()) {
      FieldElem c = fe_zero(), term = a;
      for (int it = 0; it < F.precision() + 2 && !term.is_zero(); ++it) {
        c = fe_add(F, c, term);
        term = fe_mul(F, term, term);
        if (!term.is_zero() && term.val > F.precision()) break;
      }
      parts.push_back(c);
    }
  }
  FieldElem root = fe_zero();
  for (const FieldElem& p : parts) root = fe_add(F, root, p);
  return root;
}

int artin_schreier_symbol(const Field& F, const FieldElem& a, const FieldElem& x) {
  if (!F.equal_char_two())
    throw value_error("Artin-Schreier symbol needs equal characteristic 2");
  if (a.is_zero() || x.is_zero()) throw value_error("Artin-Schreier symbol of zero");

  // formal derivative of x; char 2 keeps only the odd-exponent terms
  std::vector<uint8_t> dd;
  int dval = x.val - 1;
  for (size_t i = 0; i < x.digits.size(); ++i) {
    long expo = x.val + static_cast<long>(i);
    dd.push_back(expo % 2 != 0 ? x.digits[i] : 0);
  }
  bool all_zero = std::all_of(dd.begin(), dd.end(), [](uint8_t v) { return v == 0; });
  if (all_zero) {
    if (x.exact) return 0;  // dx = 0 exactly
    // residue of a * x'/x vanishes if v(a) + window bound keeps it above t^{-1}
    if (a.val + (x.window() - 1) - x.val > -1) return 0;
    throw precision_error("derivative unknown at required depth");
  }
  FieldElem dx = fe_make(F, dval, std::move(dd), x.exact);
  FieldElem s = fe_mul(F, a, fe_div(F, dx, x));
  int res = 0;
  try {
    res = fe_digit_at(F, s, -1);
  } catch (const precision_error&) {
    throw precision_error("precision insufficient for the residue term");
  }
  return F.residue().trace_to_prime(res) % 2;
}

}  // namespace slorb
