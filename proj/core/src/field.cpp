#include "slorb/field.hpp"

#include <algorithm>
#include <sstream>

namespace slorb {

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

Field::Field(const FieldSpec& spec) : spec_(spec), k_(spec.p, spec.f) {
  if (spec.precision < 1) throw value_error("precision must be >= 1");
  if (spec.kind == FieldKind::MixedChar && spec.f != 1)
    throw value_error("mixed characteristic base field must have q = p");
  for (int d = 2; d * d <= spec.p; ++d)
    if (spec.p % d == 0) throw value_error("residue characteristic must be prime");
}

Field Field::parse_spec(const std::string& s) {
  FieldSpec spec;
  std::string head = s.substr(0, s.find(':'));
  if (head == "Qp")
    spec.kind = FieldKind::MixedChar;
  else if (head == "Fq((t))")
    spec.kind = FieldKind::EqualChar;
  else
    throw value_error("bad field spec, expected Qp:... or Fq((t)):...: " + s);

  size_t pos = s.find(':');
  int q = -1;
  while (pos != std::string::npos) {
    size_t next = s.find(':', pos + 1);
    std::string part = s.substr(pos + 1, next == std::string::npos ? next : next - pos - 1);
    size_t eq = part.find('=');
    if (eq == std::string::npos) throw value_error("bad field spec component: " + part);
    std::string key = part.substr(0, eq);
    int value = std::stoi(part.substr(eq + 1));
    if (key == "p")
      spec.p = value;
    else if (key == "q")
      q = value;
    else if (key == "N")
      spec.precision = value;
    else
      throw value_error("unknown field spec key: " + key);
    pos = next;
  }
  if (spec.kind == FieldKind::EqualChar) {
    if (q < 2) throw value_error("Fq((t)) spec needs q=<prime power>");
    int p = 2;
    while (q % p != 0) ++p;
    int f = 0, m = q;
    while (m > 1) {
      if (m % p != 0) throw value_error("q must be a prime power");
      m /= p;
      ++f;
    }
    spec.p = p;
    spec.f = f;
  }
  return Field(spec);
}

std::string Field::spec_string() const {
  std::ostringstream os;
  if (mixed())
    os << "Qp:p=" << p() << ":N=" << precision();
  else
    os << "Fq((t)):q=" << q() << ":N=" << precision();
  return os.str();
}

namespace {

BigInt pow_int(long b, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// magnitude mantissa; sign carried separately
BigInt mantissa(const Field& F, const FieldElem& x) {
  BigInt m = 0;
  for (size_t i = x.digits.size(); i-- > 0;) m = m * F.p() + x.digits[i];
  return m;
}

BigInt mantissa_signed(const Field& F, const FieldElem& x) {
  BigInt m = mantissa(F, x);
  return x.neg ? -m : m;
}

std::vector<uint8_t> to_base_p(const Field& F, BigInt m, int count) {
  std::vector<uint8_t> d;
  d.reserve(count);
  for (int i = 0; i < count; ++i) {
    d.push_back(static_cast<uint8_t>(m % F.p()));
    m /= F.p();
  }
  return d;
}

int bitlen_base_p(const Field& F, BigInt m) {
  int len = 0;
  while (m > 0) {
    m /= F.p();
    ++len;
  }
  return len;
}

// exact mixed-char element with value sign * p^val * mag; strips p powers
FieldElem make_mixed_exact(const Field& F, int val, const BigInt& signed_m) {
  if (signed_m == 0) return fe_zero();
  BigInt mag = signed_m < 0 ? -signed_m : signed_m;
  bool neg = signed_m < 0;
  while (mag % F.p() == 0) {
    mag /= F.p();
    ++val;
  }
  int len = bitlen_base_p(F, mag);
  int N = F.precision();
  FieldElem e;
  e.zero = false;
  e.val = val;
  if (len <= N) {
    e.exact = true;
    e.neg = neg;
    e.digits = to_base_p(F, mag, len);
    return e;
  }
  // too wide to store exactly: truncate canonical digits
  e.exact = false;
  BigInt modN = pow_int(F.p(), N);
  BigInt canon = mag % modN;
  if (neg) canon = (modN - canon) % modN;
  if (canon == 0) throw precision_error("no significant digits after truncation");
  e.digits = to_base_p(F, canon, N);
  // leading digit nonzero is guaranteed since p does not divide mag
  return e;
}

// inexact mixed-char element from canonical mantissa known modulo p^{window-lo}
FieldElem make_mixed_inexact(const Field& F, int lo, BigInt m, int window_end) {
  int W = window_end - lo;
  if (W <= 0) throw precision_error("no significant digits left");
  BigInt mod = pow_int(F.p(), W);
  m %= mod;
  if (m < 0) m += mod;
  if (m == 0) throw precision_error("value is zero to working precision");
  int shift = 0;
  while (m % F.p() == 0) {
    m /= F.p();
    ++shift;
  }
  int len = std::min(W - shift, F.precision());
  if (len <= 0) throw precision_error("no significant digits left");
  FieldElem e;
  e.zero = false;
  e.exact = false;
  e.val = lo + shift;
  e.digits = to_base_p(F, m, len);
  return e;
}

// equal characteristic: strip leading zeros, trim, cap at precision
FieldElem make_equal(const Field& F, int val, std::vector<uint8_t> digits, bool exact,
                     int known_window) {
  size_t lead = 0;
  while (lead < digits.size() && digits[lead] == 0) ++lead;
  if (lead == digits.size()) {
    if (exact) return fe_zero();
    throw precision_error("cancellation exhausted all significant digits");
  }
  if (lead > 0) {
    digits.erase(digits.begin(), digits.begin() + lead);
    val += static_cast<int>(lead);
  }
  if (exact) {
    while (!digits.empty() && digits.back() == 0) digits.pop_back();
  }
  int N = F.precision();
  int limit = exact ? N : std::min<int>(N, known_window - val);
  if (static_cast<int>(digits.size()) > limit) {
    digits.resize(std::max(limit, 0));
    exact = false;
    if (digits.empty()) throw precision_error("no significant digits left after truncation");
  }
  FieldElem e;
  e.zero = false;
  e.exact = exact;
  e.val = val;
  e.digits = std::move(digits);
  return e;
}

}  // namespace

FieldElem fe_zero() { return FieldElem{}; }

FieldElem fe_one(const Field& F) { return fe_digit(F, 1); }

FieldElem fe_digit(const Field& F, int c) {
  if (c == 0) return fe_zero();
  if (c < 0 || c >= F.q()) throw value_error("digit out of range");
  FieldElem e;
  e.zero = false;
  e.exact = true;
  e.val = 0;
  e.digits = {static_cast<uint8_t>(c)};
  return e;
}

FieldElem fe_int(const Field& F, const BigInt& n) {
  if (n == 0) return fe_zero();
  if (F.mixed()) return make_mixed_exact(F, 0, n);
  long r = static_cast<long>(n % F.p());
  if (r < 0) r += F.p();
  return fe_digit(F, static_cast<int>(r));
}

FieldElem fe_int(const Field& F, long n) { return fe_int(F, BigInt(n)); }

FieldElem fe_make(const Field& F, int val, std::vector<uint8_t> digits, bool exact) {
  for (uint8_t d : digits)
    if (d >= F.q()) throw value_error("digit out of range for residue field");
  int window = val + static_cast<int>(digits.size());
  if (F.mixed()) {
    BigInt m = 0;
    for (size_t i = digits.size(); i-- > 0;) m = m * F.p() + digits[i];
    if (exact) return make_mixed_exact(F, val, m);
    if (m == 0) throw precision_error("inexact element with no significant digit");
    return make_mixed_inexact(F, val, m, window);
  }
  return make_equal(F, val, std::move(digits), exact, window);
}

FieldElem fe_uniformizer(const Field& F, int power) {
  FieldElem e = fe_one(F);
  e.val = power;
  return e;
}

FieldElem fe_neg(const Field& F, const FieldElem& x) {
  if (x.zero) return x;
  if (!F.mixed()) {
    FieldElem e = x;
    const ResidueField& k = F.residue();
    for (auto& d : e.digits) d = static_cast<uint8_t>(k.neg(d));
    return e;
  }
  if (x.exact) {
    FieldElem e = x;
    e.neg = !e.neg;
    return e;
  }
  // canonical complement at the known precision
  int W = static_cast<int>(x.digits.size());
  return make_mixed_inexact(F, x.val, -mantissa(F, x), x.val + W);
}

SubResult fe_sub_checked(const Field& F, const FieldElem& x, const FieldElem& y) {
  SubResult out;
  if (y.zero) {
    out.value = x;
    return out;
  }
  if (x.zero) {
    out.value = fe_neg(F, y);
    return out;
  }
  int lo = std::min(x.val, y.val);
  int known = std::min(x.window(), y.window());
  bool exact = x.exact && y.exact;

  if (F.mixed()) {
    if (exact) {
      BigInt S = mantissa_signed(F, x) * pow_int(F.p(), x.val - lo) -
                 mantissa_signed(F, y) * pow_int(F.p(), y.val - lo);
      if (S == 0) {
        out.value = fe_zero();
        return out;
      }
      out.value = make_mixed_exact(F, lo, S);
      return out;
    }
    int hi = std::min(known, lo + F.precision() + 1);
    if (hi <= lo) {
      out.cancel_floor = known;
      return out;
    }
    BigInt mod = pow_int(F.p(), hi - lo);
    BigInt S = (mantissa_signed(F, x) % mod) * pow_int(F.p(), x.val - lo) -
               (mantissa_signed(F, y) % mod) * pow_int(F.p(), y.val - lo);
    S %= mod;
    if (S < 0) S += mod;
    if (S == 0) {
      out.cancel_floor = hi;
      return out;
    }
    try {
      out.value = make_mixed_inexact(F, lo, S, hi);
    } catch (const precision_error&) {
      out.cancel_floor = hi;
    }
    return out;
  }

  // equal characteristic: digitwise, no borrows
  int data_hi = std::max(x.val + static_cast<int>(x.digits.size()),
                         y.val + static_cast<int>(y.digits.size()));
  int hi = exact ? data_hi : std::min(known, lo + F.precision() + 1);
  hi = std::max(hi, lo);
  std::vector<uint8_t> d(std::max(hi - lo, 0), 0);
  const ResidueField& k = F.residue();
  for (size_t i = 0; i < x.digits.size(); ++i) {
    int pos = x.val + static_cast<int>(i) - lo;
    if (pos >= 0 && pos < static_cast<int>(d.size())) d[pos] = x.digits[i];
  }
  for (size_t i = 0; i < y.digits.size(); ++i) {
    int pos = y.val + static_cast<int>(i) - lo;
    if (pos >= 0 && pos < static_cast<int>(d.size()))
      d[pos] = static_cast<uint8_t>(k.sub(d[pos], y.digits[i]));
  }
  bool all_zero = std::all_of(d.begin(), d.end(), [](uint8_t v) { return v == 0; });
  if (all_zero) {
    if (exact) {
      out.value = fe_zero();
      return out;
    }
    out.cancel_floor = hi;
    return out;
  }
  try {
    out.value = make_equal(F, lo, std::move(d), exact, known);
  } catch (const precision_error&) {
    out.cancel_floor = known;
  }
  return out;
}

FieldElem fe_sub(const Field& F, const FieldElem& x, const FieldElem& y) {
  SubResult r = fe_sub_checked(F, x, y);
  if (!r.value) throw precision_error("difference is zero to working precision");
  return *r.value;
}

namespace {
// digits of x restricted to positions below `floor`; inexact (tail unknown)
FieldElem cap_window(const Field& F, const FieldElem& x, int floor) {
  std::vector<uint8_t> d;
  for (int pos = x.val; pos < floor; ++pos)
    d.push_back(static_cast<uint8_t>(fe_digit_at(F, x, pos)));
  return fe_make(F, x.val, std::move(d), false);
}
}  // namespace

SubResult fe_sum_checked(const Field& F, const std::vector<FieldElem>& terms) {
  std::optional<FieldElem> acc;
  int floor = std::numeric_limits<int>::max() / 2;
  bool have_floor = false;
  for (const FieldElem& t : terms) {
    if (t.zero) continue;
    if (!acc && !have_floor) {
      acc = t;
      continue;
    }
    if (acc) {
      SubResult r = fe_sub_checked(F, *acc, fe_neg(F, t));
      if (r.value) {
        acc = r.value;
      } else {
        acc.reset();
        have_floor = true;
        floor = r.cancel_floor;
      }
      continue;
    }
    // partial sum is zero modulo pi^floor
    if (t.val < floor) {
      acc = cap_window(F, t, std::min(floor, t.window()));
      have_floor = false;
    } else {
      floor = std::min(floor, std::min(t.val, t.window()));
    }
  }
  SubResult out;
  if (acc) {
    out.value = *acc;
  } else if (!have_floor) {
    out.value = fe_zero();
  } else {
    out.cancel_floor = floor;
  }
  return out;
}

FieldElem fe_sum(const Field& F, const std::vector<FieldElem>& terms) {
  SubResult r = fe_sum_checked(F, terms);
  if (!r.value) throw precision_error("sum is zero to working precision");
  return *r.value;
}

FieldElem fe_add(const Field& F, const FieldElem& x, const FieldElem& y) {
  return fe_sub(F, x, fe_neg(F, y));
}

FieldElem fe_mul(const Field& F, const FieldElem& x, const FieldElem& y) {
  if (x.zero || y.zero) return fe_zero();
  bool exact = x.exact && y.exact;
  int relprec = std::min({x.exact ? std::numeric_limits<int>::max() / 2
                                  : static_cast<int>(x.digits.size()),
                          y.exact ? std::numeric_limits<int>::max() / 2
                                  : static_cast<int>(y.digits.size()),
                          F.precision()});
  int val = x.val + y.val;
  if (F.mixed()) {
    if (exact)
      return make_mixed_exact(F, val, mantissa_signed(F, x) * mantissa_signed(F, y));
    BigInt m = mantissa_signed(F, x) * mantissa_signed(F, y);
    return make_mixed_inexact(F, val, m, val + relprec);
  }
  const ResidueField& k = F.residue();
  int n = static_cast<int>(x.digits.size()), m = static_cast<int>(y.digits.size());
  bool res_exact = exact && (n + m - 1 <= relprec);
  int len = res_exact ? n + m - 1 : relprec;
  std::vector<uint8_t> d(len, 0);
  for (int i = 0; i < n; ++i) {
    if (x.digits[i] == 0) continue;
    for (int j = 0; j < m && i + j < len; ++j)
      d[i + j] = static_cast<uint8_t>(k.add(d[i + j], k.mul(x.digits[i], y.digits[j])));
  }
  return make_equal(F, val, std::move(d), res_exact, val + relprec);
}

namespace {
// modular inverse of u mod p^W (u coprime to p)
BigInt inv_mod_pw(const Field& F, const BigInt& u, int W) {
  BigInt mod = pow_int(F.p(), W);
  BigInt a = u % mod, b = mod, x0 = 1, x1 = 0;
  if (a < 0) a += mod;
  while (b != 0) {
    BigInt q = a / b, t = b;
    b = a - q * b;
    a = t;
    t = x1;
    x1 = x0 - q * x1;
    x0 = t;
  }
  BigInt r = x0 % mod;
  if (r < 0) r += mod;
  return r;
}
}  // namespace

FieldElem fe_div(const Field& F, const FieldElem& x, const FieldElem& y) {
  if (y.zero) throw value_error("division by exact zero");
  if (x.zero) return fe_zero();
  int relprec = std::min({x.exact ? std::numeric_limits<int>::max() / 2
                                  : static_cast<int>(x.digits.size()),
                          y.exact ? std::numeric_limits<int>::max() / 2
                                  : static_cast<int>(y.digits.size()),
                          F.precision()});
  int val = x.val - y.val;
  if (F.mixed()) {
    BigInt mx = mantissa(F, x), my = mantissa(F, y);
    if (x.exact && y.exact && mx % my == 0) {
      BigInt quot = mx / my;
      if (bitlen_base_p(F, quot) <= F.precision())
        return make_mixed_exact(F, val, (x.neg != y.neg) ? -quot : quot);
    }
    BigInt q = mantissa_signed(F, x) * inv_mod_pw(F, mantissa_signed(F, y), relprec);
    return make_mixed_inexact(F, val, q, val + relprec);
  }
  // power series long division
  const ResidueField& k = F.residue();
  std::vector<uint8_t> rem(x.digits.begin(), x.digits.end());
  rem.resize(x.digits.size() + y.digits.size() + relprec, 0);
  std::vector<uint8_t> quot(relprec, 0);
  int ylead_inv = k.inv(y.digits[0]);
  for (int i = 0; i < relprec; ++i) {
    int qi = k.mul(rem[i], ylead_inv);
    quot[i] = static_cast<uint8_t>(qi);
    if (qi != 0) {
      for (size_t j = 0; j < y.digits.size(); ++j)
        rem[i + j] = static_cast<uint8_t>(k.sub(rem[i + j], k.mul(qi, y.digits[j])));
    }
  }
  bool exact = false;
  if (x.exact && y.exact)
    exact = std::all_of(rem.begin(), rem.end(), [](uint8_t v) { return v == 0; });
  return make_equal(F, val, std::move(quot), exact, val + relprec);
}

FieldElem fe_inv(const Field& F, const FieldElem& x) { return fe_div(F, fe_one(F), x); }

FieldElem fe_pow(const Field& F, const FieldElem& x, long e) {
  if (e == 0) return fe_one(F);
  if (e < 0) return fe_inv(F, fe_pow(F, x, -e));
  FieldElem r = fe_one(F), b = x;
  while (e > 0) {
    if (e & 1) r = fe_mul(F, r, b);
    b = e > 1 ? fe_mul(F, b, b) : b;
    e >>= 1;
  }
  return r;
}

long fe_val(const FieldElem& x) {
  if (x.zero) throw value_error("valuation of exact zero");
  return x.val;
}

Rational fe_abs(const Field& F, const FieldElem& x) {
  if (x.zero) return Rational(0);
  return q_pow(F.q(), -x.val);
}

int fe_leading_digit(const Field& F, const FieldElem& x) {
  if (x.zero) throw value_error("leading digit of zero");
  return fe_digit_at(F, x, x.val);
}

int fe_digit_at(const Field& F, const FieldElem& x, int position) {
  if (x.zero) return 0;
  if (position < x.val) return 0;
  int idx = position - x.val;
  if (!x.neg) {
    if (idx < static_cast<int>(x.digits.size())) return x.digits[idx];
    if (x.exact) return 0;
    throw precision_error("digit beyond known window");
  }
  int p = F.p();
  int d = idx < static_cast<int>(x.digits.size()) ? x.digits[idx] : 0;
  if (idx == 0) return p - d;  // leading digit nonzero
  return p - 1 - d;
}

bool fe_val_at_least(const Field& F, const FieldElem& x, int n) {
  (void)F;
  if (x.zero) return true;
  return x.val >= n;
}

bool fe_congruent(const Field& F, const FieldElem& x, const FieldElem& y, int n) {
  SubResult r = fe_sub_checked(F, x, y);
  if (r.value) return fe_val_at_least(F, *r.value, n);
  if (r.cancel_floor >= n) return true;
  throw precision_error("congruence undecidable at working precision");
}

bool fe_eq(const Field& F, const FieldElem& x, const FieldElem& y) {
  SubResult r = fe_sub_checked(F, x, y);
  if (r.value) return r.value->is_zero();
  throw precision_error("equality undecidable at working precision");
}

std::string fe_str(const FieldElem& x) {
  if (x.zero) return "z";
  std::ostringstream os;
  if (x.neg) os << "~";
  os << x.val << ";";
  for (size_t i = 0; i < x.digits.size(); ++i) {
    if (i) os << ",";
    os << static_cast<int>(x.digits[i]);
  }
  return os.str();
}

FieldElem fe_parse(const Field& F, const std::string& s0) {
  if (s0 == "z") return fe_zero();
  std::string s = s0;
  bool neg = false;
  if (!s.empty() && s[0] == '~') {
    neg = true;
    s = s.substr(1);
  }
  size_t semi = s.find(';');
  if (semi == std::string::npos) {
    // convenience: plain integers are accepted
    return fe_int(F, BigInt(s0));
  }
  int val = std::stoi(s.substr(0, semi));
  std::vector<uint8_t> digits;
  std::string rest = s.substr(semi + 1);
  size_t pos = 0;
  while (pos < rest.size()) {
    size_t comma = rest.find(',', pos);
    std::string tok = rest.substr(pos, comma == std::string::npos ? comma : comma - pos);
    digits.push_back(static_cast<uint8_t>(std::stoi(tok)));
    pos = comma == std::string::npos ? rest.size() : comma + 1;
  }
  FieldElem e = fe_make(F, val, std::move(digits), true);
  if (neg) e = fe_neg(F, e);
  return e;
}

}  // namespace slorb
