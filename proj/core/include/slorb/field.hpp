#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "slorb/numeric.hpp"
#include "slorb/residue_field.hpp"

namespace slorb {

enum class FieldKind {
  MixedChar,  // Q_p, uniformizer p
  EqualChar,  // F_q((t)), uniformizer t
};

struct FieldSpec {
  FieldKind kind = FieldKind::MixedChar;
  int p = 3;          // residue characteristic
  int f = 1;          // residue degree, q = p^f (mixed char forces f = 1)
  int precision = 12; // N: significant uniformizer digits carried
};

// Field context: immutable after construction, shared by all elements.
class Field {
 public:
  explicit Field(const FieldSpec& spec);

  // "Qp:p=3:N=12" or "Fq((t)):q=2:N=12"
  static Field parse_spec(const std::string& s);
  std::string spec_string() const;

  const FieldSpec& spec() const { return spec_; }
  FieldKind kind() const { return spec_.kind; }
  int p() const { return spec_.p; }
  int q() const { return k_.q(); }
  int precision() const { return spec_.precision; }
  bool mixed() const { return spec_.kind == FieldKind::MixedChar; }
  bool residue_char_two() const { return spec_.p == 2; }
  bool equal_char_two() const { return !mixed() && spec_.p == 2; }
  const ResidueField& residue() const { return k_; }

 private:
  FieldSpec spec_;
  ResidueField k_;
};

// Truncated field value: exact zero, or pi^val * (unit with leading digit
// nonzero).  `exact` means the element IS (-1)^neg times the finite sum
// shown.  The sign flag is only ever set on exact mixed-characteristic
// values (negative integers have infinite canonical p-adic expansions, so
// keeping a signed magnitude is what keeps subtraction exact).  Inexact
// elements are known only to digits.size() significant canonical digits.
struct FieldElem {
  bool zero = true;
  bool exact = true;
  bool neg = false;
  int val = 0;
  std::vector<uint8_t> digits;

  bool is_zero() const { return zero; }
  int prec() const {
    return zero ? std::numeric_limits<int>::max() / 2 : static_cast<int>(digits.size());
  }
  // exclusive upper bound of positions with known digits (huge when exact)
  int window() const {
    if (zero || exact) return std::numeric_limits<int>::max() / 2;
    return val + static_cast<int>(digits.size());
  }
  bool operator==(const FieldElem&) const = default;
};

// --- constructors ---------------------------------------------------------
FieldElem fe_zero();
FieldElem fe_one(const Field& F);
FieldElem fe_int(const Field& F, const BigInt& n);
FieldElem fe_int(const Field& F, long n);
// exact element pi^val * sum digits[i] pi^i; leading zeros are normalized away
FieldElem fe_make(const Field& F, int val, std::vector<uint8_t> digits, bool exact = true);
FieldElem fe_uniformizer(const Field& F, int power = 1);
// single residue-field digit c (index in 0..q-1) as a constant
FieldElem fe_digit(const Field& F, int c);

// --- arithmetic ------------------------------------------------------------
FieldElem fe_add(const Field& F, const FieldElem& x, const FieldElem& y);
FieldElem fe_sub(const Field& F, const FieldElem& x, const FieldElem& y);
FieldElem fe_mul(const Field& F, const FieldElem& x, const FieldElem& y);
FieldElem fe_div(const Field& F, const FieldElem& x, const FieldElem& y);
FieldElem fe_neg(const Field& F, const FieldElem& x);
FieldElem fe_inv(const Field& F, const FieldElem& x);
FieldElem fe_pow(const Field& F, const FieldElem& x, long e);

// x - y, but instead of throwing on full cancellation of an uncertifiable
// difference, reports the position below which all digits are known zero.
struct SubResult {
  std::optional<FieldElem> value;  // set unless cancellation was uncertifiable
  int cancel_floor = 0;            // when !value: v(x-y) >= cancel_floor
};
SubResult fe_sub_checked(const Field& F, const FieldElem& x, const FieldElem& y);

// Multi-term sum with cancellation tracking.  Intermediate full cancellations
// are tolerated as long as a later term restores certified digits; only a
// total that is uncertifiably zero yields an empty value.
SubResult fe_sum_checked(const Field& F, const std::vector<FieldElem>& terms);
FieldElem fe_sum(const Field& F, const std::vector<FieldElem>& terms);

// --- queries ---------------------------------------------------------------
long fe_val(const FieldElem& x);              // throws on exact zero
Rational fe_abs(const Field& F, const FieldElem& x);  // q^{-v}
int fe_leading_digit(const Field& F, const FieldElem& x);  // throws on zero
// canonical digit at absolute position i; throws precision_error if unknown
int fe_digit_at(const Field& F, const FieldElem& x, int position);

// true iff v(x) >= n is certified (x == 0 counts)
bool fe_val_at_least(const Field& F, const FieldElem& x, int n);
// certified equality of x and y modulo pi^n
bool fe_congruent(const Field& F, const FieldElem& x, const FieldElem& y, int n);
// exact equality test; throws precision_error when undecidable
bool fe_eq(const Field& F, const FieldElem& x, const FieldElem& y);

// --- serialization ---------------------------------------------------------
// zero -> "z"; otherwise "v;d0,d1,..." (digits as residue indices), bit-exact
std::string fe_str(const FieldElem& x);
FieldElem fe_parse(const Field& F, const std::string& s);

}  // namespace slorb
