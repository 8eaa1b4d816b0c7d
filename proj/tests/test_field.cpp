#include <random>

#include "doctest.h"
#include "slorb/field.hpp"

using namespace slorb;

namespace {

Field q3() { return Field::parse_spec("Qp:p=3:N=12"); }
Field q2() { return Field::parse_spec("Qp:p=2:N=12"); }
Field f2t() { return Field::parse_spec("Fq((t)):q=2:N=12"); }
Field f3t() { return Field::parse_spec("Fq((t)):q=3:N=12"); }

// schoolbook oracle: value of an exact element as a rational (mixed char)
Rational as_rational(const Field& F, const FieldElem& x) {
  REQUIRE(F.mixed());
  if (x.is_zero()) return 0;
  REQUIRE(x.exact);
  Rational m = 0, pk = 1;
  for (auto d : x.digits) {
    m += Rational(d) * pk;
    pk *= F.p();
  }
  return m * q_pow(F.p(), x.val);
}

FieldElem random_elem(const Field& F, std::mt19937& rng, bool allow_zero = false) {
  std::uniform_int_distribution<int> vd(-3, 3), dd(0, F.q() - 1), len(1, 5);
  if (allow_zero && rng() % 8 == 0) return fe_zero();
  std::vector<uint8_t> digits;
  int n = len(rng);
  digits.push_back(static_cast<uint8_t>(1 + rng() % (F.q() - 1)));
  for (int i = 1; i < n; ++i) digits.push_back(static_cast<uint8_t>(dd(rng)));
  return fe_make(F, vd(rng), std::move(digits), true);
}

}  // namespace

TEST_CASE("spec parsing round trips") {
  CHECK(q3().spec_string() == "Qp:p=3:N=12");
  CHECK(f2t().spec_string() == "Fq((t)):q=2:N=12");
  CHECK(q3().q() == 3);
  CHECK(f2t().equal_char_two());
  CHECK(!q2().equal_char_two());
  CHECK(q2().residue_char_two());
  CHECK_THROWS_AS(Field::parse_spec("Zp:p=3"), value_error);
}

TEST_CASE("integer embedding and basic arithmetic in Q_3") {
  Field F = q3();
  FieldElem one = fe_one(F);
  FieldElem two = fe_add(F, one, one);
  CHECK(fe_str(two) == "0;2");
  CHECK(two.exact);

  // (3 + 9) / 3 == 4, schoolbook base-3
  FieldElem twelve = fe_add(F, fe_int(F, 3), fe_int(F, 9));
  CHECK(fe_val(twelve) == 1);
  CHECK(fe_abs(F, twelve) == Rational(1, 3));
  FieldElem four = fe_div(F, twelve, fe_int(F, 3));
  CHECK(four.exact);
  CHECK(as_rational(F, four) == 4);
  CHECK(fe_str(four) == "0;1,1");
}

TEST_CASE("char-2 Frobenius: (1+t)^2 = 1+t^2") {
  Field F = f2t();
  FieldElem x = fe_make(F, 0, {1, 1}, true);
  FieldElem sq = fe_mul(F, x, x);
  CHECK(sq.exact);
  CHECK(fe_str(sq) == "0;1,0,1");
}

TEST_CASE("valuation and absolute value") {
  Field F = f2t();
  FieldElem t3 = fe_uniformizer(F, 3);
  CHECK(fe_val(t3) == 3);
  CHECK(fe_abs(F, t3) == Rational(1, 8));
  CHECK(fe_val(fe_one(F)) == 0);
  CHECK(fe_abs(F, fe_one(F)) == Rational(1));
  CHECK_THROWS_AS(fe_val(fe_zero()), value_error);
}

TEST_CASE("exact cancellation produces exact zero") {
  for (Field F : {q3(), q2(), f2t(), f3t()}) {
    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
      FieldElem x = random_elem(F, rng);
      CHECK(fe_sub(F, x, x).is_zero());
    }
  }
}

TEST_CASE("negatives in Q_p stay exact via the sign flag") {
  Field F = q3();
  FieldElem m1 = fe_int(F, -1);
  CHECK(m1.exact);
  CHECK(m1.neg);
  CHECK(m1.val == 0);
  CHECK(fe_add(F, m1, fe_one(F)).is_zero());
  FieldElem one = fe_mul(F, m1, m1);
  CHECK(one.exact);
  CHECK(!one.neg);
  CHECK(fe_eq(F, one, fe_one(F)));
  // canonical digits of -1 are (p-1) repeating
  CHECK(fe_digit_at(F, m1, 0) == 2);
  CHECK(fe_digit_at(F, m1, 5) == 2);
  CHECK(fe_str(m1) == "~0;1");
  CHECK(fe_eq(F, fe_parse(F, "~0;1"), m1));
}

TEST_CASE("ring axioms on random exact triples") {
  for (Field F : {q3(), q2(), f2t(), f3t()}) {
    std::mt19937 rng(11);
    for (int i = 0; i < 60; ++i) {
      FieldElem a = random_elem(F, rng), b = random_elem(F, rng), c = random_elem(F, rng);
      FieldElem lhs = fe_mul(F, a, fe_add(F, b, c));
      FieldElem rhs = fe_add(F, fe_mul(F, a, b), fe_mul(F, a, c));
      // distributivity up to the common known window
      int w = std::min(lhs.window(), rhs.window());
      CHECK(fe_congruent(F, lhs, rhs, std::min(w, lhs.val + 8)));
      FieldElem m1 = fe_mul(F, fe_mul(F, a, b), c);
      FieldElem m2 = fe_mul(F, a, fe_mul(F, b, c));
      CHECK(fe_congruent(F, m1, m2, std::min(m1.window(), m2.window())));
    }
  }
}

TEST_CASE("abs is multiplicative") {
  for (Field F : {q3(), f2t()}) {
    std::mt19937 rng(3);
    for (int i = 0; i < 40; ++i) {
      FieldElem x = random_elem(F, rng), y = random_elem(F, rng);
      CHECK(fe_abs(F, fe_mul(F, x, y)) == fe_abs(F, x) * fe_abs(F, y));
    }
  }
}

TEST_CASE("division against multiplication") {
  for (Field F : {q3(), q2(), f2t(), f3t()}) {
    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i) {
      FieldElem x = random_elem(F, rng), y = random_elem(F, rng);
      FieldElem q = fe_div(F, x, y);
      FieldElem back = fe_mul(F, q, y);
      CHECK(fe_congruent(F, back, x, std::min(back.window(), x.window())));
    }
  }
  Field F = q3();
  CHECK_THROWS_AS(fe_div(F, fe_one(F), fe_zero()), value_error);
}

TEST_CASE("serialization is bit exact") {
  for (Field F : {q3(), f2t()}) {
    std::mt19937 rng(13);
    for (int i = 0; i < 30; ++i) {
      FieldElem x = random_elem(F, rng, true);
      FieldElem y = fe_parse(F, fe_str(x));
      CHECK(x.zero == y.zero);
      if (!x.zero) {
        CHECK(x.val == y.val);
        CHECK(x.digits == y.digits);
      }
    }
  }
  CHECK(fe_str(fe_zero()) == "z");
}

TEST_CASE("precision tags propagate") {
  Field F = q3();
  FieldElem coarse = fe_make(F, 0, {1, 2}, false);  // two known digits
  FieldElem fine = fe_int(F, 7);
  FieldElem prod = fe_mul(F, coarse, fine);
  CHECK(!prod.exact);
  CHECK(prod.prec() == 2);
  // cancellation eats precision
  FieldElem a = fe_make(F, 0, {1, 2, 1}, false);
  FieldElem b = fe_make(F, 0, {1, 2}, false);
  SubResult r = fe_sub_checked(F, a, b);
  if (r.value) {
    CHECK(fe_val(*r.value) >= 2);
    CHECK(r.value->prec() <= 1);
  }
}
