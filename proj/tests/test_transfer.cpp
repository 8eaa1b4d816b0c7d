#include "doctest.h"
#include "slorb/transfer.hpp"

using namespace slorb;

namespace {

Field q3() { return Field::parse_spec("Qp:p=3:N=30"); }
Field q2() { return Field::parse_spec("Qp:p=2:N=30"); }
Field f2t() { return Field::parse_spec("Fq((t)):q=2:N=30"); }
Field f3t() { return Field::parse_spec("Fq((t)):q=3:N=30"); }

int level_for(const Field& F) { return F.equal_char_two() ? 5 : 3; }

std::vector<QuadAlgebra> all_algebras(const Field& F) {
  std::vector<QuadAlgebra> out;
  out.emplace_back(F, AlgebraDesc::split());
  if (F.equal_char_two()) {
    out.emplace_back(F, AlgebraDesc::artin_schreier(fe_one(F)));
    out.emplace_back(F, AlgebraDesc::artin_schreier(fe_uniformizer(F, -1)));
  } else {
    FieldElem u = F.p() == 2 ? fe_int(F, 5) : fe_digit(F, F.residue().smallest_nonsquare());
    out.emplace_back(F, AlgebraDesc::kummer(u));
    out.emplace_back(F, AlgebraDesc::kummer(fe_uniformizer(F, 1)));
  }
  return out;
}

std::vector<TestFunction> panel(const Field& F) {
  std::vector<TestFunction> fs;
  fs.push_back(indicator_maximal(F, Ambient::SL2));
  fs.push_back(indicator_congruence(F, 1, Ambient::SL2));
  fs.push_back(indicator_congruence(F, 2, Ambient::SL2));
  fs.push_back(double_coset_indicator(F, 2, Ambient::SL2,
                                      Mat2{fe_one(F), fe_one(F), fe_zero(), fe_one(F)}));
  return fs;
}

}  // namespace

TEST_CASE("transfer factor basics") {
  Field F = q3();
  QuadAlgebra E(F, AlgebraDesc::kummer(fe_int(F, 3)));
  TransferNormalization norm = default_normalization(F, E);
  // t = tau: Delta = c |gap(tau)|
  QSqrt d0 = transfer_factor(F, E, norm.tau, norm);
  QSqrt expected = ae_abs_gap(F, E, eigen_gap(F, E, norm.tau)) * norm.c;
  CHECK(d0 == expected);
  // t = 2 + sqrt(3), tau = t, c = 1: the normalized gap scale is
  // sqrt(|2 sqrt 3|_E) = sqrt(1/3)
  AlgElem t = ae_make(fe_int(F, 2), fe_one(F));
  TransferNormalization self{t, 1, Rational(1)};
  QSqrt dt = transfer_factor(F, E, t, self);
  CHECK(dt == QSqrt::sqrt_of(Rational(1, 3), 3));
  CHECK(dt * dt == QSqrt(Rational(1, 3)));
  // non-regular input rejected
  CHECK_THROWS_AS(transfer_factor(F, E, ae_one(F, E), self), value_error);
}

TEST_CASE("transfer of the zero function vanishes at every depth") {
  Field F = q3();
  SquareClassGroup G = square_classes(F, 3);
  QuadAlgebra E(F, AlgebraDesc::kummer(fe_int(F, 2)));
  TestFunction f = tf_scale(Rational(0), indicator_congruence(F, 2, Ambient::SL2));
  TransferValue tv = transfer_value(F, E, f, 1, {0, 1, 2}, G);
  for (const TransferRow& row : tv.table) CHECK(row.value.is_zero());
  CHECK(tv.stabilized);
}

TEST_CASE("transfer stabilization across fields and algebras") {
  for (Field F : {q3(), q2(), f2t(), f3t()}) {
    SquareClassGroup G = square_classes(F, level_for(F));
    std::vector<int> depths{0, 1, 2, 3};
    for (const QuadAlgebra& E : all_algebras(F)) {
      for (const TestFunction& f : panel(F)) {
        TransferValue tv = transfer_value(F, E, f, 1, depths, G);
        INFO(F.spec_string() << " " << E.str() << " " << f.name);
        CHECK(tv.stabilized);
        // the two deepest rows agree exactly
        CHECK(tv.table[depths.size() - 1].value == tv.table[depths.size() - 2].value);
      }
    }
  }
}

TEST_CASE("galois symmetry of the transfer value") {
  for (Field F : {q3(), f2t()}) {
    SquareClassGroup G = square_classes(F, level_for(F));
    std::vector<int> depths{0, 1, 2};
    for (const QuadAlgebra& E : all_algebras(F)) {
      for (const TestFunction& f : panel(F)) {
        TransferValue a = transfer_value(F, E, f, 1, depths, G, false);
        TransferValue b = transfer_value(F, E, f, 1, depths, G, true);
        INFO(F.spec_string() << " " << E.str() << " " << f.name);
        for (size_t i = 0; i < depths.size(); ++i)
          CHECK(a.table[i].value == b.table[i].value);
      }
    }
  }
}

TEST_CASE("split transfer equals the stable unipotent orbital integral") {
  for (Field F : {q3(), q2(), f2t(), f3t()}) {
    SquareClassGroup G = square_classes(F, level_for(F));
    QuadAlgebra S(F, AlgebraDesc::split());
    GroupElement u0 = make_sl2(F, Mat2{fe_one(F), fe_one(F), fe_zero(), fe_one(F)});
    for (const TestFunction& f : panel(F)) {
      TransferValue tv = transfer_value(F, S, f, 1, {0, 1, 2, 3}, G);
      Rational so = stable_orbital(F, u0, f, G).value;
      INFO(F.spec_string() << " " << f.name);
      CHECK(tv.stabilized);
      CHECK(tv.value == QSqrt(so));
    }
  }
}

TEST_CASE("phi terms and the endoscopic expansion") {
  for (Field F : {q3(), q2(), f2t()}) {
    SquareClassGroup G = square_classes(F, level_for(F));
    std::vector<EndoscopicDatum> data = elliptic_data(F, G);
    CHECK(data.size() == G.size());  // in bijection with the dual
    TestFunction f = indicator_maximal(F, Ambient::SL2);
    TestFunction f2 = indicator_congruence(F, 2, Ambient::SL2);

    for (const QuadAlgebra& E : all_algebras(F)) {
      if (E.split()) continue;
      for (int depth : {1, 2}) {
        GroupElement t =
            make_sl2(F, embed_norm_one(F, E, norm_one_sample(F, E, depth).t));
        for (const TestFunction* ff : {&f, &f2}) {
          // O(t, f) = sum over elliptic data of Phi^E(t), exactly
          QSqrt sum(Rational(0));
          int nonzero = 0;
          for (const EndoscopicDatum& d : data) {
            QSqrt phi = phi_term(F, d, t, *ff, G);
            if (!phi.is_zero()) ++nonzero;
            sum = sum + phi;
          }
          Rational direct = orbital_integral(F, t, *ff, G).value;
          CHECK(sum == QSqrt(direct));
          CHECK(nonzero <= 2);  // {G,1} and the matching torus at most
        }
      }
    }
    // split t: only {G,1} contributes
    if (!F.equal_char_two()) {
      FieldElem a = fe_int(F, F.p() == 2 ? 5 : 2);
      GroupElement d = make_sl2(F, Mat2{a, fe_zero(), fe_zero(), fe_inv(F, a)});
      QSqrt sum(Rational(0));
      for (const EndoscopicDatum& dat : data) sum = sum + phi_term(F, dat, d, f, G);
      CHECK(sum == QSqrt(orbital_integral(F, d, f, G).value));
    }
  }
}

TEST_CASE("phi term with mismatched algebra vanishes") {
  Field F = q3();
  SquareClassGroup G = square_classes(F, 3);
  QuadAlgebra Eu(F, AlgebraDesc::kummer(fe_int(F, 2)));
  QuadAlgebra Er(F, AlgebraDesc::kummer(fe_int(F, 3)));
  GroupElement t = make_sl2(F, embed_norm_one(F, Eu, norm_one_sample(F, Eu, 1).t));
  TestFunction f = indicator_maximal(F, Ambient::SL2);
  EndoscopicDatum mismatched = EndoscopicDatum::torus(Er.desc());
  CHECK(phi_term(F, mismatched, t, f, G).is_zero());
  EndoscopicDatum matching = EndoscopicDatum::torus(Eu.desc());
  QSqrt phi = phi_term(F, matching, t, f, G);
  // the matching phi term is numerically O^{eps}(t, f): Delta cancels exactly
  QuadChar eps;
  eps.algebra = Eu.desc();
  for (const FieldElem& r : G.reps) eps.signs.push_back(quad_char(F, Eu, r));
  CHECK(phi == QSqrt(kappa_orbital(F, t, f, eps, G).value));
}
