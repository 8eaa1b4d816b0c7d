#include "slorb/transfer.hpp"

namespace slorb {

namespace {

// the quadratic character of E as a sign vector on the class reps
QuadChar character_of(const Field& F, const QuadAlgebra& E, const SquareClassGroup& G) {
  QuadChar k;
  k.algebra = E.desc();
  k.trivial = E.split();
  for (const FieldElem& r : G.reps) k.signs.push_back(quad_char(F, E, r));
  return k;
}

// gap ratio (iota t - bar iota t)/(iota tau - bar iota tau) as an element of
// F: the theta-coordinates of the two gaps divide out
FieldElem gap_ratio(const Field& F, const QuadAlgebra& E, const AlgElem& t,
                    const AlgElem& tau) {
  AlgElem gt = eigen_gap(F, E, t), gtau = eigen_gap(F, E, tau);
  if (E.split()) return fe_div(F, gt.x, gtau.x);
  if (E.minB().is_zero()) return fe_div(F, gt.y, gtau.y);
  return fe_div(F, gt.x, gtau.x);
}

AlgElem scale_by_sign(const Field& F, const QuadAlgebra& E, const AlgElem& t, int z) {
  if (z == 1) return t;
  FieldElem m1 = fe_int(F, -1);
  return AlgElem{fe_mul(F, m1, t.x), fe_mul(F, m1, t.y)};
}

}  // namespace

TransferNormalization default_normalization(const Field& F, const QuadAlgebra& E) {
  TransferNormalization norm;
  NormOneSample s = norm_one_sample(F, E, 0);
  norm.tau = s.t;
  norm.tau_gap_valuation = s.gap_valuation;
  if (E.split()) {
    long q = F.q();
    norm.c = Rational(q, 2 * (q - 1));
  } else {
    norm.c = 1;
  }
  return norm;
}

QSqrt transfer_factor(const Field& F, const QuadAlgebra& E, const AlgElem& t,
                      const TransferNormalization& norm) {
  if (!ae_is_regular(F, E, t)) throw value_error("transfer factor of a non-regular element");
  if (!ae_is_regular(F, E, norm.tau))
    throw value_error("transfer factor base point is non-regular");
  FieldElem ratio = gap_ratio(F, E, t, norm.tau);
  int eps = quad_char(F, E, ratio);
  QSqrt scale = ae_abs_gap(F, E, eigen_gap(F, E, t));
  return scale * (norm.c * Rational(eps));
}

TransferValue transfer_value(const Field& F, const QuadAlgebra& E, const TestFunction& f,
                             int z_sign, const std::vector<int>& depths,
                             const SquareClassGroup& G, bool invert_samples) {
  if (depths.size() < 2) throw value_error("transfer_value needs at least two depths");
  TransferValue out;
  out.norm = default_normalization(F, E);
  QuadChar eps = character_of(F, E, G);

  for (int k : depths) {
    NormOneSample s = norm_one_sample(F, E, k);
    AlgElem tk = invert_samples ? ae_inv(F, E, s.t) : s.t;
    AlgElem zt = scale_by_sign(F, E, tk, z_sign);
    GroupElement x = make_sl2(F, embed_norm_one(F, E, zt));
    QSqrt delta = transfer_factor(F, E, zt, out.norm);
    Rational oeps = kappa_orbital(F, x, f, eps, G).value;
    TransferRow row;
    row.depth = k;
    row.gap_valuation = s.gap_valuation;
    row.value = delta * oeps;
    out.table.push_back(row);
  }

  // stabilization: the first depth from which every later row agrees
  int k0 = -1;
  for (size_t i = 0; i < out.table.size(); ++i) {
    bool all_equal = true;
    for (size_t j = i + 1; j < out.table.size(); ++j)
      if (out.table[j].value != out.table[i].value) all_equal = false;
    if (all_equal && i + 1 < out.table.size()) {
      k0 = out.table[i].depth;
      break;
    }
  }
  out.stabilized = k0 >= 0;
  out.stabilization_depth = k0;
  out.value = out.table.back().value;
  return out;
}

TransferValue transfer_value(const Field& F, const QuadAlgebra& E, const TestFunction& f,
                             int z_sign, const std::vector<int>& depths,
                             const SquareClassGroup& G) {
  return transfer_value(F, E, f, z_sign, depths, G, false);
}

QSqrt phi_term(const Field& F, const EndoscopicDatum& datum, const GroupElement& t,
               const TestFunction& f, const SquareClassGroup& G) {
  if (datum.group_datum) return QSqrt(stable_orbital(F, t, f, G).value);

  ElementClass cls = classify(F, make_sl2(F, t.m), G);
  const auto* ell = std::get_if<EllipticRegular>(&cls);
  if (!ell) return QSqrt(Rational(0));  // no embedding of the torus
  QuadAlgebra Et(F, ell->algebra);
  QuadAlgebra Ed(F, datum.algebra);
  if (!algebra_isomorphic(F, Et, Ed, G)) return QSqrt(Rational(0));

  // Delta^{-1} * (Delta * O^eps) with independently computed factors
  TransferNormalization norm = default_normalization(F, Et);
  QSqrt delta = transfer_factor(F, Et, ell->torus_elt, norm);
  QuadChar eps = character_of(F, Et, G);
  Rational oeps = kappa_orbital(F, t, f, eps, G).value;
  QSqrt product = delta * oeps;
  return delta.inverse() * product;
}

std::vector<EndoscopicDatum> elliptic_data(const Field& F, const SquareClassGroup& G) {
  std::vector<EndoscopicDatum> out;
  out.push_back(EndoscopicDatum::whole_group());
  for (const QuadChar& k : enumerate_dual(F, G))
    if (!k.trivial) out.push_back(EndoscopicDatum::torus(k.algebra));
  return out;
}

}  // namespace slorb
