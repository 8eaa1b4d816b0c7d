#pragma once

#include "slorb/orbital.hpp"

namespace slorb {

// An elliptic endoscopic datum: the group itself with the trivial character,
// or a norm-one torus with its quadratic character.
struct EndoscopicDatum {
  bool group_datum = false;  // {G, 1}
  AlgebraDesc algebra;       // {T_{E/F}, eps_{E/F}} otherwise
  static EndoscopicDatum whole_group() {
    EndoscopicDatum d;
    d.group_datum = true;
    return d;
  }
  static EndoscopicDatum torus(AlgebraDesc a) {
    EndoscopicDatum d;
    d.algebra = std::move(a);
    return d;
  }
  std::string str() const { return group_datum ? "{G,1}" : "{T_" + algebra.str() + ",eps}"; }
};

// base point and scalar entering the transfer factor; tau is the depth-0
// norm-one sample and c defaults to 1 for field algebras and q/(2(q-1)) for
// the split datum (the value that makes the split transfer equal the stable
// unipotent orbital integral under this library's measure convention)
struct TransferNormalization {
  AlgElem tau;
  long tau_gap_valuation = 0;
  Rational c = 1;
};
TransferNormalization default_normalization(const Field& F, const QuadAlgebra& E);

// Delta(t) = c * eps((iota t - bar iota t)/(iota tau - bar iota tau)) *
// |iota t - bar iota t|, with the normalized gap scale |.| = sqrt of the
// algebra module; exact in Q + Q sqrt(q).  The {G,1} datum has Delta = 1.
QSqrt transfer_factor(const Field& F, const QuadAlgebra& E, const AlgElem& t,
                      const TransferNormalization& norm);

struct TransferRow {
  int depth;
  long gap_valuation;
  QSqrt value;  // Delta(t_k) O^eps(t_k, f)
};

struct TransferValue {
  QSqrt value;                  // the stabilized value f^E at the z-side
  bool stabilized = false;
  int stabilization_depth = 0;  // k0: first depth from which rows repeat
  std::vector<TransferRow> table;
  TransferNormalization norm;
};

// Delta(t_k) O^{eps_E}(t_k, f) for t_k = z * sample(E, k) over the given
// depth schedule; asserts the values coincide from some depth on
TransferValue transfer_value(const Field& F, const QuadAlgebra& E, const TestFunction& f,
                             int z_sign, const std::vector<int>& depths,
                             const SquareClassGroup& G);
// variant replacing each sample by its inverse (Galois-symmetry checks)
TransferValue transfer_value(const Field& F, const QuadAlgebra& E, const TestFunction& f,
                             int z_sign, const std::vector<int>& depths,
                             const SquareClassGroup& G, bool invert_samples);

// Phi^{E}(t) of the expansion: stable orbital integral for {G,1}; for a torus
// datum matching t's algebra the product Delta^{-1} * (Delta O^eps) assembled
// from independently computed factors; 0 on mismatch
QSqrt phi_term(const Field& F, const EndoscopicDatum& datum, const GroupElement& t,
               const TestFunction& f, const SquareClassGroup& G);

// all elliptic endoscopic data at the group's truncation, {G,1} first
std::vector<EndoscopicDatum> elliptic_data(const Field& F, const SquareClassGroup& G);

}  // namespace slorb
