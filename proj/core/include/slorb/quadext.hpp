#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slorb/squares.hpp"

namespace slorb {

enum class AlgKind { Split, Kummer, ArtinSchreier, Monic };

// Descriptor grammar: "split" | "kummer:d=<elt>" | "as:a=<elt>" |
// "monic:b=<elt>:c=<elt>", with <elt> in the "v;d0,d1,..." element format.
struct AlgebraDesc {
  AlgKind kind = AlgKind::Split;
  FieldElem d;     // Kummer
  FieldElem a;     // ArtinSchreier
  FieldElem b, c;  // Monic x^2 + bx + c

  static AlgebraDesc split() { return AlgebraDesc{}; }
  static AlgebraDesc kummer(FieldElem d);
  static AlgebraDesc artin_schreier(FieldElem a);
  static AlgebraDesc monic(FieldElem b, FieldElem c);
  static AlgebraDesc parse(const Field& F, const std::string& s);
  std::string str() const;
};

// Element of the quadratic algebra in the basis (1, theta); for split E the
// coordinates are the two idempotent components.
struct AlgElem {
  FieldElem x, y;
  bool is_zero() const { return x.is_zero() && y.is_zero(); }
};

class QuadAlgebra {
 public:
  QuadAlgebra(const Field& F, const AlgebraDesc& desc);

  const AlgebraDesc& desc() const { return desc_; }
  bool split() const { return split_; }
  bool ramified() const { return e_ == 2; }
  int e() const { return e_; }
  int f() const { return f_; }
  long qE() const { return qE_; }
  // theta^2 + B theta + C = 0 (field case)
  const FieldElem& minB() const { return minB_; }
  const FieldElem& minC() const { return minC_; }

  std::string str() const { return desc_.str(); }

 private:
  AlgebraDesc desc_;
  bool split_ = false;
  FieldElem minB_, minC_;
  int e_ = 1, f_ = 1;
  long qE_ = 0;
};

// epsilon_{E/F}(x) in {+1,-1}: +1 for split E; for a field, +1 exactly on norms
int quad_char(const Field& F, const QuadAlgebra& E, const FieldElem& x);
int quad_char(const Field& F, const AlgebraDesc& E, const FieldElem& x);

// --- element operations ------------------------------------------------
AlgElem ae_make(const FieldElem& x, const FieldElem& y);
AlgElem ae_from_base(const Field& F, const QuadAlgebra& E, const FieldElem& x);
AlgElem ae_one(const Field& F, const QuadAlgebra& E);
AlgElem ae_theta(const Field& F, const QuadAlgebra& E);  // field case generator
AlgElem ae_conj(const Field& F, const QuadAlgebra& E, const AlgElem& t);
AlgElem ae_add(const Field& F, const QuadAlgebra& E, const AlgElem& s, const AlgElem& t);
AlgElem ae_sub(const Field& F, const QuadAlgebra& E, const AlgElem& s, const AlgElem& t);
AlgElem ae_mul(const Field& F, const QuadAlgebra& E, const AlgElem& s, const AlgElem& t);
AlgElem ae_inv(const Field& F, const QuadAlgebra& E, const AlgElem& t);
AlgElem ae_pow(const Field& F, const QuadAlgebra& E, const AlgElem& t, long k);
FieldElem ae_norm(const Field& F, const QuadAlgebra& E, const AlgElem& t);
FieldElem ae_trace(const Field& F, const QuadAlgebra& E, const AlgElem& t);
bool ae_eq(const Field& F, const QuadAlgebra& E, const AlgElem& s, const AlgElem& t);
std::string ae_str(const AlgElem& t);

// normalized absolute value of the algebra: |y|_E = q_E^{-v_E(y)} = |N(y)|_F
// (split: |y1 y2|_F)
Rational ae_abs(const Field& F, const QuadAlgebra& E, const AlgElem& t);
// v_E(y) for field E
long ae_val(const Field& F, const QuadAlgebra& E, const AlgElem& t);
// sqrt of ae_abs: the eigenvalue-gap scale used by transfer factors; exact in
// q^{Z/2}
QSqrt ae_abs_gap(const Field& F, const QuadAlgebra& E, const AlgElem& t);

// iota(t) - bar iota(t) = t - conj(t); zero iff t = +-1 among norm-one t
AlgElem eigen_gap(const Field& F, const QuadAlgebra& E, const AlgElem& t);

// an element of v_E = 1 in a ramified field algebra (greedy digit refinement
// of x so that v(x^2 - Bx + C) becomes odd, then scaling)
AlgElem ramified_uniformizer(const Field& F, const QuadAlgebra& E);
bool ae_is_regular(const Field& F, const QuadAlgebra& E, const AlgElem& t);

// Norm-one sample with strictly increasing gap valuation in the depth k.
struct NormOneSample {
  AlgElem t;
  long gap_valuation;  // v_E of the eigenvalue gap (split: v_F of a component)
};
NormOneSample norm_one_sample(const Field& F, const QuadAlgebra& E, int depth);

// 2x2 matrix over F in row-major order
struct Mat2 {
  FieldElem a, b, c, d;
};

// multiplication-by-t in the basis (1, theta) (split: diagonal); requires
// N(t) = 1 at working precision
Mat2 embed_norm_one(const Field& F, const QuadAlgebra& E, const AlgElem& t);

// isomorphism-class equality of etale algebras via their characters on the
// square classes of the given group
bool algebra_isomorphic(const Field& F, const QuadAlgebra& A, const QuadAlgebra& B,
                        const SquareClassGroup& G);

// An endoscopic character: a +-1 character of the square-class group, carried
// by its associated etale algebra.
struct QuadChar {
  AlgebraDesc algebra;
  std::vector<int> signs;  // value on each class rep of the group
  bool trivial = false;
};

// The full dual of Q_F at the group's level, trivial character first.  Each
// character is matched to the quadratic etale algebra that induces it; the
// match doubles as a finite-level nondegeneracy check of the pairing.
std::vector<QuadChar> enumerate_dual(const Field& F, const SquareClassGroup& G);

}  // namespace slorb
