#pragma once

#include <optional>
#include <variant>

#include "slorb/quadext.hpp"

namespace slorb {

enum class Ambient { SL2, GL2, PGL2Demo };

// --- matrices ---------------------------------------------------------------
Mat2 mat_identity(const Field& F);
Mat2 mat_mul(const Field& F, const Mat2& X, const Mat2& Y);
Mat2 mat_add(const Field& F, const Mat2& X, const Mat2& Y);
Mat2 mat_scale(const Field& F, const FieldElem& s, const Mat2& X);
FieldElem mat_det(const Field& F, const Mat2& X);
FieldElem mat_trace(const Field& F, const Mat2& X);
Mat2 mat_inv(const Field& F, const Mat2& X);
Mat2 mat_conj(const Field& F, const Mat2& g, const Mat2& x);  // g^{-1} x g
bool mat_congruent(const Field& F, const Mat2& X, const Mat2& Y, int n);
// certified check of x g == g y mod pi^n, tolerant of entrywise cancellation
bool mat_intertwines(const Field& F, const Mat2& x, const Mat2& g, const Mat2& y, int n);
// matrix literal "[[a,b],[c,d]]" with elements in the digit-string format
std::string mat_str(const Mat2& X);
Mat2 mat_parse(const Field& F, const std::string& s);

struct GroupElement {
  Mat2 m;
  Ambient ambient = Ambient::SL2;
};

GroupElement make_sl2(const Field& F, const Mat2& m);   // checks det == 1
GroupElement make_gl2(const Field& F, const Mat2& m);   // checks det != 0
GroupElement make_pgl2_demo(const Field& F, const Mat2& m);

// --- classification ----------------------------------------------------------
struct Central {
  int sign;  // z = sign * identity
};
struct CentralUnipotent {
  int sign;            // central factor z
  FieldElem corner;    // eta with z^{-1} x ~ [[1, eta],[0,1]]
  int class_index;     // index of the class of eta in the group used
  Mat2 reducer;        // g in SL2 with g^{-1} (z^{-1} x) g = [[1, corner],[0,1]]
};
struct SplitRegular {
  FieldElem eigenvalue;  // a with x ~ diag(a, a^{-1})
  Mat2 diagonalizer;     // g in GL2 with g^{-1} x g = diag(a, a^{-1})
};
struct EllipticRegular {
  AlgebraDesc algebra;  // monic descriptor built from the characteristic polynomial
  AlgElem torus_elt;    // t in E^1 with embed(t) conjugate to x
};
using ElementClass = std::variant<Central, CentralUnipotent, SplitRegular, EllipticRegular>;

// classify needs a square-class group to name the unipotent class of eta
ElementClass classify(const Field& F, const GroupElement& x, const SquareClassGroup& G);

// eta-invariant of a central-unipotent element (the class of the reduced
// upper-right corner)
int unipotent_class_index(const Field& F, const GroupElement& x, const SquareClassGroup& G);

enum class StableSize { One, Two, SquareClasses };
StableSize stable_class_size(const ElementClass& cls);

// conjugation by diag(lambda_q, 1), lambda_q the canonical rep of class q
GroupElement twist(const Field& F, const GroupElement& x, const SquareClassGroup& G, int q);

// --- conjugacy ----------------------------------------------------------------
struct ConjugacyWitness {
  Mat2 g;               // g^{-1} x g = y at working precision
  int det_class_index;  // square class of det g
};

// Solves x g = g y exactly; for group SL2 the witness has det in the class of
// 1 (scaled to det 1), for GL2 any invertible witness.  Absence is certified
// through the centralizer-algebra structure of the intertwiner space.
std::optional<ConjugacyWitness> are_conjugate(const Field& F, const GroupElement& x,
                                              const GroupElement& y, Ambient group,
                                              const SquareClassGroup& G);

// --- section 8 demo -----------------------------------------------------------
// true unipotent: conjugate over F into the unipotent radical of a rational
// Borel (PGL2Demo ambient works modulo center)
bool is_true_unipotent(const Field& F, const GroupElement& x);
// equality modulo scalars
bool pgl2_equal(const Field& F, const Mat2& X, const Mat2& Y);

}  // namespace slorb
