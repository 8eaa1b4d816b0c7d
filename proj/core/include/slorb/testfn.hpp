#pragma once

#include <string>
#include <vector>

#include "slorb/sl2.hpp"

namespace slorb {

// Level-n locally constant compactly supported function: sum of coefficients
// times indicators of cosets g K_n, K_n the principal congruence subgroup of
// SL(2,O) (resp. GL(2,O)).  Representatives are pairwise inequivalent mod
// right multiplication by K_n.
struct TestFunction {
  int level = 1;
  Ambient ambient = Ambient::SL2;
  std::vector<std::pair<Rational, Mat2>> terms;
  // set when the function is the indicator of the full maximal compact; the
  // coset data is then implicit and engines may use closed-form fiber counts
  bool maximal_indicator = false;
  Rational maximal_coeff = 1;

  std::string name;  // used in reports
};

// indicator of K_n itself
TestFunction indicator_congruence(const Field& F, int n, Ambient ambient);
// indicator of SL(2,O) (resp. GL(2,O))
TestFunction indicator_maximal(const Field& F, Ambient ambient);
// indicator of the double coset K_n g K_n for integral unit-determinant g
TestFunction double_coset_indicator(const Field& F, int n, Ambient ambient, const Mat2& g);
// the same function viewed on GL(2): extend-by-zero off the SL(2) support
// (identical coset data read in the GL(2) ambient)
TestFunction extend_to_gl2(const TestFunction& f);

// pointwise evaluation
Rational evaluate(const Field& F, const TestFunction& f, const Mat2& x);

// linear combination (levels must match)
TestFunction tf_add(const Field& F, const TestFunction& f, const TestFunction& g);
TestFunction tf_scale(const Rational& c, const TestFunction& f);

// file format: header "level=n; ambient=SL2|GL2", lines "coeff; [[a,b],[c,d]]"
std::string tf_serialize(const TestFunction& f);
TestFunction tf_parse(const Field& F, const std::string& text);

// membership x in g K_n (certified at precision)
bool coset_member(const Field& F, const Mat2& g, const Mat2& x, int n);

}  // namespace slorb
