#pragma once

#include <optional>
#include <vector>

#include "slorb/field.hpp"

namespace slorb {

struct SquareCheck {
  bool square = false;
  // false only in equal characteristic 2 when the verdict "square" depends on
  // digits beyond the working precision of an inexact input
  bool certified = true;
  std::optional<FieldElem> witness;
};

// Membership test for (F^x)^2; pre: x != 0.
SquareCheck fe_is_square(const Field& F, const FieldElem& x);

// F^x / (F^x)^2 modulo units congruent to 1 at the given level.
struct SquareClassGroup {
  int level = 0;
  bool stabilized = false;
  std::vector<FieldElem> reps;  // canonical representatives, deterministic order

  size_t size() const { return reps.size(); }
};

SquareClassGroup square_classes(const Field& F, int level);

// index i such that x / reps[i] is a square (at the group's level)
int square_class_of(const Field& F, const SquareClassGroup& G, const FieldElem& x);

// canonical representative of valuation parity `piexp` in {0,1} whose unit
// part is 1 (the identity class rep, or pi itself)
int trivial_class_index(const SquareClassGroup& G);

// Hilbert symbol (a,b); residue characteristic != 2, or Q_2 via the classic
// mod-8 formula.  Equal characteristic 2 is rejected (use the Artin-Schreier
// symbol instead).
int hilbert_symbol(const Field& F, const FieldElem& a, const FieldElem& b);

// [a, x) = Tr_{k/F_2}(res(a dx/x)) in {0,1}; char 2 only.
int artin_schreier_symbol(const Field& F, const FieldElem& a, const FieldElem& x);

// Reduction of a modulo the Artin-Schreier map c -> c^2 + c.  Returns the
// reduced representative together with the extension type it defines.
enum class ASClass { Trivial, Unramified, Ramified };
struct ASReduction {
  ASClass cls;
  FieldElem reduced;
};
ASReduction artin_schreier_reduce(const Field& F, const FieldElem& a);

// Root of x^2 + x = a over F (char 2) when a is in the image of x^2 + x;
// nullopt when a defines a quadratic field extension.
std::optional<FieldElem> artin_schreier_root(const Field& F, const FieldElem& a);

}  // namespace slorb
