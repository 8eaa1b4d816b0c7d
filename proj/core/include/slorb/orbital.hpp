#pragma once

#include "slorb/testfn.hpp"
#include "slorb/tree.hpp"

namespace slorb {

// The measure convention fixed for every computation in this library.  All
// verified identities are identities for THIS normalization:
//   vol(SL(2,O)) = 1 for dg and vol(GL(2,O)) = 1 for the GL(2) integrals;
//   on centralizers: vol(E^1) = 1 (elliptic), vol of the unit part of the
//   split torus = 1, vol(Z(F)U(O)) = 1 (unipotent, transported to each orbit
//   member through the conjugation that standardizes it; kappa-averages use
//   the coherent transported measures, which multiply the standard-form
//   values by |lambda_q| on the twisted unipotent classes);
//   vol(Q_F) = 1 (kappa-averages are averages, not sums).
std::string measure_convention();

struct OrbitalDiagnostics {
  int radius = 0;           // enumeration radius actually used
  int truncation = 0;       // Q_F truncation level (kappa-averages)
  bool stabilized = true;   // region certified closed / value stable under +2
  std::string note;
};

struct OrbitalResult {
  Rational value;
  OrbitalDiagnostics diag;
  std::string str() const;  // "value=p/q; radius=R; N=N; stable=true|false"
};

// O_G(x, f): x in SL(2,F), f an SL2-ambient test function
OrbitalResult orbital_integral(const Field& F, const GroupElement& x, const TestFunction& f,
                               const SquareClassGroup& G);

// O_{GL(2)}(x, ftilde): the independent GL(2)-route used to cross-check the
// stable orbital integral (Lemma-style reduction); x still has det 1
OrbitalResult gl2_orbital_integral(const Field& F, const GroupElement& x,
                                   const TestFunction& ftilde, const SquareClassGroup& G);

// kappa-orbital integral as the transport-weighted average over the
// truncated Q_F (vol(Q_F) = 1)
OrbitalResult kappa_orbital(const Field& F, const GroupElement& x, const TestFunction& f,
                            const QuadChar& kappa, const SquareClassGroup& G);

// trivial-kappa average; must agree with the GL(2) route up to the documented
// induced-measure factor
OrbitalResult stable_orbital(const Field& F, const GroupElement& x, const TestFunction& f,
                             const SquareClassGroup& G);

// O(x,f) - sum_kappa O^kappa(x,f) over the full dual at the group level
OrbitalResult fourier_residual(const Field& F, const GroupElement& x, const TestFunction& f,
                               const SquareClassGroup& G);

// the factor mu with stable = mu * gl2_route for regular semisimple classes:
// 1 when det of the centralizer has odd valuations (ramified/split/central),
// 1/2 otherwise (unramified elliptic, central-unipotent)
Rational induced_measure_factor(const Field& F, const ElementClass& cls);

}  // namespace slorb
