#include "slorb/orbital.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

namespace slorb {

std::string measure_convention() {
  return "vol(SL(2,O))=1; vol(GL(2,O))=1; vol(E^1)=1; vol(unit part of split "
         "torus)=1; vol(Z(F)U(O))=1 transported per orbit member; vol(Q_F)=1";
}

std::string OrbitalResult::str() const {
  std::ostringstream os;
  os << "value=" << value << "; radius=" << diag.radius << "; N=" << diag.truncation
     << "; stable=" << (diag.stabilized ? "true" : "false");
  return os.str();
}

namespace {

long group_order_mod(const Field& F, int n, bool gl2) {
  // |SL2(O/pi^n)| = q^{3n-2}(q^2-1);  |GL2(O/pi^n)| = q^{4n-3}(q-1)(q^2-1)
  long q = F.q();
  long r = 1;
  if (gl2) {
    for (int i = 0; i < 4 * n - 3; ++i) r *= q;
    return r * (q - 1) * (q * q - 1);
  }
  for (int i = 0; i < 3 * n - 2; ++i) r *= q;
  return r * (q * q - 1);
}

Rational vol_congruence_subgroup(const Field& F, int n, bool gl2) {
  return Rational(1, group_order_mod(F, n, gl2));
}

bool is_integral_mat(const Mat2& m) {
  for (const FieldElem* e : {&m.a, &m.b, &m.c, &m.d})
    if (!e->is_zero() && e->val < 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// fiber counting: #\{kappa in SL2/GL2(O/pi^n) : m k == k g mod pi^n\}
// for integral m, g with unit determinants.  The system is linear and
// homogeneous in the entries of k; kernel by valuation-pivot elimination
// with recorded column operations, then enumeration filtered by the det
// condition.
// ---------------------------------------------------------------------------

struct ModMatrix {
  // 4x4 over O, reduced mod pi^n on demand
  std::array<std::array<FieldElem, 4>, 4> a;
};

const FieldElem& mat_entry(const Mat2& m, int i, int j) {
  if (i == 0) return j == 0 ? m.a : m.b;
  return j == 0 ? m.c : m.d;
}

// reduce an integral element mod pi^n to a canonical inexact window [0, n)
FieldElem mod_pin(const Field& F, const FieldElem& x, int n) {
  if (x.is_zero() || x.val >= n) return fe_zero();
  std::vector<uint8_t> d;
  for (int pos = x.val; pos < n; ++pos)
    d.push_back(static_cast<uint8_t>(fe_digit_at(F, x, pos)));
  bool all0 = std::all_of(d.begin(), d.end(), [](uint8_t v) { return v == 0; });
  if (all0) return fe_zero();
  return fe_make(F, x.val, std::move(d), true);
}

long count_conjugators(const Field& F, const Mat2& m_w, const Mat2& g, int n, bool gl2,
                       long cap = 2000000) {
  // quick exits
  // central shortcut: if m_w == z mod pi^n for a scalar z, every kappa works
  // iff g is in the same coset of z
  for (int z : {1, -1}) {
    Mat2 zi{fe_int(F, z), fe_zero(), fe_zero(), fe_int(F, z)};
    bool m_central = true, g_matches = true;
    try {
      m_central = mat_congruent(F, m_w, zi, n);
      g_matches = mat_congruent(F, g, zi, n);
    } catch (const precision_error&) {
      m_central = false;
    }
    if (m_central) return g_matches ? group_order_mod(F, n, gl2) : 0;
  }

  // assemble A[eq][var] with eq = (i,j), var = (r,c):
  // coeff = m[i][r] delta_{cj} - delta_{ir} g[c][j]
  std::array<std::array<FieldElem, 4>, 4> A;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          std::vector<FieldElem> terms;
          if (c == j) terms.push_back(mat_entry(m_w, i, r));
          if (i == r) terms.push_back(fe_neg(F, mat_entry(g, c, j)));
          SubResult s = fe_sum_checked(F, terms);
          FieldElem v = s.value ? *s.value : fe_zero();
          if (!s.value && s.cancel_floor < n)
            throw precision_error("conjugator system coefficient uncertain");
          A[2 * i + j][2 * r + c] = mod_pin(F, v, n);
        }

  // two-sided elimination to a diagonal of pi-powers; track column ops so the
  // kernel can be mapped back: kernel(A) = W * kernel(D)
  std::array<std::array<FieldElem, 4>, 4> W;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) W[i][j] = i == j ? fe_one(F) : fe_zero();

  std::array<int, 4> diag_val{n, n, n, n};
  int rank_pos = 0;
  for (; rank_pos < 4; ++rank_pos) {
    // pivot of least valuation in the remaining block
    int pr = -1, pc = -1;
    long pv = n;
    for (int i = rank_pos; i < 4; ++i)
      for (int j = rank_pos; j < 4; ++j) {
        if (A[i][j].is_zero()) continue;
        long v = fe_val(A[i][j]);
        if (v < pv) {
          pv = v;
          pr = i;
          pc = j;
        }
      }
    if (pr < 0) break;
    std::swap(A[rank_pos], A[pr]);
    for (int i = 0; i < 4; ++i) std::swap(A[i][rank_pos], A[i][pc]);
    for (int i = 0; i < 4; ++i) std::swap(W[i][rank_pos], W[i][pc]);

    diag_val[rank_pos] = static_cast<int>(pv);
    FieldElem pivot = A[rank_pos][rank_pos];
    // clear the row and column with integral multipliers
    for (int i = rank_pos + 1; i < 4; ++i) {
      if (A[i][rank_pos].is_zero()) continue;
      FieldElem f = fe_div(F, A[i][rank_pos], pivot);
      for (int j = rank_pos; j < 4; ++j) {
        SubResult s =
            fe_sum_checked(F, {A[i][j], fe_neg(F, fe_mul(F, f, A[rank_pos][j]))});
        A[i][j] = s.value ? mod_pin(F, *s.value, n) : fe_zero();
      }
    }
    for (int j = rank_pos + 1; j < 4; ++j) {
      if (A[rank_pos][j].is_zero()) continue;
      FieldElem f = fe_div(F, A[rank_pos][j], pivot);
      for (int i = rank_pos; i < 4; ++i) {
        SubResult s =
            fe_sum_checked(F, {A[i][j], fe_neg(F, fe_mul(F, f, A[i][rank_pos]))});
        A[i][j] = s.value ? mod_pin(F, *s.value, n) : fe_zero();
        // column op on A must be mirrored on W
      }
      for (int i = 0; i < 4; ++i) {
        SubResult s =
            fe_sum_checked(F, {W[i][j], fe_neg(F, fe_mul(F, f, W[i][rank_pos]))});
        W[i][j] = s.value ? *s.value : fe_zero();
      }
    }
  }

  // kernel mod pi^n: coordinate y_i runs over pi^{n - d_i} * (digit strings of
  // length d_i), d_i = min(diag_val_i, n); enumerate and count invertibles
  long total = 1;
  std::array<int, 4> dof;
  for (int i = 0; i < 4; ++i) {
    dof[i] = std::min(diag_val[i], n);
    for (int k = 0; k < dof[i]; ++k) total *= F.q();
  }
  if (total > cap) throw value_error("conjugator kernel too large to enumerate");

  long count = 0;
  std::array<long, 4> idx{0, 0, 0, 0};
  auto y_elem = [&](int i) -> FieldElem {
    if (dof[i] == 0) return fe_zero();
    long code = idx[i];
    std::vector<uint8_t> digits;
    for (int k = 0; k < dof[i]; ++k) {
      digits.push_back(static_cast<uint8_t>(code % F.q()));
      code /= F.q();
    }
    bool all0 = std::all_of(digits.begin(), digits.end(), [](uint8_t v) { return v == 0; });
    if (all0) return fe_zero();
    return fe_make(F, n - dof[i], std::move(digits), true);
  };
  long limit0 = 1;
  for (int k = 0; k < dof[0]; ++k) limit0 *= F.q();
  long limit1 = 1;
  for (int k = 0; k < dof[1]; ++k) limit1 *= F.q();
  long limit2 = 1;
  for (int k = 0; k < dof[2]; ++k) limit2 *= F.q();
  long limit3 = 1;
  for (int k = 0; k < dof[3]; ++k) limit3 *= F.q();

  for (idx[0] = 0; idx[0] < limit0; ++idx[0])
    for (idx[1] = 0; idx[1] < limit1; ++idx[1])
      for (idx[2] = 0; idx[2] < limit2; ++idx[2])
        for (idx[3] = 0; idx[3] < limit3; ++idx[3]) {
          std::array<FieldElem, 4> y{y_elem(0), y_elem(1), y_elem(2), y_elem(3)};
          // kappa = W y (mod pi^n)
          std::array<FieldElem, 4> k;
          bool bad = false;
          for (int i = 0; i < 4 && !bad; ++i) {
            std::vector<FieldElem> terms;
            for (int j = 0; j < 4; ++j)
              if (!y[j].is_zero() && !W[i][j].is_zero())
                terms.push_back(fe_mul(F, W[i][j], y[j]));
            SubResult s = fe_sum_checked(F, terms);
            k[i] = s.value ? mod_pin(F, *s.value, n) : fe_zero();
          }
          if (bad) continue;
          // det condition
          SubResult det = fe_sum_checked(
              F, {fe_mul(F, k[0], k[3]), fe_neg(F, fe_mul(F, k[1], k[2]))});
          FieldElem dv = det.value ? mod_pin(F, *det.value, n) : fe_zero();
          if (dv.is_zero() || dv.val != 0) continue;  // not invertible mod pi^n
          if (!gl2) {
            // det == 1 mod pi^n
            SubResult one = fe_sum_checked(F, {dv, fe_neg(F, fe_one(F))});
            if (one.value && !one.value->is_zero() && fe_val(*one.value) < n) continue;
          }
          ++count;
        }
  return count;
}

// fiber sum: sum_i c_i * count(m_w, g_i) with the maximal-indicator shortcut
Rational fiber_sum(const Field& F, const Mat2& m_w, const TestFunction& f, bool gl2) {
  if (f.maximal_indicator) {
    if (!is_integral_mat(m_w)) return 0;
    return f.maximal_coeff * Rational(group_order_mod(F, f.level, gl2));
  }
  Rational out = 0;
  for (const auto& [c, g] : f.terms) {
    if (!is_integral_mat(g))
      throw value_error("orbital engine requires integral coset representatives");
    if (!is_integral_mat(m_w)) continue;  // no kappa can make it integral
    long cnt = count_conjugators(F, m_w, g, f.level, gl2);
    if (cnt) out += c * Rational(cnt);
  }
  return out;
}

// sigma^{-1} x sigma with entries valid modulo pi^n: each entry is one
// four-term bilinear sum, so uncertifiable cancellations are only accepted
// at the very end, where a floor >= n certifies a zero mod pi^n
Mat2 conj_mod(const Field& F, const Mat2& sigma, const Mat2& x, int n) {
  Mat2 left = mat_inv(F, sigma);
  auto ent = [](const Mat2& M, int i, int j) -> const FieldElem& {
    if (i == 0) return j == 0 ? M.a : M.b;
    return j == 0 ? M.c : M.d;
  };
  Mat2 out;
  FieldElem* slots[4] = {&out.a, &out.b, &out.c, &out.d};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      std::vector<FieldElem> terms;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          terms.push_back(
              fe_mul(F, fe_mul(F, ent(left, i, r), ent(x, r, c)), ent(sigma, c, j)));
      SubResult s = fe_sum_checked(F, terms);
      if (s.value) {
        *slots[2 * i + j] = *s.value;
      } else if (s.cancel_floor >= n) {
        *slots[2 * i + j] = fe_zero();
      } else {
        throw precision_error("conjugated entry uncertifiable at the coset level");
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// engines per conjugacy type
// ---------------------------------------------------------------------------

struct EngineOut {
  Rational value;
  int radius = 0;
  bool stabilized = true;
};

// elliptic x: region = fixed set (plus collar when the support has spread)
EngineOut elliptic_engine(const Field& F, const Mat2& x, const QuadAlgebra& E,
                          const TestFunction& f, bool gl2) {
  EngineOut out;
  Vertex center = min_displacement_vertex(F, x);
  if (displacement(F, x, center) != 0)
    throw value_error("elliptic engine: no fixed vertex found");

  // BFS over the fixed set; fixed sets of elliptic isometries are connected
  std::vector<Vertex> fixed{center};
  std::set<std::string> seen{vertex_str(center)};
  size_t head = 0;
  int radius = 0;
  while (head < fixed.size()) {
    Vertex v = fixed[head++];
    for (const Vertex& w : neighbors(F, v)) {
      if (!seen.insert(vertex_str(w)).second) continue;
      if (tree_act(F, x, w) == w) {
        fixed.push_back(w);
        radius = std::max(radius, tree_distance(F, center, w));
      }
    }
  }
  out.radius = radius;

  Rational voln = vol_congruence_subgroup(F, f.level, gl2);
  Rational sum = 0;

  if (!gl2) {
    for (const Vertex& w : fixed) {
      if (w.level % 2 != 0) continue;  // SL(2)-orbit of the base
      Mat2 m_w = conj_mod(F, sl2_transversal(F, w), x, f.level);
      sum += fiber_sum(F, m_w, f, false);
    }
    out.value = voln * sum;
    return out;
  }

  // GL(2): unramified tori act through the full vertex set; ramified tori
  // have pi_E swapping the two sides of the fixed edge, so sum over one side
  std::vector<Vertex> domain;
  if (!E.ramified()) {
    domain = fixed;
  } else {
    // theta maps to x under F[theta] ~ F[x], so a + theta acts through
    // a*I + x: any such element of odd determinant valuation commutes with x
    // and swaps the two halves of the fixed set.  Search candidates whose
    // matrix entries stay certified (the exact-cancellation values are
    // avoided by shifting a along pi-multiples).
    AlgElem piE = ramified_uniformizer(F, E);
    FieldElem a0 = piE.x.is_zero() ? fe_zero() : fe_div(F, piE.x, piE.y);
    std::optional<Mat2> mpi;
    for (int j = 0; j <= F.q() + 3 && !mpi; ++j) {
      FieldElem a = a0;
      if (j > 0) {
        FieldElem shift = fe_mul(F, fe_int(F, j), fe_uniformizer(F, 1));
        a = a0.is_zero() ? shift : fe_add(F, a0, shift);
      }
      try {
        SubResult da = fe_sum_checked(F, {a, x.a});
        SubResult dd = fe_sum_checked(F, {a, x.d});
        if (!da.value || !dd.value) continue;
        Mat2 cand{*da.value, x.b, x.c, *dd.value};
        SubResult det = fe_sum_checked(
            F, {fe_mul(F, cand.a, cand.d), fe_neg(F, fe_mul(F, cand.b, cand.c))});
        if (!det.value || det.value->is_zero()) continue;
        if (fe_val(*det.value) % 2 == 0) continue;
        mpi = cand;
      } catch (const precision_error&) {
        continue;
      }
    }
    if (!mpi) throw precision_error("no certified odd-valuation centralizer element");
    Vertex v0 = center;
    Vertex v1 = tree_act(F, *mpi, v0);
    if (tree_distance(F, v0, v1) == 0)
      throw value_error("ramified engine: uniformizer fixed the center");
    for (const Vertex& w : fixed)
      if (tree_distance(F, w, v0) < tree_distance(F, w, v1)) domain.push_back(w);
  }
  for (const Vertex& w : domain) {
    Mat2 m_w = conj_mod(F, gl2_transversal(F, w), x, f.level);
    sum += fiber_sum(F, m_w, f, true);
  }
  out.value = voln * sum;
  return out;
}

// split x = diag(a, a^{-1}): slab fundamental domain along the standard
// apartment; stabilizer volumes telescope against unit-orbit sizes
EngineOut split_engine(const Field& F, const FieldElem& a, const TestFunction& f, bool gl2) {
  EngineOut out;
  long la = fe_val(a);
  if (la != 0) {
    // hyperbolic element: minimal displacement 2|v(a)| exceeds the spread-0
    // support; nothing contributes
    out.value = 0;
    return out;
  }
  // fixed tube radius: d = v(a - a^{-1})
  FieldElem gap = fe_sub(F, a, fe_inv(F, a));
  int d = static_cast<int>(fe_val(gap));

  Rational voln = vol_congruence_subgroup(F, f.level, gl2);
  Rational sum = 0;
  // slab: proj(w) in {(0,0)} for GL2, {(0,0),(1,0)} for SL2 (translation
  // lengths 1 and 2); branch vertices (m, b) have proj level v(b)
  std::vector<Vertex> slab;
  std::vector<int> proj_levels = gl2 ? std::vector<int>{0} : std::vector<int>{0, 1};
  for (int s : proj_levels) slab.push_back(Vertex{s, fe_zero()});
  for (int s : proj_levels) {
    // branch vertices at (s, 0): offsets with v(b) = s, levels m in (s, s+d]
    for (int m = s + 1; m <= s + d; ++m) {
      // digits of b at positions s..m-1, leading digit nonzero
      long count = 1;
      for (int i = s + 1; i < m; ++i) count *= F.q();
      for (int lead = 1; lead < F.q(); ++lead)
        for (long code = 0; code < count; ++code) {
          std::vector<uint8_t> digits{static_cast<uint8_t>(lead)};
          long cc = code;
          for (int i = s + 1; i < m; ++i) {
            digits.push_back(static_cast<uint8_t>(cc % F.q()));
            cc /= F.q();
          }
          slab.push_back(Vertex{m, fe_make(F, s, std::move(digits), true)});
        }
    }
  }
  Mat2 x{a, fe_zero(), fe_zero(), fe_inv(F, a)};
  for (const Vertex& w : slab) {
    if (!gl2 && w.level % 2 != 0) continue;
    Mat2 m_w = gl2 ? conj_mod(F, gl2_transversal(F, w), x, f.level)
                   : conj_mod(F, sl2_transversal(F, w), x, f.level);
    sum += fiber_sum(F, m_w, f, gl2);
  }
  out.radius = d;
  out.value = voln * sum;
  return out;
}

// central-unipotent x = z u_eta: levels with explicit stabilizer weights and
// an exact geometric tail below the support window
EngineOut unipotent_engine(const Field& F, int zsign, const FieldElem& eta,
                           const TestFunction& f, bool gl2) {
  EngineOut out;
  int veta = static_cast<int>(fe_val(eta));
  int n = f.level;
  long q = F.q();

  Rational voln = vol_congruence_subgroup(F, n, gl2);
  FieldElem z = fe_int(F, zsign);
  Mat2 zmat{z, fe_zero(), fe_zero(), z};

  // level m contributes the conjugated matrix z[[1, pi^{-m} eta],[0,1]] with
  // stabilizer volume q^{-m}; integrality needs m <= veta, and the fiber is
  // the central one once m <= veta - n
  int m_hi = veta;
  int m_lo = veta - n;  // tail threshold: m <= m_lo gives the central fiber
  Rational sum = 0;
  for (int m = m_hi; m > m_lo; --m) {
    if (!gl2 && ((m % 2) + 2) % 2 != 0) continue;
    FieldElem corner = eta;
    corner.val -= m;
    Mat2 m_w{z, fe_mul(F, z, corner), fe_zero(), z};
    Rational fiber = fiber_sum(F, m_w, f, gl2);
    if (fiber != 0) sum += q_pow(q, m) * fiber;
  }
  // geometric tail: constant central fiber
  Rational central_fiber = fiber_sum(F, zmat, f, gl2);
  if (central_fiber != 0) {
    if (gl2) {
      // sum_{m <= m_lo} q^m = q^{m_lo} * q/(q-1)
      sum += central_fiber * q_pow(q, m_lo) * Rational(q, q - 1);
    } else {
      int top = m_lo - (((m_lo % 2) + 2) % 2);  // largest even <= m_lo
      sum += central_fiber * q_pow(q, top) * Rational(q * q, q * q - 1);
    }
  }
  out.value = voln * sum;
  out.radius = m_hi - m_lo;
  return out;
}

EngineOut run_engine(const Field& F, const GroupElement& x, const TestFunction& f,
                     const SquareClassGroup& G, bool gl2) {
  ElementClass cls = classify(F, make_sl2(F, x.m), G);

  if (auto* c = std::get_if<Central>(&cls)) {
    EngineOut out;
    Mat2 zmat{fe_int(F, c->sign), fe_zero(), fe_zero(), fe_int(F, c->sign)};
    out.value = evaluate(F, f, zmat);
    return out;
  }
  if (auto* cu = std::get_if<CentralUnipotent>(&cls)) {
    // normalize the corner to the canonical class representative: the value
    // becomes a class function, i.e. conjugation invariant
    return unipotent_engine(F, cu->sign, G.reps.at(cu->class_index), f, gl2);
  }
  if (auto* sp = std::get_if<SplitRegular>(&cls)) {
    return split_engine(F, sp->eigenvalue, f, gl2);
  }
  const auto& ell = std::get<EllipticRegular>(cls);
  QuadAlgebra E(F, ell.algebra);
  return elliptic_engine(F, x.m, E, f, gl2);
}

}  // namespace

OrbitalResult orbital_integral(const Field& F, const GroupElement& x, const TestFunction& f,
                               const SquareClassGroup& G) {
  if (f.ambient != Ambient::SL2)
    throw value_error("orbital_integral needs an SL2-ambient test function");
  EngineOut e = run_engine(F, x, f, G, false);
  OrbitalResult r;
  r.value = e.value;
  r.diag.radius = e.radius;
  r.diag.truncation = G.level;
  r.diag.stabilized = e.stabilized;
  return r;
}

OrbitalResult gl2_orbital_integral(const Field& F, const GroupElement& x,
                                   const TestFunction& ftilde, const SquareClassGroup& G) {
  if (ftilde.ambient != Ambient::GL2)
    throw value_error("gl2_orbital_integral needs a GL2-ambient test function");
  EngineOut e = run_engine(F, x, ftilde, G, true);
  OrbitalResult r;
  r.value = e.value;
  r.diag.radius = e.radius;
  r.diag.truncation = G.level;
  r.diag.stabilized = e.stabilized;
  return r;
}

namespace {

// O(x^q, f) for every class q, in the coherent (paper) normalization: the
// measures on the twisted centralizers are transported through diag(lambda_q,
// 1), which divides the standard-form unipotent values by |lambda_q| (and is
// the identity on the compact rss centralizers; the result is independent of
// the representative chosen for q)
std::vector<Rational> twisted_orbit_values(const Field& F, const GroupElement& x,
                                           const TestFunction& f,
                                           const SquareClassGroup& G) {
  ElementClass cls = classify(F, make_sl2(F, x.m), G);
  const auto* cu = std::get_if<CentralUnipotent>(&cls);
  std::vector<Rational> out;
  long e0 = cu ? fe_val(G.reps.at(cu->class_index)) : 0;
  for (size_t q = 0; q < G.size(); ++q) {
    GroupElement xq = twist(F, x, G, static_cast<int>(q));
    Rational v = orbital_integral(F, xq, f, G).value;
    if (cu) {
      // coherent transported measures: compare the canonical representative
      // valuations of the base class and the twisted class
      int idxq = unipotent_class_index(F, xq, G);
      long eq = fe_val(G.reps.at(idxq));
      v *= q_pow(F.q(), static_cast<long>(e0 - eq));
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

OrbitalResult kappa_orbital(const Field& F, const GroupElement& x, const TestFunction& f,
                            const QuadChar& kappa, const SquareClassGroup& G) {
  if (kappa.signs.size() != G.size())
    throw value_error("character does not match the square class group level");
  std::vector<Rational> vals = twisted_orbit_values(F, x, f, G);
  Rational sum = 0;
  for (size_t q = 0; q < G.size(); ++q) sum += Rational(kappa.signs[q]) * vals[q];
  OrbitalResult r;
  r.value = sum / Rational(G.size());
  r.diag.truncation = G.level;
  r.diag.stabilized = true;
  return r;
}

OrbitalResult stable_orbital(const Field& F, const GroupElement& x, const TestFunction& f,
                             const SquareClassGroup& G) {
  std::vector<Rational> vals = twisted_orbit_values(F, x, f, G);
  Rational sum = 0;
  for (const Rational& v : vals) sum += v;
  OrbitalResult r;
  r.value = sum / Rational(G.size());
  r.diag.truncation = G.level;
  r.diag.stabilized = true;
  return r;
}

OrbitalResult fourier_residual(const Field& F, const GroupElement& x, const TestFunction& f,
                               const SquareClassGroup& G) {
  OrbitalResult direct = orbital_integral(F, x, f, G);
  std::vector<Rational> vals = twisted_orbit_values(F, x, f, G);
  Rational sum = 0;
  for (const QuadChar& k : enumerate_dual(F, G))
    for (size_t q = 0; q < G.size(); ++q)
      sum += Rational(k.signs[q]) * vals[q] / Rational(G.size());
  OrbitalResult r;
  r.value = direct.value - sum;
  r.diag = direct.diag;
  return r;
}

Rational induced_measure_factor(const Field& F, const ElementClass& cls) {
  if (std::holds_alternative<Central>(cls)) return 1;
  if (std::holds_alternative<SplitRegular>(cls)) return 1;
  if (std::holds_alternative<CentralUnipotent>(cls)) return Rational(1, 2);
  const auto& ell = std::get<EllipticRegular>(cls);
  QuadAlgebra E(F, ell.algebra);
  return E.ramified() ? Rational(1) : Rational(1, 2);
}

}  // namespace slorb
