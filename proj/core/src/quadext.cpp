#include "slorb/quadext.hpp"

#include <algorithm>
#include <map>

namespace slorb {

AlgebraDesc AlgebraDesc::kummer(FieldElem d) {
  AlgebraDesc a;
  a.kind = AlgKind::Kummer;
  a.d = std::move(d);
  return a;
}

AlgebraDesc AlgebraDesc::artin_schreier(FieldElem av) {
  AlgebraDesc a;
  a.kind = AlgKind::ArtinSchreier;
  a.a = std::move(av);
  return a;
}

AlgebraDesc AlgebraDesc::monic(FieldElem b, FieldElem c) {
  AlgebraDesc a;
  a.kind = AlgKind::Monic;
  a.b = std::move(b);
  a.c = std::move(c);
  return a;
}

AlgebraDesc AlgebraDesc::parse(const Field& F, const std::string& s) {
  if (s == "split") return split();
  auto want = [&](const std::string& prefix) {
    return s.rfind(prefix, 0) == 0 ? std::optional<std::string>(s.substr(prefix.size()))
                                   : std::nullopt;
  };
  if (auto rest = want("kummer:d=")) return kummer(fe_parse(F, *rest));
  if (auto rest = want("as:a=")) return artin_schreier(fe_parse(F, *rest));
  if (auto rest = want("monic:b=")) {
    size_t mid = rest->find(":c=");
    if (mid == std::string::npos) throw value_error("monic descriptor needs :c=");
    return monic(fe_parse(F, rest->substr(0, mid)), fe_parse(F, rest->substr(mid + 3)));
  }
  throw value_error("bad algebra descriptor: " + s);
}

std::string AlgebraDesc::str() const {
  switch (kind) {
    case AlgKind::Split: return "split";
    case AlgKind::Kummer: return "kummer:d=" + fe_str(d);
    case AlgKind::ArtinSchreier: return "as:a=" + fe_str(a);
    case AlgKind::Monic: return "monic:b=" + fe_str(b) + ":c=" + fe_str(c);
  }
  return "?";
}

namespace {

// ramification of the Kummer extension F(sqrt(d)); d not a square
void kummer_ramification(const Field& F, const FieldElem& d, int& e, int& f) {
  if (fe_val(d) % 2 != 0) {
    e = 2;
    f = 1;
    return;
  }
  if (F.p() != 2) {
    // even valuation, nonsquare unit part: unramified
    e = 1;
    f = 2;
    return;
  }
  // Q_2: unramified iff the unit part is in the class of 5 mod squares
  FieldElem u = d;
  u.val = 0;
  int m8 = 0;
  for (int i = 2; i >= 0; --i) m8 = 2 * m8 + fe_digit_at(F, u, i);
  if (m8 == 5) {
    e = 1;
    f = 2;
  } else {
    e = 2;
    f = 1;
  }
}

}  // namespace

QuadAlgebra::QuadAlgebra(const Field& F, const AlgebraDesc& desc) : desc_(desc) {
  switch (desc.kind) {
    case AlgKind::Split:
      split_ = true;
      e_ = f_ = 1;
      qE_ = F.q();
      return;
    case AlgKind::Kummer: {
      if (F.equal_char_two())
        throw value_error("Kummer descriptor is inseparable in characteristic 2");
      if (desc.d.is_zero()) throw value_error("Kummer parameter must be nonzero");
      SquareCheck chk = fe_is_square(F, desc.d);
      if (chk.square)
        throw value_error("Kummer parameter is a square: algebra degenerates to split");
      minB_ = fe_zero();
      minC_ = fe_neg(F, desc.d);
      kummer_ramification(F, desc.d, e_, f_);
      break;
    }
    case AlgKind::ArtinSchreier: {
      if (!F.equal_char_two())
        throw value_error("Artin-Schreier descriptor needs equal characteristic 2");
      ASReduction red = artin_schreier_reduce(F, desc.a);
      if (red.cls == ASClass::Trivial)
        throw value_error("Artin-Schreier parameter lies in the image of x^2+x: split");
      minB_ = fe_one(F);
      minC_ = desc.a;
      e_ = red.cls == ASClass::Ramified ? 2 : 1;
      f_ = 3 - e_;
      break;
    }
    case AlgKind::Monic: {
      if (F.equal_char_two()) {
        if (desc.b.is_zero())
          throw value_error("monic x^2+bx+c is inseparable in characteristic 2 when b = 0");
        // theta = b psi reduces to psi^2 + psi + c/b^2
        FieldElem a = fe_div(F, desc.c, fe_mul(F, desc.b, desc.b));
        ASReduction red = artin_schreier_reduce(F, a);
        if (red.cls == ASClass::Trivial)
          throw value_error("monic descriptor has a rational root: split");
        e_ = red.cls == ASClass::Ramified ? 2 : 1;
        f_ = 3 - e_;
      } else {
        FieldElem disc = fe_sub(F, fe_mul(F, desc.b, desc.b),
                                fe_mul(F, fe_int(F, 4), desc.c));
        if (disc.is_zero()) throw value_error("monic descriptor is inseparable");
        if (fe_is_square(F, disc).square)
          throw value_error("monic descriptor splits over F");
        kummer_ramification(F, disc, e_, f_);
      }
      minB_ = desc.b;
      minC_ = desc.c;
      break;
    }
  }
  long q = F.q();
  qE_ = f_ == 2 ? q * q : q;
}

int quad_char(const Field& F, const QuadAlgebra& E, const FieldElem& x) {
  if (x.is_zero()) throw value_error("quad_char of zero");
  if (E.split()) return 1;
  if (F.equal_char_two()) {
    // reduce the minimal polynomial to Artin-Schreier form
    FieldElem a = fe_div(F, E.minC(), fe_mul(F, E.minB(), E.minB()));
    return artin_schreier_symbol(F, a, x) == 0 ? 1 : -1;
  }
  FieldElem disc = fe_sub(F, fe_mul(F, E.minB(), E.minB()),
                          fe_mul(F, fe_int(F, 4), E.minC()));
  return hilbert_symbol(F, disc, x);
}

int quad_char(const Field& F, const AlgebraDesc& E, const FieldElem& x) {
  return quad_char(F, QuadAlgebra(F, E), x);
}

AlgElem ae_make(const FieldElem& x, const FieldElem& y) { return AlgElem{x, y}; }

AlgElem ae_from_base(const Field& F, const QuadAlgebra& E, const FieldElem& x) {
  if (E.split()) return AlgElem{x, x};
  return AlgElem{x, fe_zero()};
}

AlgElem ae_one(const Field& F, const QuadAlgebra& E) { return ae_from_base(F, E, fe_one(F)); }

AlgElem ae_theta(const Field& F, const QuadAlgebra& E) {
  if (E.split()) throw value_error("split algebra has no distinguished generator");
  return AlgElem{fe_zero(), fe_one(F)};
}

AlgElem ae_conj(const Field& F, const QuadAlgebra& E, const AlgElem& t) {
  if (E.split()) return AlgElem{t.y, t.x};
  // theta-bar = -B - theta
  return AlgElem{fe_sub(F, t.x, fe_mul(F, E.minB(), t.y)), fe_neg(F, t.y)};
}

AlgElem ae_add(const Field& F, const QuadAlgebra& E, const AlgElem& s, const AlgElem& t) {
  (void)E;
  return AlgElem{fe_add(F, s.x, t.x), fe_add(F, s.y, t.y)};
}

AlgElem ae_sub(const Field& F, const QuadAlgebra& E, const AlgElem& s, const AlgElem& t) {
  (void)E;
  return AlgElem{fe_sub(F, s.x, t.x), fe_sub(F, s.y, t.y)};
}

AlgElem ae_mul(const Field& F, const QuadAlgebra& E, const AlgElem& s, const AlgElem& t) {
  if (E.split()) return AlgElem{fe_mul(F, s.x, t.x), fe_mul(F, s.y, t.y)};
  // (x1 + y1 th)(x2 + y2 th), th^2 = -B th - C; cancellation-tracked sums
  FieldElem y1y2 = fe_mul(F, s.y, t.y);
  FieldElem xp = fe_sum(F, {fe_mul(F, s.x, t.x), fe_neg(F, fe_mul(F, E.minC(), y1y2))});
  FieldElem yp = fe_sum(F, {fe_mul(F, s.x, t.y), fe_mul(F, s.y, t.x),
                            fe_neg(F, fe_mul(F, E.minB(), y1y2))});
  return AlgElem{xp, yp};
}

FieldElem ae_norm(const Field& F, const QuadAlgebra& E, const AlgElem& t) {
  if (E.split()) return fe_mul(F, t.x, t.y);
  // x^2 - Bxy + Cy^2
  return fe_sum(F, {fe_mul(F, t.x, t.x),
                    fe_neg(F, fe_mul(F, E.minB(), fe_mul(F, t.x, t.y))),
                    fe_mul(F, E.minC(), fe_mul(F, t.y, t.y))});
}

FieldElem ae_trace(const Field& F, const QuadAlgebra& E, const AlgElem& t) {
  if (E.split()) return fe_add(F, t.x, t.y);
  return fe_sum(F, {fe_mul(F, fe_int(F, 2), t.x), fe_neg(F, fe_mul(F, E.minB(), t.y))});
}

AlgElem ae_inv(const Field& F, const QuadAlgebra& E, const AlgElem& t) {
  if (E.split()) return AlgElem{fe_inv(F, t.x), fe_inv(F, t.y)};
  FieldElem n = ae_norm(F, E, t);
  if (n.is_zero()) throw value_error("inverse of a zero divisor");
  AlgElem c = ae_conj(F, E, t);
  return AlgElem{fe_div(F, c.x, n), fe_div(F, c.y, n)};
}

AlgElem ae_pow(const Field& F, const QuadAlgebra& E, const AlgElem& t, long k) {
  if (k < 0) return ae_pow(F, E, ae_inv(F, E, t), -k);
  AlgElem r = ae_one(F, E), b = t;
  while (k > 0) {
    if (k & 1) r = ae_mul(F, E, r, b);
    b = k > 1 ? ae_mul(F, E, b, b) : b;
    k >>= 1;
  }
  return r;
}

bool ae_eq(const Field& F, const QuadAlgebra& E, const AlgElem& s, const AlgElem& t) {
  (void)E;
  return fe_eq(F, s.x, t.x) && fe_eq(F, s.y, t.y);
}

std::string ae_str(const AlgElem& t) { return "(" + fe_str(t.x) + "|" + fe_str(t.y) + ")"; }

Rational ae_abs(const Field& F, const QuadAlgebra& E, const AlgElem& t) {
  if (t.is_zero()) throw value_error("absolute value of zero");
  FieldElem n = ae_norm(F, E, t);
  if (n.is_zero()) throw value_error("absolute value of a zero divisor");
  return fe_abs(F, n);
}

long ae_val(const Field& F, const QuadAlgebra& E, const AlgElem& t) {
  if (E.split()) throw value_error("v_E undefined for the split algebra");
  long vn = fe_val(ae_norm(F, E, t));
  if (E.ramified()) return vn;
  if (vn % 2 != 0) throw value_error("norm valuation parity violated");
  return vn / 2;
}

QSqrt ae_abs_gap(const Field& F, const QuadAlgebra& E, const AlgElem& t) {
  return QSqrt::sqrt_of(ae_abs(F, E, t), F.q());
}

AlgElem eigen_gap(const Field& F, const QuadAlgebra& E, const AlgElem& t) {
  if (E.split()) return ae_sub(F, E, t, ae_conj(F, E, t));
  // t - conj(t) = (B y, 2 y) in the (1, theta) basis; no cancellation
  return AlgElem{fe_mul(F, E.minB(), t.y), fe_mul(F, fe_int(F, 2), t.y)};
}

bool ae_is_regular(const Field& F, const QuadAlgebra& E, const AlgElem& t) {
  if (E.split()) {
    SubResult r = fe_sub_checked(F, t.x, t.y);
    return r.value.has_value() && !r.value->is_zero();
  }
  return !t.y.is_zero();
}

AlgElem ramified_uniformizer(const Field& F, const QuadAlgebra& E) {
  if (!E.ramified() || E.split())
    throw value_error("ramified_uniformizer needs a ramified field algebra");
  // v_E(x + theta) = v_F(x^2 - Bx + C); the maximum over integral x is odd
  // for a ramified extension, and the digit-greedy refinement attains it
  auto quad = [&](const FieldElem& x) {
    return fe_sum(F, {fe_mul(F, x, x), fe_neg(F, fe_mul(F, E.minB(), x)), E.minC()});
  };
  FieldElem x = fe_zero();
  long v = fe_val(quad(x));
  for (int pos = 0; pos <= F.precision() && v % 2 == 0; ++pos) {
    FieldElem best = x;
    long best_v = v;
    for (int d = 1; d < F.q(); ++d) {
      FieldElem cand = fe_add(F, x, fe_make(F, pos, {static_cast<uint8_t>(d)}, true));
      long vc;
      try {
        vc = fe_val(quad(cand));
      } catch (const precision_error&) {
        continue;
      }
      if (vc > best_v) {
        best = cand;
        best_v = vc;
      }
    }
    x = best;
    v = best_v;
  }
  if (v % 2 == 0)
    throw precision_error("no odd-valuation element found: ramification unresolvable");
  int k = static_cast<int>((v - 1) / 2);
  FieldElem xs = x;
  if (!xs.is_zero()) xs.val -= k;
  return AlgElem{xs, fe_uniformizer(F, -k)};
}

NormOneSample norm_one_sample(const Field& F, const QuadAlgebra& E, int depth) {
  if (depth < 0) throw value_error("norm_one_sample: depth >= 0 required");
  if (depth + 2 > F.precision())
    throw precision_error("requested depth exceeds working precision");
  NormOneSample out;
  if (E.split()) {
    // over Q_2, v(a+1) saturates at 1, so shift one deeper to keep the gap
    // valuation strictly increasing in the depth
    int shift = F.mixed() && F.p() == 2 ? 2 : 1;
    FieldElem a = fe_add(F, fe_one(F), fe_uniformizer(F, depth + shift));
    out.t = AlgElem{a, fe_inv(F, a)};
    AlgElem gap = eigen_gap(F, E, out.t);
    out.gap_valuation = fe_val(gap.x);
    return out;
  }
  // Hilbert 90: t = y/conj(y) = y^2/N(y) for y = c + pi^depth theta, computed
  // structurally so genuinely-zero components stay certified:
  //   y^2 = (c^2 - C s^2) + (2cs - B s^2) theta,  N(y) = c^2 - Bcs + C s^2
  FieldElem s = fe_uniformizer(F, depth);
  const FieldElem& B = E.minB();
  const FieldElem& C = E.minC();
  std::vector<FieldElem> c_candidates{fe_one(F)};
  for (int d = 2; d < F.q(); ++d) c_candidates.push_back(fe_digit(F, d));
  c_candidates.push_back(fe_add(F, fe_one(F), fe_uniformizer(F, 1)));
  c_candidates.push_back(fe_int(F, 1 + F.p()));
  for (const FieldElem& c : c_candidates) {
    try {
      FieldElem s2 = fe_mul(F, s, s);
      SubResult nres = fe_sum_checked(
          F, {fe_mul(F, c, c), fe_neg(F, fe_mul(F, B, fe_mul(F, c, s))), fe_mul(F, C, s2)});
      if (!nres.value || nres.value->is_zero()) continue;
      FieldElem N = *nres.value;
      SubResult xres =
          fe_sum_checked(F, {fe_mul(F, c, c), fe_neg(F, fe_mul(F, C, s2))});
      FieldElem xs = xres.value ? *xres.value : fe_zero();
      if (!xres.value && xres.cancel_floor < F.precision() - 1) continue;
      SubResult yres = fe_sum_checked(
          F, {fe_mul(F, fe_int(F, 2), fe_mul(F, c, s)), fe_neg(F, fe_mul(F, B, s2))});
      if (!yres.value || yres.value->is_zero()) continue;
      AlgElem t{xs.is_zero() ? fe_zero() : fe_div(F, xs, N), fe_div(F, *yres.value, N)};
      if (!ae_is_regular(F, E, t)) continue;
      out.t = t;
      out.gap_valuation = ae_val(F, E, eigen_gap(F, E, t));
      return out;
    } catch (const precision_error&) {
      continue;
    }
  }
  throw precision_error("no certified norm-one sample at this depth");
}

Mat2 embed_norm_one(const Field& F, const QuadAlgebra& E, const AlgElem& t) {
  FieldElem n = ae_norm(F, E, t);
  if (!fe_congruent(F, n, fe_one(F), std::min(n.window(), F.precision())))
    throw value_error("embed_norm_one: norm is not 1 at working precision");
  if (E.split()) return Mat2{t.x, fe_zero(), fe_zero(), t.y};
  // multiplication by t on (1, theta)
  return Mat2{t.x, fe_neg(F, fe_mul(F, E.minC(), t.y)), t.y,
              fe_sub(F, t.x, fe_mul(F, E.minB(), t.y))};
}

bool algebra_isomorphic(const Field& F, const QuadAlgebra& A, const QuadAlgebra& B,
                        const SquareClassGroup& G) {
  if (A.split() != B.split()) return false;
  if (A.split()) return true;
  for (const FieldElem& r : G.reps)
    if (quad_char(F, A, r) != quad_char(F, B, r)) return false;
  return true;
}

std::vector<QuadChar> enumerate_dual(const Field& F, const SquareClassGroup& G) {
  const size_t n = G.size();
  // group law on class indices
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      table[i][j] = square_class_of(F, G, fe_mul(F, G.reps[i], G.reps[j]));

  int id = trivial_class_index(G);
  // greedy basis of the elementary 2-group
  std::vector<int> basis;
  std::vector<int> span{id};
  std::vector<char> in_span(n, 0);
  in_span[id] = 1;
  for (size_t g = 0; g < n && span.size() < n; ++g) {
    if (in_span[g]) continue;
    basis.push_back(static_cast<int>(g));
    std::vector<int> grown = span;
    for (int s : span) {
      int t = table[g][s];
      if (!in_span[t]) {
        in_span[t] = 1;
        grown.push_back(t);
      }
    }
    span = std::move(grown);
  }
  size_t r = basis.size();
  if ((size_t{1} << r) != n) throw value_error("square class group is not elementary 2-group");

  // all sign assignments on the basis, extended multiplicatively
  std::vector<std::vector<int>> sign_vectors;
  for (size_t mask = 0; mask < (size_t{1} << r); ++mask) {
    std::vector<int> sv(n, 0);
    sv[id] = 1;
    std::vector<int> frontier{id};
    for (size_t b = 0; b < r; ++b) {
      int sgn = (mask >> b) & 1 ? -1 : 1;
      std::vector<int> next = frontier;
      for (int s : frontier) {
        int t = table[basis[b]][s];
        if (sv[t] == 0) {
          sv[t] = sv[s] * sgn;
          next.push_back(t);
        }
      }
      frontier = std::move(next);
    }
    sign_vectors.push_back(std::move(sv));
  }

  // candidate algebras to match against characters
  std::vector<AlgebraDesc> candidates;
  if (!F.equal_char_two()) {
    for (size_t i = 0; i < n; ++i)
      if (static_cast<int>(i) != id) candidates.push_back(AlgebraDesc::kummer(G.reps[i]));
  } else {
    // Artin-Schreier parameters: trace-one constant plus odd-order poles
    const ResidueField& k = F.residue();
    int omega = -1;
    for (int c = 1; c < F.q(); ++c)
      if (k.trace_to_prime(c) == 1) {
        omega = c;
        break;
      }
    std::vector<int> poles;
    for (int i = 1; i < G.level; i += 2) poles.push_back(i);
    size_t total = 2;
    for (size_t i = 0; i < poles.size(); ++i) total *= F.q();
    for (size_t code = 0; code < total; ++code) {
      size_t c = code;
      int c0 = static_cast<int>(c % 2);
      c /= 2;
      FieldElem a = c0 ? fe_digit(F, omega) : fe_zero();
      for (int pole : poles) {
        int coeff = static_cast<int>(c % F.q());
        c /= F.q();
        if (coeff)
          a = fe_add(F, a, fe_make(F, -pole, {static_cast<uint8_t>(coeff)}, true));
      }
      if (!a.is_zero()) candidates.push_back(AlgebraDesc::artin_schreier(a));
    }
  }

  std::map<std::vector<int>, AlgebraDesc> by_signature;
  for (const AlgebraDesc& cand : candidates) {
    QuadAlgebra A(F, cand);
    std::vector<int> sig(n);
    for (size_t i = 0; i < n; ++i) sig[i] = quad_char(F, A, G.reps[i]);
    by_signature.emplace(sig, cand);
  }

  std::vector<QuadChar> dual;
  for (const auto& sv : sign_vectors) {
    QuadChar qc;
    qc.signs = sv;
    qc.trivial = std::all_of(sv.begin(), sv.end(), [](int s) { return s == 1; });
    if (qc.trivial) {
      qc.algebra = AlgebraDesc::split();
    } else {
      auto it = by_signature.find(sv);
      if (it == by_signature.end())
        throw value_error("no quadratic algebra matches a character: pairing degenerate");
      qc.algebra = it->second;
    }
    dual.push_back(std::move(qc));
  }
  // trivial character first, then deterministic order
  std::sort(dual.begin(), dual.end(), [](const QuadChar& a, const QuadChar& b) {
    if (a.trivial != b.trivial) return a.trivial;
    return a.signs > b.signs;
  });
  return dual;
}

}  // namespace slorb
