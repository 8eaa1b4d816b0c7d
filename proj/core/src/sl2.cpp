#include "slorb/sl2.hpp"

#include <array>

namespace slorb {

Mat2 mat_identity(const Field& F) {
  return Mat2{fe_one(F), fe_zero(), fe_zero(), fe_one(F)};
}

Mat2 mat_mul(const Field& F, const Mat2& X, const Mat2& Y) {
  return Mat2{fe_sum(F, {fe_mul(F, X.a, Y.a), fe_mul(F, X.b, Y.c)}),
              fe_sum(F, {fe_mul(F, X.a, Y.b), fe_mul(F, X.b, Y.d)}),
              fe_sum(F, {fe_mul(F, X.c, Y.a), fe_mul(F, X.d, Y.c)}),
              fe_sum(F, {fe_mul(F, X.c, Y.b), fe_mul(F, X.d, Y.d)})};
}

Mat2 mat_add(const Field& F, const Mat2& X, const Mat2& Y) {
  return Mat2{fe_add(F, X.a, Y.a), fe_add(F, X.b, Y.b), fe_add(F, X.c, Y.c),
              fe_add(F, X.d, Y.d)};
}

Mat2 mat_scale(const Field& F, const FieldElem& s, const Mat2& X) {
  return Mat2{fe_mul(F, s, X.a), fe_mul(F, s, X.b), fe_mul(F, s, X.c), fe_mul(F, s, X.d)};
}

FieldElem mat_det(const Field& F, const Mat2& X) {
  return fe_sum(F, {fe_mul(F, X.a, X.d), fe_neg(F, fe_mul(F, X.b, X.c))});
}

FieldElem mat_trace(const Field& F, const Mat2& X) { return fe_add(F, X.a, X.d); }

Mat2 mat_inv(const Field& F, const Mat2& X) {
  FieldElem det = mat_det(F, X);
  if (det.is_zero()) throw value_error("inverse of singular matrix");
  return Mat2{fe_div(F, X.d, det), fe_div(F, fe_neg(F, X.b), det),
              fe_div(F, fe_neg(F, X.c), det), fe_div(F, X.a, det)};
}

Mat2 mat_conj(const Field& F, const Mat2& g, const Mat2& x) {
  return mat_mul(F, mat_mul(F, mat_inv(F, g), x), g);
}

bool mat_congruent(const Field& F, const Mat2& X, const Mat2& Y, int n) {
  return fe_congruent(F, X.a, Y.a, n) && fe_congruent(F, X.b, Y.b, n) &&
         fe_congruent(F, X.c, Y.c, n) && fe_congruent(F, X.d, Y.d, n);
}

bool mat_intertwines(const Field& F, const Mat2& x, const Mat2& g, const Mat2& y, int n) {
  auto ent = [](const Mat2& M, int i, int j) -> const FieldElem& {
    if (i == 0) return j == 0 ? M.a : M.b;
    return j == 0 ? M.c : M.d;
  };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      SubResult s = fe_sum_checked(
          F, {fe_mul(F, ent(x, i, 0), ent(g, 0, j)), fe_mul(F, ent(x, i, 1), ent(g, 1, j)),
              fe_neg(F, fe_mul(F, ent(g, i, 0), ent(y, 0, j))),
              fe_neg(F, fe_mul(F, ent(g, i, 1), ent(y, 1, j)))});
      if (s.value) {
        if (!fe_val_at_least(F, *s.value, n)) return false;
      } else if (s.cancel_floor < n) {
        throw precision_error("intertwining congruence undecidable");
      }
    }
  return true;
}

std::string mat_str(const Mat2& X) {
  return "[[" + fe_str(X.a) + "," + fe_str(X.b) + "],[" + fe_str(X.c) + "," + fe_str(X.d) +
         "]]";
}

Mat2 mat_parse(const Field& F, const std::string& s) {
  if (s.size() < 10 || s.substr(0, 2) != "[[" || s.substr(s.size() - 2) != "]]")
    throw value_error("bad matrix literal: " + s);
  std::string inner = s.substr(2, s.size() - 4);
  size_t mid = inner.find("],[");
  if (mid == std::string::npos) throw value_error("bad matrix literal: " + s);
  std::string row1 = inner.substr(0, mid), row2 = inner.substr(mid + 3);
  auto split2 = [&](const std::string& r) {
    size_t comma = r.find(',');
    // element strings contain commas between digits; the separator between
    // entries is the comma that follows a complete element, so split at the
    // comma whose suffix parses as an element.  Elements never contain ']'.
    // Try each comma from the left.
    size_t pos = 0;
    while ((comma = r.find(',', pos)) != std::string::npos) {
      std::string left = r.substr(0, comma), right = r.substr(comma + 1);
      try {
        FieldElem a = fe_parse(F, left);
        FieldElem b = fe_parse(F, right);
        return std::pair<FieldElem, FieldElem>(a, b);
      } catch (...) {
        pos = comma + 1;
      }
    }
    throw value_error("bad matrix row: " + r);
  };
  auto [a, b] = split2(row1);
  auto [c, d] = split2(row2);
  return Mat2{a, b, c, d};
}

GroupElement make_sl2(const Field& F, const Mat2& m) {
  FieldElem det = mat_det(F, m);
  if (!fe_congruent(F, det, fe_one(F), std::min(det.window(), F.precision())))
    throw value_error("matrix is not in SL(2) at working precision");
  return GroupElement{m, Ambient::SL2};
}

GroupElement make_gl2(const Field& F, const Mat2& m) {
  FieldElem det = mat_det(F, m);
  if (det.is_zero()) throw value_error("matrix is singular");
  return GroupElement{m, Ambient::GL2};
}

GroupElement make_pgl2_demo(const Field& F, const Mat2& m) {
  FieldElem det = mat_det(F, m);
  if (det.is_zero()) throw value_error("matrix is singular");
  return GroupElement{m, Ambient::PGL2Demo};
}

namespace {

bool is_exact_zero(const FieldElem& x) { return x.is_zero(); }

// z in {+1, -1} with m == z * I at precision; nullopt otherwise
std::optional<int> central_sign(const Field& F, const Mat2& m) {
  if (!is_exact_zero(m.b) || !is_exact_zero(m.c)) return std::nullopt;
  for (int z : {1, -1}) {
    FieldElem zf = fe_int(F, z);
    if (fe_eq(F, m.a, zf) && fe_eq(F, m.d, zf)) return z;
  }
  return std::nullopt;
}

// reduce a nontrivial unipotent u to [[1, eta],[0,1]]: returns (eta, g) with
// g in SL(2,F) and g^{-1} u g = [[1, eta],[0,1]]
std::pair<FieldElem, Mat2> reduce_unipotent(const Field& F, const Mat2& u) {
  // n = u - 1 = [[alpha, beta],[gamma, -alpha]], n^2 = 0
  FieldElem alpha = fe_sub(F, u.a, fe_one(F));
  FieldElem beta = u.b;
  FieldElem gamma = u.c;
  if (gamma.is_zero()) {
    if (!alpha.is_zero()) throw value_error("matrix is not unipotent");
    if (beta.is_zero()) throw value_error("trivial unipotent has no class");
    return {beta, mat_identity(F)};
  }
  // g = [[alpha, -gamma^{-1}],[gamma, 0]], det 1; g^{-1} n g = [[0, -1/gamma],[0,0]]
  FieldElem ginv = fe_inv(F, gamma);
  Mat2 g{alpha, fe_neg(F, ginv), gamma, fe_zero()};
  return {fe_neg(F, ginv), g};
}

// difference with uncertifiable full cancellation treated as a true zero;
// only safe where a zero is a legitimate geometric outcome (eigenvector
// formulas) and downstream results get verified by multiplication
FieldElem fe_sub_floor(const Field& F, const FieldElem& x, const FieldElem& y) {
  SubResult r = fe_sub_checked(F, x, y);
  return r.value ? *r.value : fe_zero();
}

}  // namespace

ElementClass classify(const Field& F, const GroupElement& x, const SquareClassGroup& G) {
  if (x.ambient != Ambient::SL2) throw value_error("classify needs the SL2 ambient");
  const Mat2& m = x.m;

  if (auto z = central_sign(F, m)) return Central{*z};

  FieldElem T = mat_trace(F, m);

  bool nonsemisimple = false;
  if (F.p() == 2 && !F.mixed()) {
    nonsemisimple = T.is_zero();  // char 2: double root iff trace 0 exactly
  } else {
    // disc = T^2 - 4 must vanish
    SubResult disc = fe_sum_checked(F, {fe_mul(F, T, T), fe_int(F, -4)});
    if (!disc.value)
      throw precision_error("cannot separate zero discriminant from tiny nonzero");
    nonsemisimple = disc.value->is_zero();
  }

  if (nonsemisimple) {
    int z = 1;
    if (!F.equal_char_two()) {
      // T = 2z
      if (fe_eq(F, T, fe_int(F, 2)))
        z = 1;
      else if (fe_eq(F, T, fe_int(F, -2)))
        z = -1;
      else
        throw value_error("non-semisimple SL(2) element with trace != +-2");
    }
    Mat2 u = z == 1 ? m : mat_scale(F, fe_int(F, -1), m);
    auto [eta, g] = reduce_unipotent(F, u);
    int idx = square_class_of(F, G, eta);
    return CentralUnipotent{z, eta, idx, g};
  }

  // regular semisimple: split or elliptic according to the characteristic poly
  if (!F.equal_char_two()) {
    FieldElem disc = fe_sum(F, {fe_mul(F, T, T), fe_int(F, -4)});
    SquareCheck chk = fe_is_square(F, disc);
    if (chk.square) {
      FieldElem lambda = fe_div(F, fe_add(F, T, *chk.witness), fe_int(F, 2));
      // eigenvector columns: (b, lambda - a) or (lambda - d, c)
      FieldElem l2 = fe_div(F, fe_sub(F, T, *chk.witness), fe_int(F, 2));
      Mat2 g;
      if (!m.b.is_zero()) {
        g = Mat2{m.b, m.b, fe_sub_floor(F, lambda, m.a), fe_sub_floor(F, l2, m.a)};
      } else if (!m.c.is_zero()) {
        g = Mat2{fe_sub_floor(F, lambda, m.d), fe_sub_floor(F, l2, m.d), m.c, m.c};
      } else {
        // already diagonal
        lambda = m.a;
        g = mat_identity(F);
      }
      return SplitRegular{lambda, g};
    }
    return EllipticRegular{AlgebraDesc::monic(fe_neg(F, T), fe_one(F)),
                           AlgElem{fe_zero(), fe_one(F)}};
  }

  // equal characteristic 2, T != 0: lambda^2 + T lambda + 1 = 0
  FieldElem aAS = fe_inv(F, fe_mul(F, T, T));
  std::optional<FieldElem> mu = artin_schreier_root(F, aAS);
  if (mu) {
    FieldElem lambda = fe_mul(F, T, *mu);
    FieldElem l2 = fe_add(F, lambda, T);  // other root: T - lambda = T + lambda
    Mat2 g;
    if (!m.b.is_zero()) {
      g = Mat2{m.b, m.b, fe_sub_floor(F, lambda, m.a), fe_sub_floor(F, l2, m.a)};
    } else if (!m.c.is_zero()) {
      g = Mat2{fe_sub_floor(F, lambda, m.d), fe_sub_floor(F, l2, m.d), m.c, m.c};
    } else {
      lambda = m.a;
      g = mat_identity(F);
    }
    return SplitRegular{lambda, g};
  }
  return EllipticRegular{AlgebraDesc::monic(T, fe_one(F)), AlgElem{fe_zero(), fe_one(F)}};
}

int unipotent_class_index(const Field& F, const GroupElement& x, const SquareClassGroup& G) {
  ElementClass cls = classify(F, x, G);
  if (auto* cu = std::get_if<CentralUnipotent>(&cls)) return cu->class_index;
  throw value_error("unipotent invariant of a non central-unipotent element");
}

StableSize stable_class_size(const ElementClass& cls) {
  if (std::holds_alternative<Central>(cls)) return StableSize::One;
  if (std::holds_alternative<SplitRegular>(cls)) return StableSize::One;
  if (std::holds_alternative<EllipticRegular>(cls)) return StableSize::Two;
  return StableSize::SquareClasses;
}

GroupElement twist(const Field& F, const GroupElement& x, const SquareClassGroup& G, int q) {
  const FieldElem& lambda = G.reps.at(q);
  Mat2 m{x.m.a, fe_div(F, x.m.b, lambda), fe_mul(F, x.m.c, lambda), x.m.d};
  return GroupElement{m, x.ambient};
}

namespace {

// transporter {g : x g = g y} as a kernel basis of a 4x4 exact linear system
std::vector<Mat2> intertwiner_space(const Field& F, const Mat2& x, const Mat2& y) {
  // coefficient of g_{rc} in equation (i,j): x_{ir} delta_{cj} - delta_{ir} y_{cj}
  auto X = [&](int i, int j) -> const FieldElem& {
    static const FieldElem* noop = nullptr;
    (void)noop;
    const Mat2& M = x;
    if (i == 0 && j == 0) return M.a;
    if (i == 0 && j == 1) return M.b;
    if (i == 1 && j == 0) return M.c;
    return M.d;
  };
  auto Y = [&](int i, int j) -> const FieldElem& {
    const Mat2& M = y;
    if (i == 0 && j == 0) return M.a;
    if (i == 0 && j == 1) return M.b;
    if (i == 1 && j == 0) return M.c;
    return M.d;
  };

  // A[eq][var] with eq = 2i+j, var = 2r+c
  std::array<std::array<FieldElem, 4>, 4> A;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          std::vector<FieldElem> terms;
          if (c == j) terms.push_back(X(i, r));
          if (i == r) terms.push_back(fe_neg(F, Y(c, j)));
          SubResult s = fe_sum_checked(F, terms);
          if (!s.value) throw precision_error("intertwiner system coefficient uncertain");
          A[2 * i + j][2 * r + c] = *s.value;
        }

  // Gaussian elimination with lowest-valuation pivoting
  std::array<int, 4> pivot_col{-1, -1, -1, -1};
  std::vector<char> col_used(4, 0);
  int rank = 0;
  for (int row = 0; row < 4; ++row) {
    // find the best pivot among remaining rows/cols
    int best_r = -1, best_c = -1;
    long best_v = 0;
    for (int rr = rank; rr < 4; ++rr)
      for (int cc = 0; cc < 4; ++cc) {
        if (col_used[cc] || A[rr][cc].is_zero()) continue;
        long v = fe_val(A[rr][cc]);
        if (best_r < 0 || v < best_v) {
          best_r = rr;
          best_c = cc;
          best_v = v;
        }
      }
    if (best_r < 0) break;
    std::swap(A[rank], A[best_r]);
    col_used[best_c] = 1;
    pivot_col[rank] = best_c;
    // eliminate below and above
    for (int rr = 0; rr < 4; ++rr) {
      if (rr == rank || A[rr][best_c].is_zero()) continue;
      FieldElem factor = fe_div(F, A[rr][best_c], A[rank][best_c]);
      for (int cc = 0; cc < 4; ++cc) {
        SubResult s = fe_sum_checked(
            F, {A[rr][cc], fe_neg(F, fe_mul(F, factor, A[rank][cc]))});
        if (s.value) {
          A[rr][cc] = *s.value;
        } else if (s.cancel_floor >= best_v + F.precision() / 2) {
          A[rr][cc] = fe_zero();  // cancellation certified deep enough
        } else {
          throw precision_error("intertwiner elimination lost certification");
        }
      }
    }
    ++rank;
  }

  std::vector<Mat2> basis;
  for (int freec = 0; freec < 4; ++freec) {
    if (col_used[freec]) continue;
    std::array<FieldElem, 4> sol{fe_zero(), fe_zero(), fe_zero(), fe_zero()};
    sol[freec] = fe_one(F);
    for (int r = rank - 1; r >= 0; --r) {
      int pc = pivot_col[r];
      std::vector<FieldElem> terms;
      for (int cc = 0; cc < 4; ++cc) {
        if (cc == pc || sol[cc].is_zero() || A[r][cc].is_zero()) continue;
        terms.push_back(fe_neg(F, fe_mul(F, A[r][cc], sol[cc])));
      }
      SubResult s = fe_sum_checked(F, terms);
      sol[pc] = s.value ? fe_div(F, *s.value, A[r][pc]) : fe_zero();
    }
    basis.push_back(Mat2{sol[0], sol[1], sol[2], sol[3]});
  }
  return basis;
}

std::optional<FieldElem> checked_det(const Field& F, const Mat2& m) {
  SubResult s = fe_sum_checked(F, {fe_mul(F, m.a, m.d), fe_neg(F, fe_mul(F, m.b, m.c))});
  if (!s.value) return std::nullopt;
  if (s.value->is_zero()) return std::nullopt;
  return *s.value;
}

// small search points used to find nondegenerate values of quadratic forms
std::vector<FieldElem> search_scalars(const Field& F) {
  std::vector<FieldElem> out{fe_zero(), fe_one(F)};
  for (int c = 2; c < F.q(); ++c) out.push_back(fe_digit(F, c));
  out.push_back(fe_uniformizer(F, 1));
  if (!F.equal_char_two()) out.push_back(fe_int(F, -1));
  out.push_back(fe_add(F, fe_one(F), fe_uniformizer(F, 1)));
  out.push_back(fe_uniformizer(F, -1));
  for (int c = 1; c < F.q(); ++c)
    out.push_back(fe_make(F, 1, {static_cast<uint8_t>(c)}, true));
  return out;
}

}  // namespace

std::optional<ConjugacyWitness> are_conjugate(const Field& F, const GroupElement& x,
                                              const GroupElement& y, Ambient group,
                                              const SquareClassGroup& G) {
  if (x.ambient != y.ambient) throw value_error("are_conjugate: ambient mismatch");

  std::vector<Mat2> basis = intertwiner_space(F, x.m, y.m);
  if (basis.empty()) return std::nullopt;

  // find an invertible point of the intertwiner space
  std::optional<Mat2> g0;
  std::optional<FieldElem> det0;
  std::vector<FieldElem> scalars = search_scalars(F);
  for (size_t i = 0; i < basis.size() && !g0; ++i) {
    if (auto d = checked_det(F, basis[i])) {
      g0 = basis[i];
      det0 = d;
    }
  }
  for (size_t i = 0; i < basis.size() && !g0; ++i)
    for (size_t j = i + 1; j < basis.size() && !g0; ++j)
      for (const FieldElem& s : scalars) {
        if (s.is_zero()) continue;
        Mat2 cand = mat_add(F, basis[i], mat_scale(F, s, basis[j]));
        if (auto d = checked_det(F, cand)) {
          g0 = cand;
          det0 = d;
          break;
        }
      }
  if (!g0) return std::nullopt;  // every intertwiner is singular

  if (group == Ambient::GL2) {
    ConjugacyWitness w;
    w.g = *g0;
    w.det_class_index = square_class_of(F, G, *det0);
    return w;
  }

  // SL2: the reachable det classes are det(g0) * {dets of the centralizer of y}
  // with the centralizer algebra F[y]; decide by the class of det(g0), then
  // realize an intertwiner of square determinant and scale it to det 1.
  ElementClass ycls = classify(F, make_sl2(F, y.m), G);
  bool reachable = false;
  int idx0 = square_class_of(F, G, *det0);
  int triv = trivial_class_index(G);
  if (std::holds_alternative<Central>(ycls)) {
    reachable = true;  // centralizer GL(2): all classes
  } else if (std::holds_alternative<CentralUnipotent>(ycls)) {
    reachable = idx0 == triv;  // centralizer dets are squares a^2
  } else if (std::holds_alternative<SplitRegular>(ycls)) {
    reachable = true;  // split torus dets cover every class
  } else {
    // elliptic: dets of F[y]^x are the norms of E
    const auto& ell = std::get<EllipticRegular>(ycls);
    QuadAlgebra E(F, ell.algebra);
    reachable = quad_char(F, E, *det0) == 1;
  }
  if (!reachable) return std::nullopt;

  // search c = a + b*y in the centralizer with det(g0 c) a square
  std::vector<FieldElem> scal = search_scalars(F);
  for (const FieldElem& a : scal)
    for (const FieldElem& b : scal) {
      if (a.is_zero() && b.is_zero()) continue;
      Mat2 cent{fe_sum(F, {a, fe_mul(F, b, y.m.a)}), fe_mul(F, b, y.m.b),
                fe_mul(F, b, y.m.c), fe_sum(F, {a, fe_mul(F, b, y.m.d)})};
      Mat2 cand = mat_mul(F, *g0, cent);
      auto d = checked_det(F, cand);
      if (!d) continue;
      SquareCheck chk = fe_is_square(F, *d);
      if (!chk.square || !chk.witness) continue;
      FieldElem sinv = fe_inv(F, *chk.witness);
      Mat2 gg = mat_scale(F, sinv, cand);
      ConjugacyWitness w;
      w.g = gg;
      w.det_class_index = triv;
      return w;
    }
  throw value_error("SL(2) witness search exhausted (enlarge the search grid)");
}

bool pgl2_equal(const Field& F, const Mat2& X, const Mat2& Y) {
  // X = c Y for a scalar c
  const FieldElem* xs[4] = {&X.a, &X.b, &X.c, &X.d};
  const FieldElem* ys[4] = {&Y.a, &Y.b, &Y.c, &Y.d};
  FieldElem c;
  bool have = false;
  for (int i = 0; i < 4 && !have; ++i) {
    if (!ys[i]->is_zero() && !xs[i]->is_zero()) {
      c = fe_div(F, *xs[i], *ys[i]);
      have = true;
    }
  }
  if (!have) return false;
  for (int i = 0; i < 4; ++i) {
    if (ys[i]->is_zero() != xs[i]->is_zero()) return false;
    if (ys[i]->is_zero()) continue;
    FieldElem prod = fe_mul(F, c, *ys[i]);
    if (!fe_congruent(F, prod, *xs[i], std::min(prod.window(), xs[i]->window()))) return false;
  }
  return true;
}

bool is_true_unipotent(const Field& F, const GroupElement& x) {
  const Mat2& m = x.m;
  // the image must be unipotent: x^{p^k} central for a small k in residue
  // characteristic p; over Q_p the powers only converge to the center, so the
  // test is a congruence at half the working precision
  bool power_central = false;
  int rounds = F.mixed() ? F.precision() : 3;
  int threshold = F.mixed() ? F.precision() / 2 : 0;
  Mat2 power = m;
  for (int k = 0; k < rounds && !power_central; ++k) {
    Mat2 next = power;
    for (int i = 1; i < F.p(); ++i) next = mat_mul(F, next, power);
    power = next;  // previous power raised to p
    if (x.ambient == Ambient::PGL2Demo) {
      power_central = pgl2_equal(F, power, mat_identity(F));
    } else if (!F.mixed()) {
      power_central = central_sign(F, power).has_value();
    } else {
      for (int z : {1, -1}) {
        Mat2 zi = mat_scale(F, fe_int(F, z), mat_identity(F));
        try {
          if (mat_congruent(F, power, zi, threshold)) power_central = true;
        } catch (const precision_error&) {
          power_central = true;  // indistinguishable from central at precision
        }
      }
    }
  }
  if (!power_central) return false;

  // rational double eigenvalue lambda with lambda^2 = det, 2 lambda = trace
  FieldElem T = mat_trace(F, m);
  FieldElem D = mat_det(F, m);
  std::optional<FieldElem> lambda;
  if (F.p() == 2 && !F.mixed()) {
    if (!T.is_zero()) return false;  // distinct eigenvalues: not unipotent image
    SquareCheck chk = fe_is_square(F, D);
    if (!chk.square) return false;
    lambda = chk.witness;
  } else {
    SubResult disc = fe_sum_checked(
        F, {fe_mul(F, T, T), fe_neg(F, fe_mul(F, fe_int(F, 4), D))});
    if (!disc.value)
      throw precision_error("eigenvalue multiplicity undecidable at precision");
    if (!disc.value->is_zero()) return false;
    lambda = fe_div(F, T, fe_int(F, 2));
  }
  if (!lambda || lambda->is_zero()) return false;
  // m - lambda is nilpotent with a rational kernel line over F, so some
  // rational Borel conjugates x into strict upper triangular form
  return true;
}

}  // namespace slorb
