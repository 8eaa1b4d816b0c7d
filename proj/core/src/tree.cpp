#include "slorb/tree.hpp"

#include <algorithm>
#include <set>

namespace slorb {

Vertex base_vertex() { return Vertex{0, fe_zero()}; }

std::string vertex_str(const Vertex& v) {
  return "(" + std::to_string(v.level) + "; " + fe_str(v.offset) + ")";
}

bool vertex_less(const Vertex& a, const Vertex& b) {
  if (a.level != b.level) return a.level < b.level;
  return fe_str(a.offset) < fe_str(b.offset);
}

namespace {

// reduce an exact offset modulo pi^n: keep canonical digits below position n
FieldElem reduce_offset(const Field& F, const FieldElem& b, int n) {
  if (b.is_zero()) return b;
  if (!b.exact && b.window() < n)
    throw precision_error("offset not known to the reduction level");
  std::vector<uint8_t> d;
  int start = b.val;
  for (int pos = start; pos < n; ++pos)
    d.push_back(static_cast<uint8_t>(fe_digit_at(F, b, pos)));
  if (d.empty()) return fe_zero();
  return fe_make(F, start, std::move(d), true);
}

}  // namespace

std::vector<Vertex> neighbors(const Field& F, const Vertex& v) {
  std::vector<Vertex> out;
  for (int c = 0; c < F.q(); ++c) {
    FieldElem off = v.offset;
    if (c != 0)
      off = fe_add(F, off, fe_make(F, v.level, {static_cast<uint8_t>(c)}, true));
    out.push_back(Vertex{v.level + 1, reduce_offset(F, off, v.level + 1)});
  }
  out.push_back(Vertex{v.level - 1, reduce_offset(F, v.offset, v.level - 1)});
  return out;
}

Vertex tree_act(const Field& F, const Mat2& g, const Vertex& v) {
  // column lattice M = g * [[pi^n, b],[0,1]]; the reduced datum needs only
  // the pivot column of minimal bottom valuation plus v(det M)
  SubResult dg = fe_sum_checked(F, {fe_mul(F, g.a, g.d), fe_neg(F, fe_mul(F, g.b, g.c))});
  if (!dg.value || dg.value->is_zero())
    throw (dg.value ? static_cast<std::runtime_error>(value_error("tree action by a singular matrix"))
                    : static_cast<std::runtime_error>(precision_error("determinant uncertifiable")));
  long det_val = fe_val(*dg.value) + v.level;

  // column 1: (g.a pi^n, g.c pi^n) pure products; column 2: two-term sums
  FieldElem a1 = fe_mul(F, g.a, fe_uniformizer(F, v.level));
  FieldElem c1 = fe_mul(F, g.c, fe_uniformizer(F, v.level));
  SubResult top2 = fe_sum_checked(F, {fe_mul(F, g.a, v.offset), g.b});
  SubResult bot2 = fe_sum_checked(F, {fe_mul(F, g.c, v.offset), g.d});

  // pivot = bottom entry of minimal valuation
  bool pivot_is_col2;
  long pivot_val;
  if (bot2.value && !bot2.value->is_zero()) {
    long v2 = fe_val(*bot2.value);
    if (c1.is_zero() || v2 <= fe_val(c1)) {
      pivot_is_col2 = true;
      pivot_val = v2;
    } else {
      pivot_is_col2 = false;
      pivot_val = fe_val(c1);
    }
  } else {
    // bottom of column 2 is zero (exactly, or to a floor)
    long floor2 = bot2.value ? std::numeric_limits<int>::max() / 2 : bot2.cancel_floor;
    if (c1.is_zero()) throw precision_error("tree action: bottom row uncertifiable");
    if (fe_val(c1) >= floor2)
      throw precision_error("tree action: pivot choice uncertifiable");
    pivot_is_col2 = false;
    pivot_val = fe_val(c1);
  }

  int n2 = static_cast<int>(det_val - 2 * pivot_val);
  FieldElem offset;
  if (pivot_is_col2) {
    if (!top2.value) {
      // T = 0 mod pi^{floor}: offset = T/pivot = 0 mod pi^{floor - pivot_val}
      if (top2.cancel_floor - pivot_val >= n2)
        offset = fe_zero();
      else
        throw precision_error("tree action: offset digits uncertifiable");
    } else if (top2.value->is_zero()) {
      offset = fe_zero();
    } else {
      offset = fe_div(F, *top2.value, *bot2.value);
    }
  } else {
    if (a1.is_zero())
      offset = fe_zero();
    else
      offset = fe_div(F, a1, c1);
  }
  return Vertex{n2, reduce_offset(F, offset, n2)};
}

int tree_distance(const Field& F, const Vertex& u, const Vertex& v) {
  // M = A_u^{-1} A_v = [[pi^{nv-nu}, pi^{-nu}(bv - bu)],[0,1]]
  int vdet = v.level - u.level;
  SubResult diff = fe_sub_checked(F, v.offset, u.offset);
  long vmin = std::min({static_cast<long>(vdet), 0L});
  if (diff.value && !diff.value->is_zero())
    vmin = std::min(vmin, fe_val(*diff.value) - static_cast<long>(u.level));
  return static_cast<int>(std::abs(vdet - 2 * vmin));
}

int displacement(const Field& F, const Mat2& g, const Vertex& v) {
  return tree_distance(F, v, tree_act(F, g, v));
}

std::vector<Vertex> tree_ball(const Field& F, const Vertex& center, int R) {
  std::vector<Vertex> out{center};
  std::set<std::string> seen{vertex_str(center)};
  size_t frontier_begin = 0;
  for (int r = 0; r < R; ++r) {
    size_t frontier_end = out.size();
    for (size_t i = frontier_begin; i < frontier_end; ++i) {
      for (const Vertex& w : neighbors(F, out[i])) {
        std::string key = vertex_str(w);
        if (seen.insert(key).second) out.push_back(w);
      }
    }
    frontier_begin = frontier_end;
  }
  return out;
}

long ball_size(long q, int R) {
  long qr = 1;
  for (int i = 0; i < R; ++i) qr *= q;
  return 1 + (q + 1) * (qr - 1) / (q - 1);
}

std::vector<Vertex> fixed_vertices(const Field& F, const Mat2& g, const Vertex& center,
                                   int R) {
  std::vector<Vertex> out;
  for (const Vertex& v : tree_ball(F, center, R))
    if (tree_act(F, g, v) == v) out.push_back(v);
  return out;
}

Vertex min_displacement_vertex(const Field& F, const Mat2& g) {
  Vertex cur = base_vertex();
  int d = displacement(F, g, cur);
  for (int guard = 0; guard < 4 * F.precision() && d > 0; ++guard) {
    bool improved = false;
    for (const Vertex& w : neighbors(F, cur)) {
      int dw = displacement(F, g, w);
      if (dw < d) {
        cur = w;
        d = dw;
        improved = true;
        break;
      }
    }
    if (!improved) break;  // on the minimal-displacement set (axis)
  }
  return cur;
}

Mat2 gl2_transversal(const Field& F, const Vertex& v) {
  return Mat2{fe_uniformizer(F, v.level), v.offset, fe_zero(), fe_one(F)};
}

Mat2 sl2_transversal(const Field& F, const Vertex& v) {
  if (v.level % 2 != 0)
    throw value_error("sl2 transversal needs an even vertex level");
  int h = v.level / 2;
  FieldElem off = v.offset;
  if (!off.is_zero()) off.val -= h;
  return Mat2{fe_uniformizer(F, h), off, fe_zero(), fe_uniformizer(F, -h)};
}

}  // namespace slorb
