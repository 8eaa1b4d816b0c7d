#include <random>
#include <set>

#include "doctest.h"
#include "slorb/tree.hpp"

using namespace slorb;

namespace {

Field q3() { return Field::parse_spec("Qp:p=3:N=12"); }
Field f2t() { return Field::parse_spec("Fq((t)):q=2:N=12"); }
Field f4t() { return Field::parse_spec("Fq((t)):q=4:N=12"); }

Mat2 random_slo(const Field& F, std::mt19937& rng) {
  Mat2 g = mat_identity(F);
  for (int step = 0; step < 3; ++step) {
    std::vector<uint8_t> d{static_cast<uint8_t>(rng() % F.q())};
    FieldElem r = fe_make(F, static_cast<int>(rng() % 2), std::move(d), true);
    Mat2 e = rng() % 2 ? Mat2{fe_one(F), r, fe_zero(), fe_one(F)}
                       : Mat2{fe_one(F), fe_zero(), r, fe_one(F)};
    g = mat_mul(F, g, e);
  }
  return g;
}

}  // namespace

TEST_CASE("neighbors: q+1, symmetric, distinct") {
  for (auto [field, deg] : {std::pair{q3(), 4}, {f2t(), 3}, {f4t(), 5}}) {
    const Field& F = field;
    std::vector<Vertex> nb = neighbors(F, base_vertex());
    CHECK(static_cast<int>(nb.size()) == deg);
    std::set<std::string> uniq;
    for (const Vertex& v : nb) {
      uniq.insert(vertex_str(v));
      CHECK(tree_distance(F, base_vertex(), v) == 1);
      // symmetry: the base is among the neighbors of each neighbor
      bool found = false;
      for (const Vertex& w : neighbors(F, v))
        if (w == base_vertex()) found = true;
      CHECK(found);
    }
    CHECK(uniq.size() == nb.size());
  }
}

TEST_CASE("ball sizes match the closed form and have no cycles") {
  for (Field F : {q3(), f2t(), f4t()}) {
    for (int R = 0; R <= (F.q() == 4 ? 4 : 6); ++R) {
      std::vector<Vertex> ball = tree_ball(F, base_vertex(), R);
      CHECK(static_cast<long>(ball.size()) == ball_size(F.q(), R));
    }
  }
  CHECK(ball_size(3, 0) == 1);
  CHECK(ball_size(3, 2) == 17);
  CHECK(ball_size(2, 1) == 4);
}

TEST_CASE("action basics") {
  Field F = q3();
  std::mt19937 rng(5);
  // SL(2,O) and scalars fix the base vertex
  for (int i = 0; i < 20; ++i) {
    Mat2 g = random_slo(F, rng);
    CHECK(tree_act(F, g, base_vertex()) == base_vertex());
  }
  Mat2 z = mat_scale(F, fe_int(F, 7), mat_identity(F));
  for (const Vertex& v : tree_ball(F, base_vertex(), 3)) CHECK(tree_act(F, z, v) == v);

  // diag(pi, 1) moves the base distance 1
  Mat2 dpi{fe_uniformizer(F, 1), fe_zero(), fe_zero(), fe_one(F)};
  Vertex moved = tree_act(F, dpi, base_vertex());
  CHECK(tree_distance(F, base_vertex(), moved) == 1);
  Mat2 dpi2{fe_uniformizer(F, 2), fe_zero(), fe_zero(), fe_one(F)};
  CHECK(tree_distance(F, base_vertex(), tree_act(F, dpi2, base_vertex())) == 2);
}

TEST_CASE("distance is a metric and the action is isometric") {
  for (Field F : {q3(), f2t()}) {
    std::vector<Vertex> ball = tree_ball(F, base_vertex(), 3);
    std::mt19937 rng(11);
    for (int i = 0; i < 40; ++i) {
      const Vertex& u = ball[rng() % ball.size()];
      const Vertex& v = ball[rng() % ball.size()];
      const Vertex& w = ball[rng() % ball.size()];
      int duv = tree_distance(F, u, v);
      CHECK(duv == tree_distance(F, v, u));
      CHECK((duv == 0) == (u == v));
      CHECK(duv <= tree_distance(F, u, w) + tree_distance(F, w, v));
      Mat2 g = random_slo(F, rng);
      CHECK(tree_distance(F, tree_act(F, g, u), tree_act(F, g, v)) == duv);
    }
  }
}

TEST_CASE("fixed sets: central, unipotent horoball boundary, elliptic") {
  Field F = q3();
  // central: the whole ball
  Mat2 z = mat_scale(F, fe_int(F, -1), mat_identity(F));
  CHECK(fixed_vertices(F, z, base_vertex(), 2).size() ==
        static_cast<size_t>(ball_size(3, 2)));

  // u0 fixes exactly the horoball of vertices with level <= 0; within the
  // 2-ball: (0,0), (-1,0), (-2,0) and the two level-0 vertices with a
  // pi^{-1} offset head
  Mat2 u0{fe_one(F), fe_one(F), fe_zero(), fe_one(F)};
  std::vector<Vertex> fx = fixed_vertices(F, u0, base_vertex(), 2);
  for (const Vertex& v : fx) CHECK(v.level <= 0);
  CHECK(fx.size() == 5);

  // unramified elliptic with gap valuation 1: the fixed set is the 1-ball (5)
  QuadAlgebra Eu(F, AlgebraDesc::kummer(fe_int(F, 2)));
  NormOneSample s = norm_one_sample(F, Eu, 1);
  REQUIRE(s.gap_valuation == 1);
  Mat2 m = embed_norm_one(F, Eu, s.t);
  std::vector<Vertex> fix = fixed_vertices(F, m, base_vertex(), 3);
  CHECK(fix.size() == 5);
  // stabilization: radius 4 finds nothing new
  CHECK(fixed_vertices(F, m, base_vertex(), 4).size() == 5);
  // depth-0 sample fixes only the base
  NormOneSample s0 = norm_one_sample(F, Eu, 0);
  REQUIRE(s0.gap_valuation == 0);
  CHECK(fixed_vertices(F, embed_norm_one(F, Eu, s0.t), base_vertex(), 3).size() == 1);
}

TEST_CASE("split unit with distinct residues fixes exactly the apartment") {
  Field F = f4t();
  // a = omega in F_4: a != a^{-1} mod t
  FieldElem a = fe_digit(F, 2);
  FieldElem ainv = fe_inv(F, a);
  REQUIRE(fe_eq(F, fe_mul(F, a, ainv), fe_one(F)));
  Mat2 d{a, fe_zero(), fe_zero(), ainv};
  for (int R = 1; R <= 3; ++R) {
    std::vector<Vertex> fix = fixed_vertices(F, d, base_vertex(), R);
    CHECK(static_cast<int>(fix.size()) == 2 * R + 1);
    for (const Vertex& v : fix) CHECK(v.offset.is_zero());  // on the standard apartment
  }
}

TEST_CASE("fixed sets are convex") {
  Field F = f2t();
  QuadAlgebra E(F, AlgebraDesc::artin_schreier(fe_one(F)));
  Mat2 m = embed_norm_one(F, E, norm_one_sample(F, E, 1).t);
  std::vector<Vertex> fix = fixed_vertices(F, m, base_vertex(), 4);
  // every midpoint-ish test: for u, v fixed at distance 2, the middle vertex
  // (the unique common neighbor) is fixed
  for (const Vertex& u : fix)
    for (const Vertex& v : fix) {
      if (tree_distance(F, u, v) != 2) continue;
      for (const Vertex& w : neighbors(F, u))
        if (tree_distance(F, w, v) == 1) CHECK(tree_act(F, m, w) == w);
    }
}

TEST_CASE("displacement and minimal displacement walk") {
  Field F = q3();
  Mat2 z = mat_scale(F, fe_int(F, 5), mat_identity(F));
  for (const Vertex& v : tree_ball(F, base_vertex(), 2)) CHECK(displacement(F, z, v) == 0);

  // translated elliptic element: the walk finds a fixed vertex again
  QuadAlgebra Eu(F, AlgebraDesc::kummer(fe_int(F, 2)));
  Mat2 m = embed_norm_one(F, Eu, norm_one_sample(F, Eu, 0).t);
  Mat2 h{fe_uniformizer(F, 2), fe_int(F, 5), fe_zero(), fe_one(F)};
  Mat2 mm = mat_mul(F, mat_mul(F, h, m), mat_inv(F, h));
  Vertex c = min_displacement_vertex(F, mm);
  CHECK(displacement(F, mm, c) == 0);

  // hyperbolic element: minimal displacement equals the translation length
  Mat2 dpi{fe_uniformizer(F, 1), fe_zero(), fe_zero(), fe_uniformizer(F, -1)};
  Vertex ax = min_displacement_vertex(F, dpi);
  CHECK(displacement(F, dpi, ax) == 2);
}

TEST_CASE("transversals") {
  Field F = q3();
  for (const Vertex& v : tree_ball(F, base_vertex(), 4)) {
    Mat2 A = gl2_transversal(F, v);
    CHECK(tree_act(F, A, base_vertex()) == v);
    if (v.level % 2 == 0) {
      Mat2 S = sl2_transversal(F, v);
      CHECK(fe_eq(F, mat_det(F, S), fe_one(F)));
      CHECK(tree_act(F, S, base_vertex()) == v);
    }
  }
}
