#pragma once

#include <string>
#include <vector>

#include "slorb/sl2.hpp"

namespace slorb {

// Vertex of the Bruhat-Tits tree: the lattice class of [[pi^n, b],[0,1]] O^2
// with b reduced modulo pi^n (exact digits below position n; possibly a
// negative-valuation head).  Base vertex: (0, 0).
struct Vertex {
  int level = 0;
  FieldElem offset;  // exact, canonical mod pi^level

  bool operator==(const Vertex&) const = default;
};

Vertex base_vertex();
// "(n; digits)" debug/trace format
std::string vertex_str(const Vertex& v);
// strict ordering for deterministic enumeration
bool vertex_less(const Vertex& a, const Vertex& b);

// the q+1 neighbors, in deterministic order (down-digits ascending, then up)
std::vector<Vertex> neighbors(const Field& F, const Vertex& v);

// left action of g (det != 0) by lattice multiplication
Vertex tree_act(const Field& F, const Mat2& g, const Vertex& v);

int tree_distance(const Field& F, const Vertex& u, const Vertex& v);
int displacement(const Field& F, const Mat2& g, const Vertex& v);

// vertices within distance R of the center, BFS order
std::vector<Vertex> tree_ball(const Field& F, const Vertex& center, int R);
long ball_size(long q, int R);  // 1 + (q+1)(q^R - 1)/(q - 1)

// fixed vertices of g within the R-ball around the center, deterministic order
std::vector<Vertex> fixed_vertices(const Field& F, const Mat2& g, const Vertex& center, int R);

// greedy walk from the base towards the minimal-displacement set of g
Vertex min_displacement_vertex(const Field& F, const Mat2& g);

// lattice transversals: gl2 form [[pi^n, b],[0,1]]; sl2 form has det 1 and
// requires an even level
Mat2 gl2_transversal(const Field& F, const Vertex& v);
Mat2 sl2_transversal(const Field& F, const Vertex& v);

}  // namespace slorb
