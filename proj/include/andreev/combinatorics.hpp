#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace andreev {

// Unordered face pair, stored with a < b.
struct Edge {
  int a = 0, b = 0;
  Edge() = default;
  Edge(int x, int y) : a(x < y ? x : y), b(x < y ? y : x) {}
  auto operator<=>(const Edge&) const = default;
};

// One trivalent vertex of C, i.e. a triangle of the dual. Sorted.
struct Triangle {
  std::array<int, 3> f{};
  Triangle() = default;
  Triangle(int x, int y, int z);
  bool contains(int x) const { return f[0] == x || f[1] == x || f[2] == x; }
  int third(int x, int y) const;  // the vertex that is neither x nor y
  auto operator<=>(const Triangle&) const = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

class AbstractPolyhedron {
 public:
  AbstractPolyhedron() = default;
  // Never throws on malformed data; derived structure is computed best effort
  // and validate() reports what is wrong.
  AbstractPolyhedron(int face_count, std::vector<Triangle> triangles);

  int face_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int vertex_count() const { return static_cast<int>(tris_.size()); }
  const std::vector<Triangle>& triangles() const { return tris_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int edge_index(int a, int b) const;  // -1 when not adjacent
  bool adjacent(int a, int b) const { return edge_index(a, b) >= 0; }
  int triangle_index(int a, int b, int c) const;  // -1 when absent
  bool has_triangle(int a, int b, int c) const { return triangle_index(a, b, c) >= 0; }
  // Third vertices of the (normally two) triangles on edge ab.
  std::vector<int> opposite(int a, int b) const;
  int degree(int f) const { return static_cast<int>(nbrs_[f].size()); }
  // Cyclic order around f, consistent with a global orientation of the
  // sphere when the complex is valid; sorted otherwise.
  const std::vector<int>& neighbors(int f) const { return nbrs_[f]; }
  // Triangles oriented coherently (valid complexes only).
  const std::vector<std::array<int, 3>>& oriented_triangles() const { return oriented_; }
  bool well_formed() const { return well_formed_; }
  std::string to_string() const;

 private:
  friend ValidationReport validate(const AbstractPolyhedron&);
  void derive();

  int n_ = 0;
  std::vector<Triangle> tris_;
  std::vector<Edge> edges_;
  std::unordered_map<long long, int> edge_lookup_;
  std::unordered_map<long long, int> tri_lookup_;
  std::unordered_map<long long, std::vector<int>> edge_tris_;
  std::vector<std::vector<int>> nbrs_;
  std::vector<std::array<int, 3>> oriented_;
  std::vector<std::string> problems_;
  bool well_formed_ = false;
};

ValidationReport validate(const AbstractPolyhedron& c);
// Throws SemanticError carrying the first violation.
void require_valid(const AbstractPolyhedron& c);

struct Circuit {
  int k = 3;
  std::vector<int> faces;   // cyclic, minimal rotation of the smaller orientation
  std::vector<Edge> edges;  // edges of C crossed: (faces[i], faces[i+1])
  auto operator<=>(const Circuit&) const = default;
};

std::vector<Circuit> find_prismatic_circuits(const AbstractPolyhedron& c, int k);
bool is_simple(const AbstractPolyhedron& c);

struct CombinatorialClass {
  enum class Kind { Simple, Truncated, Compound } kind = Kind::Simple;
  std::vector<int> triangle_faces;         // Truncated: faces surrounded by circuits
  std::vector<Circuit> cutting_circuits;   // Compound: circuits not around a triangle
};

CombinatorialClass classify(const AbstractPolyhedron& c);
const char* kind_name(CombinatorialClass::Kind k);

struct WhiteheadMove {
  Edge edge;  // edge of C* flipped (two faces of C sharing the edge e)
};

// Flip edge (x,y) of the dual. Throws IllegalMove when the result would not be
// an abstract polyhedron.
AbstractPolyhedron whitehead_move(const AbstractPolyhedron& c, const WhiteheadMove& m);
// The edge created by the flip: the two opposite vertices.
Edge flipped_edge(const AbstractPolyhedron& c, const Edge& e);

enum class BaseKind { Prism, SplitPrism };
const char* base_name(BaseKind b);

struct ReductionTrace {
  std::vector<WhiteheadMove> moves;
  // intermediates[0] is the input, intermediates[i+1] follows moves[i].
  std::vector<AbstractPolyhedron> intermediates;
  BaseKind base = BaseKind::Prism;
  const AbstractPolyhedron& final_complex() const { return intermediates.back(); }
};

ReductionTrace reduce_to_base(const AbstractPolyhedron& c);

// Prism: caps 0 and 1, sides 2..N-1 in cyclic order.
// Split prism: caps 0 and 1 (degree N-3), the split pair 2 and 3, sides
// 4..N-1 along a path; 2 touches 0, 3 touches 1.
AbstractPolyhedron build_base_complex(BaseKind kind, int n);

// Canonical code of a valid complex; equal codes iff isomorphic (orientation
// reversing maps allowed).
std::vector<int> canonical_code(const AbstractPolyhedron& c);
// map[face of a] = face of b, if the complexes are isomorphic.
std::optional<std::vector<int>> isomorphism(const AbstractPolyhedron& a, const AbstractPolyhedron& b);

// Relabel faces: new index of old face f is perm[f].
AbstractPolyhedron relabel(const AbstractPolyhedron& c, const std::vector<int>& perm);

// Catalogue used by tests, fixtures and the CLI.
AbstractPolyhedron cube_complex();            // faces X+ X- Y+ Y- Z+ Z- = 0..5
AbstractPolyhedron lobell_complex(int n);     // n >= 5; R_5 is the dodecahedron
AbstractPolyhedron dodecahedron_complex();

}  // namespace andreev
