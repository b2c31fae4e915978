#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "andreev/andreev_conditions.hpp"
#include "andreev/combinatorics.hpp"
#include "andreev/construct.hpp"
#include "andreev/orbifolds.hpp"
#include "andreev/solver.hpp"

namespace andreev {

// An angle as written in an input document: "a/b pi" (rational multiple of
// pi) or decimal radians.
struct AngleSpec {
  enum class Kind { RationalOfPi, Decimal };
  Kind kind = Kind::Decimal;
  long long num = 0, den = 1;  // RationalOfPi, reduced
  double radians = 0;
  double value() const;
  bool operator==(const AngleSpec&) const = default;
};

AngleSpec parse_angle(const std::string& text);
std::string format_angle(const AngleSpec& a);

struct PipelineOverrides {
  std::optional<int> k;
  std::optional<AngleSpec> epsilon, delta;
  std::optional<double> residual_tol, angle_tol, containment_tol;
  std::optional<std::array<int, 3>> gauge;
  std::optional<std::uint64_t> seed;
  std::optional<long long> samples;
  bool operator==(const PipelineOverrides&) const = default;
};

struct InputDocument {
  std::string name;
  int face_count = 0;
  int index_base = 0;                              // as written; stored indices are 0-based
  std::vector<std::array<int, 3>> dual_triangles;  // 0-based
  std::optional<AngleSpec> default_angle;
  std::map<Edge, AngleSpec> edge_angles;  // 0-based
  PipelineOverrides options;
  bool operator==(const InputDocument&) const = default;
};

// ParseError (with line and column) on malformed text or schema, SemanticError
// on out-of-range indices, invalid complexes and conflicting angles.
InputDocument parse_input(const std::string& text);
std::string serialize_input(const InputDocument& doc);

struct Problem {
  AbstractPolyhedron complex;
  AngleAssignment angles;
  ConstructOptions options;
  MonteCarloOptions monte_carlo;
};

// MissingEdgeAngle when an edge has no angle and there is no default.
Problem to_problem(const InputDocument& doc);

// OFF: "V F E", one Klein-model vertex per line (6 decimals), then faces as
// "n i1 .. in colorspec" with outward cyclic order. NonCompact if a vertex
// is not finite.
std::string write_off(const Realization& p);

struct OffMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::vector<int>> faces;
  std::vector<int> colors;
  int edge_count = 0;
};
OffMesh read_off(const std::string& text);
// Prints a mesh in the layout of write_off(Realization).
std::string write_off(const OffMesh& mesh);

// Planes through the faces of an OFF polyhedron; the complex comes from the
// vertex-face incidences (each vertex on exactly three faces).
Realization realization_from_off(const OffMesh& mesh);

// NotSubmultiple if an angle is farther than 1e-9 from every pi/k.
std::string write_generators(const GeneratorSet& g);
std::vector<LorentzMatrix> read_generators(const std::string& text);

// Full-precision realization for later deformation.
std::string write_state(const Realization& p);
Realization read_state(const std::string& text);

std::string read_file(const std::string& path);
// Writes to a temporary in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace andreev
