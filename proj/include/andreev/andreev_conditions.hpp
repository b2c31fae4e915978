#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "andreev/combinatorics.hpp"

namespace andreev {

inline constexpr double kStrictSlack = 1e-12;

class AngleAssignment {
 public:
  AngleAssignment() = default;
  static AngleAssignment uniform(const AbstractPolyhedron& c, double angle);

  void set(const Edge& e, double angle) { angles_[e] = angle; }
  std::optional<double> get(const Edge& e) const;
  double at(const Edge& e) const;  // MissingEdgeAngle
  bool contains(const Edge& e) const { return angles_.count(e) != 0; }
  size_t size() const { return angles_.size(); }
  const std::map<Edge, double>& values() const { return angles_; }
  // max |a_e - b_e| over the edges of a; MissingEdgeAngle if b lacks one
  double distance(const AngleAssignment& other) const;
  // (1-t) this + t other, over this assignment's edges
  AngleAssignment lerp(const AngleAssignment& other, double t) const;

 private:
  std::map<Edge, double> angles_;
};

// Throws MissingEdgeAngle unless every edge of c has an angle.
void require_complete(const AbstractPolyhedron& c, const AngleAssignment& a);

struct ConditionFailure {
  int condition = 0;  // 0 = non-obtuse, 1..5 = Andreev's conditions
  std::string detail;
  std::vector<int> witness;  // faces of the offending vertex / circuit / quadrilateral
};

struct ConditionReport {
  bool passes = true;
  std::vector<ConditionFailure> failures;
  bool failed(int condition) const;
  std::string summary() const;
};

ConditionReport check_conditions(const AbstractPolyhedron& c, const AngleAssignment& a);

// K equally spaced samples from a_from to a_to inclusive.
std::vector<AngleAssignment> linear_path(const AbstractPolyhedron& c, const AngleAssignment& from,
                                         const AngleAssignment& to, int k);

// Index of the first sample of a piecewise-linear path (k samples per leg)
// that leaves A_C, or -1.
int validate_path(const AbstractPolyhedron& c, const std::vector<AngleAssignment>& corners, int k);

struct CollapsedVertex {
  int triangle_face = -1;  // face of C that was collapsed
  Triangle vertex;         // the new vertex of C~, in C~ labels
  double crossing = 0;     // t at which the angle sum equals pi
};

struct TruncationPath {
  AbstractPolyhedron collapsed;            // C~
  std::vector<int> face_map;               // face of C~ -> face of C
  std::vector<CollapsedVertex> vertices;   // one per collapsed triangle
  std::vector<int> kept_triangles;         // triangle faces of C left uncollapsed
  AngleAssignment beta, a_hat;             // on the edges of C~
  AngleAssignment sample(double t) const { return beta.lerp(a_hat, t); }
};

// Collapse the triangle faces of a truncated complex (skipping a collapse that
// would leave fewer than 5 faces) and build the straight path from beta to a_hat.
TruncationPath truncation_path(const AbstractPolyhedron& c, const AngleAssignment& a, double delta);

// Pre-deformation target: the point of the segment from a towards all-pi/3
// whose components all lie within `margin` of pi/3.
AngleAssignment pull_toward_pi_over_3(const AngleAssignment& a, double margin);

}  // namespace andreev
