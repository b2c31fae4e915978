#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "andreev/andreev_conditions.hpp"
#include "andreev/combinatorics.hpp"
#include "andreev/solver.hpp"

namespace andreev {

struct ConstructOptions {
  SolverOptions solver;
  double epsilon = std::numbers::pi / 45;
  double delta = std::numbers::pi / 20;
  int truncation_k = 200;
  int epsilon_retries = 4;
};

struct SeedSpec {
  BaseKind kind = BaseKind::Prism;
  int n = 0;
  double polygon_angle = 0;  // theta_p
  double cap_angle = 0;      // theta_c
  static SeedSpec natal(BaseKind kind, int n);
};

struct PipelineReport {
  std::string classification;
  std::vector<std::string> stages;
  std::vector<double> residuals;  // one per stage
  std::vector<std::string> move_log;
  std::vector<int> truncated_faces;
  std::vector<std::string> pieces;  // glued-piece tree, indented
  void stage(const std::string& name, double residual);
};

// N-2 side planes through the sides of a regular polygon with interior angle
// 2 theta_p, and two caps at angle theta_c. Caps are faces 0 and 1.
Realization build_prism(int n, double polygon_angle, double cap_angle);

// D_N realization in the labelling of build_base_complex(SplitPrism, n).
Realization build_split_prism(int n, const ConstructOptions& opts = {});

// Whitehead move on the dual edge e, carried out geometrically; final angles
// on the new complex are `after` (all 2pi/5 when empty).
Realization whitehead_move_geometric(const Realization& p, const Edge& e, double epsilon,
                                     const ConstructOptions& opts = {}, const AngleAssignment& after = {});

Realization construct_simple(const AbstractPolyhedron& c, const AngleAssignment& a, const ConstructOptions& opts = {},
                             PipelineReport* report = nullptr);
Realization construct_truncated(const AbstractPolyhedron& c, const AngleAssignment& a,
                                const ConstructOptions& opts = {}, PipelineReport* report = nullptr);
Realization construct_compound(const AbstractPolyhedron& c, const AngleAssignment& a,
                               const ConstructOptions& opts = {}, PipelineReport* report = nullptr);

// Classify, delegate, verify. Output is gauge-normalized.
Realization construct(const AbstractPolyhedron& c, const AngleAssignment& a, const ConstructOptions& opts = {},
                      PipelineReport* report = nullptr);

// Unit normal w with prescribed angles to three planes, starting from a
// plane orthogonal to all three.
LorentzVector solve_truncation_plane(const LorentzVector& seed, const std::array<LorentzVector, 3>& faces,
                                     const std::array<double, 3>& angles);

// The two pieces obtained by cutting along a prismatic 3-circuit. Each
// piece's last face is the new triangle.
struct CutPiece {
  AbstractPolyhedron complex;
  std::vector<int> faces;  // local face -> face of the parent (new face: -1)
  AngleAssignment angles;
};
std::array<CutPiece, 2> cut_along(const AbstractPolyhedron& c, const AngleAssignment& a, const Circuit& gamma);

// Isometry carrying piece b's copy of the triangle onto piece a's, with the
// triangle normal reversed.
LorentzMatrix glue_isometry(const Realization& a, int fa, const std::array<int, 3>& xyz_a, const Realization& b,
                            int fb, const std::array<int, 3>& xyz_b);

}  // namespace andreev
