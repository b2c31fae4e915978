#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "andreev/andreev_conditions.hpp"
#include "andreev/combinatorics.hpp"
#include "andreev/lorentz.hpp"

namespace andreev {

struct Realization {
  AbstractPolyhedron complex;
  std::vector<LorentzVector> normals;
  std::vector<VertexClass> vertices;  // one per dual triangle, same order

  Realization() = default;
  Realization(AbstractPolyhedron c, std::vector<LorentzVector> n);
  void rebuild_vertices();
  bool compact() const;
  int face_count() const { return complex.face_count(); }
};

struct GaugeSpec {
  int f1 = -1, f2 = -1, f3 = -1;  // -1: face 0, its lowest neighbour, lowest common neighbour
};

struct GaugeFaces {
  int f1 = 0, f2 = 0, f3 = 0;
};

GaugeFaces resolve_gauge(const AbstractPolyhedron& c, const GaugeSpec& spec);

enum class EquationKind { Unit, EdgeAngle, Gauge };

// F_i(x) = sum coeff <v_a, v_b> + sum coeff x_var + constant (+ cos of the
// target angle on edge rows)
struct QuadraticTerm {
  int a = 0, b = 0;
  double coeff = 1;
};
struct LinearTerm {
  int var = 0;
  double coeff = 1;
};
struct Equation {
  EquationKind kind = EquationKind::Unit;
  std::vector<QuadraticTerm> quad;
  std::vector<LinearTerm> lin;
  double constant = 0;
  int edge = -1;  // complex edge index for EdgeAngle rows
};

struct QuadraticSystem {
  AbstractPolyhedron complex;
  GaugeFaces gauge;
  std::vector<Equation> equations;
  int unknowns() const { return 4 * complex.face_count(); }
  // Set the third gauge row to the value of v_f3.x0 in x.
  void capture_gauge(const Eigen::VectorXd& x);
};

QuadraticSystem build_system(const AbstractPolyhedron& c, const GaugeSpec& spec = {}, bool gauged = true);

Eigen::VectorXd pack(const std::vector<LorentzVector>& normals);
std::vector<LorentzVector> unpack(const Eigen::VectorXd& x);

Eigen::VectorXd evaluate(const QuadraticSystem& sys, const Eigen::VectorXd& x, const AngleAssignment& target);
Eigen::MatrixXd jacobian(const QuadraticSystem& sys, const Eigen::VectorXd& x);

struct SolverOptions {
  double residual_tol = 1e-10;
  double containment_tol = 1e-8;
  double angle_tol = 1e-9;
  // homotopy start angles this close to the target or to pi/2 are snapped to it
  double start_snap_tol = 1e-9;
  int max_iter = 50;
  double condition_cap = 1e12;
  int k = 150;
  int max_bisection_depth = 8;
  bool ungauged = false;  // least-squares Newton on the 4N-6 system
  bool require_compact = true;  // reject homotopy steps that lose compactness
  bool auto_gauge = true;  // homotopies gauge on the most central vertex instead of `gauge`
  GaugeSpec gauge;
};

struct NewtonReport {
  Eigen::VectorXd x;
  std::vector<double> residuals;  // infinity norms, one per evaluated iterate
  int iterations = 0;
};

// Throws SingularJacobian, MaxIterExceeded or DivergedResidual.
NewtonReport newton_iterate(const QuadraticSystem& sys, const AngleAssignment& target, const Eigen::VectorXd& x0,
                            const SolverOptions& opts = {});
Realization newton_solve(const QuadraticSystem& sys, const AngleAssignment& target, const Eigen::VectorXd& x0,
                         const SolverOptions& opts = {});

struct KantorovichReport {
  bool certified = false;
  double residual_norm = 0;  // |F(x0)|
  double inverse_norm = 0;   // |DF(x0)^-1|
  double lipschitz = 0;      // M
  double product = 0;
};

KantorovichReport kantorovich_certificate(const QuadraticSystem& sys, const AngleAssignment& target,
                                          const Eigen::VectorXd& x0);
double lipschitz_constant(const QuadraticSystem& sys);

AngleAssignment extract_angles(const Realization& p);

// Isometry bringing normals into the gauge of sys (v_f1 = e3, v_f2 in the
// x1-x3 plane with x1 > 0).
LorentzMatrix gauge_isometry(const std::vector<LorentzVector>& normals, const GaugeFaces& g);
// The finite vertex p minimizing max_i |<p, v_i>| among triangles accepted
// by `allowed`; gauging there keeps normal coordinates small.
GaugeSpec centered_gauge(const Realization& p, const std::function<bool(const Triangle&)>& allowed = {});

std::vector<LorentzVector> apply_isometry(const LorentzMatrix& m, const std::vector<LorentzVector>& v);

// Statistics of the last homotopy, for reports.
struct HomotopyStats {
  int steps = 0;
  int bisections = 0;
  int newton_iterations = 0;
  double final_residual = 0;
  Eigen::VectorXd last_start;  // initial guess of the final step
  GaugeSpec gauge;             // gauge of the system that was solved
};

Realization homotopy_deform(const Realization& p, const AngleAssignment& target, const SolverOptions& opts = {},
                            HomotopyStats* stats = nullptr, bool check_endpoints = true);

struct VerificationReport {
  bool ok = true;
  std::vector<std::string> issues;
  std::vector<int> non_finite_vertices;  // dual triangle indices
  double max_angle_error = 0;
  double max_norm_error = 0;
  double max_containment = 0;
};

VerificationReport verify_realization(const Realization& p, const AngleAssignment& a, const SolverOptions& opts = {});

}  // namespace andreev
