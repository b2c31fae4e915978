#include "andreev/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "andreev/error.hpp"
#include "log.hpp"

namespace andreev {

// ---- Realization ----

Realization::Realization(AbstractPolyhedron c, std::vector<LorentzVector> n)
    : complex(std::move(c)), normals(std::move(n)) {
  rebuild_vertices();
}

void Realization::rebuild_vertices() {
  const auto& tris = complex.triangles();
  vertices.assign(tris.size(), {});
  LorentzVector sum;
  int finite = 0;
  for (size_t t = 0; t < tris.size(); ++t) {
    const auto& f = tris[t].f;
    vertices[t] = triple_intersection(normals[f[0]], normals[f[1]], normals[f[2]]);
    if (vertices[t].kind == VertexKind::Finite) {
      sum = sum + vertices[t].vec;
      ++finite;
    }
  }
  if (finite == 0 || finite == static_cast<int>(tris.size())) return;
  LorentzVector ref = normalize_timelike(sum);
  for (size_t t = 0; t < tris.size(); ++t)
    if (vertices[t].kind == VertexKind::Hyperideal && minkowski_inner(ref, vertices[t].vec) > 0)
      vertices[t].vec = -vertices[t].vec;
}

bool Realization::compact() const {
  return std::all_of(vertices.begin(), vertices.end(), [](const VertexClass& v) { return v.kind == VertexKind::Finite; });
}

// ---- system ----

GaugeFaces resolve_gauge(const AbstractPolyhedron& c, const GaugeSpec& spec) {
  GaugeFaces g;
  g.f1 = spec.f1 >= 0 ? spec.f1 : 0;
  if (spec.f2 >= 0) {
    g.f2 = spec.f2;
  } else {
    const auto& nb = c.neighbors(g.f1);
    g.f2 = *std::min_element(nb.begin(), nb.end());
  }
  if (!c.adjacent(g.f1, g.f2)) throw Error(ErrorCode::SemanticError, "gauge faces f1 and f2 must be adjacent");
  if (spec.f3 >= 0) {
    g.f3 = spec.f3;
  } else {
    auto opp = c.opposite(g.f1, g.f2);
    g.f3 = *std::min_element(opp.begin(), opp.end());
  }
  if (!c.has_triangle(g.f1, g.f2, g.f3))
    throw Error(ErrorCode::SemanticError, "gauge faces must meet at a vertex");
  return g;
}

void QuadraticSystem::capture_gauge(const Eigen::VectorXd& x) {
  for (auto& eq : equations)
    if (eq.kind == EquationKind::Gauge && eq.lin.size() == 1 && eq.lin[0].var == 4 * gauge.f3)
      eq.constant = -x[4 * gauge.f3];
}

QuadraticSystem build_system(const AbstractPolyhedron& c, const GaugeSpec& spec, bool gauged) {
  require_valid(c);
  QuadraticSystem sys;
  sys.complex = c;
  sys.gauge = resolve_gauge(c, spec);
  const int n = c.face_count();
  for (int i = 0; i < n; ++i) {
    Equation eq;
    eq.kind = EquationKind::Unit;
    eq.quad.push_back({i, i, 1.0});
    eq.constant = -1.0;
    sys.equations.push_back(eq);
  }
  for (int e = 0; e < c.edge_count(); ++e) {
    Equation eq;
    eq.kind = EquationKind::EdgeAngle;
    eq.quad.push_back({c.edges()[e].a, c.edges()[e].b, 1.0});
    eq.edge = e;
    sys.equations.push_back(eq);
  }
  if (gauged) {
    auto fix = [&](int face, int comp) {
      Equation eq;
      eq.kind = EquationKind::Gauge;
      eq.lin.push_back({4 * face + comp, 1.0});
      sys.equations.push_back(eq);
    };
    fix(sys.gauge.f1, 0);
    fix(sys.gauge.f1, 1);
    fix(sys.gauge.f1, 2);
    fix(sys.gauge.f2, 0);
    fix(sys.gauge.f2, 2);
    fix(sys.gauge.f3, 0);
  }
  return sys;
}

Eigen::VectorXd pack(const std::vector<LorentzVector>& normals) {
  Eigen::VectorXd x(4 * normals.size());
  for (size_t i = 0; i < normals.size(); ++i)
    for (int k = 0; k < 4; ++k) x[4 * i + k] = normals[i][k];
  return x;
}

std::vector<LorentzVector> unpack(const Eigen::VectorXd& x) {
  std::vector<LorentzVector> v(x.size() / 4);
  for (size_t i = 0; i < v.size(); ++i)
    for (int k = 0; k < 4; ++k) v[i][k] = x[4 * i + k];
  return v;
}

namespace {

double inner_at(const Eigen::VectorXd& x, int a, int b) {
  return -x[4 * a] * x[4 * b] + x[4 * a + 1] * x[4 * b + 1] + x[4 * a + 2] * x[4 * b + 2] +
         x[4 * a + 3] * x[4 * b + 3];
}

std::vector<double> target_cosines(const QuadraticSystem& sys, const AngleAssignment& target) {
  std::vector<double> cs(sys.complex.edge_count());
  for (int e = 0; e < sys.complex.edge_count(); ++e) cs[e] = std::cos(target.at(sys.complex.edges()[e]));
  return cs;
}

Eigen::VectorXd eval_cos(const QuadraticSystem& sys, const Eigen::VectorXd& x, const std::vector<double>& cs) {
  Eigen::VectorXd r(sys.equations.size());
  for (size_t i = 0; i < sys.equations.size(); ++i) {
    const auto& eq = sys.equations[i];
    double v = eq.constant;
    for (const auto& q : eq.quad) v += q.coeff * inner_at(x, q.a, q.b);
    for (const auto& l : eq.lin) v += l.coeff * x[l.var];
    if (eq.kind == EquationKind::EdgeAngle) v += cs[eq.edge];
    r[i] = v;
  }
  return r;
}

void renormalize(Eigen::VectorXd& x) {
  for (int i = 0; i < x.size() / 4; ++i) {
    double s = inner_at(x, i, i);
    if (s > 0) x.segment<4>(4 * i) /= std::sqrt(s);
  }
}

}  // namespace

Eigen::VectorXd evaluate(const QuadraticSystem& sys, const Eigen::VectorXd& x, const AngleAssignment& target) {
  return eval_cos(sys, x, target_cosines(sys, target));
}

Eigen::MatrixXd jacobian(const QuadraticSystem& sys, const Eigen::VectorXd& x) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(sys.equations.size(), sys.unknowns());
  static const double sign[4] = {-1, 1, 1, 1};
  for (size_t i = 0; i < sys.equations.size(); ++i) {
    const auto& eq = sys.equations[i];
    for (const auto& q : eq.quad)
      for (int k = 0; k < 4; ++k) {
        d(i, 4 * q.a + k) += q.coeff * sign[k] * x[4 * q.b + k];
        d(i, 4 * q.b + k) += q.coeff * sign[k] * x[4 * q.a + k];
      }
    for (const auto& l : eq.lin) d(i, l.var) += l.coeff;
  }
  return d;
}

// ---- Newton ----

NewtonReport newton_iterate(const QuadraticSystem& system, const AngleAssignment& target, const Eigen::VectorXd& x0,
                            const SolverOptions& opts) {
  if (!x0.allFinite()) throw Error(ErrorCode::DivergedResidual, "initial guess is not finite");
  QuadraticSystem sys = system;
  sys.capture_gauge(x0);
  const auto cs = target_cosines(sys, target);
  NewtonReport rep;
  rep.x = x0;
  double prev = std::numeric_limits<double>::infinity();
  int growth = 0;
  bool polishing = false;
  for (int it = 0;; ++it) {
    Eigen::VectorXd r = eval_cos(sys, rep.x, cs);
    double rn = r.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(rn)) throw Error(ErrorCode::DivergedResidual, "residual became non-finite");
    rep.residuals.push_back(rn);
    if (polishing) return rep;
    if (rn <= opts.residual_tol) {
      // one more step buys roughly squared accuracy
      if (rn < 1e-14 || it >= opts.max_iter) return rep;
      polishing = true;
    } else {
      if (it >= opts.max_iter)
        throw Error(ErrorCode::MaxIterExceeded, "no convergence in " + std::to_string(opts.max_iter) +
                                                    " iterations (residual " + std::to_string(rn) + ")");
      growth = rn > prev ? growth + 1 : 0;
      if (growth >= 3) throw Error(ErrorCode::DivergedResidual, "residual grew for 3 consecutive steps");
    }
    prev = rn;
    Eigen::MatrixXd d = jacobian(sys, rep.x);
    Eigen::VectorXd step;
    if (static_cast<int>(d.rows()) == d.cols()) {
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d);
      const auto& rm = qr.matrixR();
      double big = std::abs(rm(0, 0)), small = std::abs(rm(d.cols() - 1, d.cols() - 1));
      if (!(small > 0) || big / small > opts.condition_cap)
        throw Error(ErrorCode::SingularJacobian, "Jacobian condition estimate above cap");
      step = qr.solve(-r);
    } else {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(d);
      if (cod.rank() < d.rows()) throw Error(ErrorCode::SingularJacobian, "Jacobian lost rank");
      step = cod.solve(-r);
    }
    if (polishing) {
      Eigen::VectorXd trial = rep.x + step;
      renormalize(trial);
      Eigen::VectorXd rt = eval_cos(sys, trial, cs);
      if (rt.lpNorm<Eigen::Infinity>() < rn) rep.x = trial;
      ++rep.iterations;
      continue;
    }
    rep.x += step;
    renormalize(rep.x);
    ++rep.iterations;
  }
}

Realization newton_solve(const QuadraticSystem& sys, const AngleAssignment& target, const Eigen::VectorXd& x0,
                         const SolverOptions& opts) {
  auto rep = newton_iterate(sys, target, x0, opts);
  return Realization(sys.complex, unpack(rep.x));
}

double lipschitz_constant(const QuadraticSystem& sys) {
  // |DF(u1) - DF(u2)| w has components sum_t c_t (d_a^T J w_b + d_b^T J w_a);
  // Cauchy-Schwarz over terms and blocks gives |.|^2 <= max_ab W_ab |d|^2 |w|^2.
  const int n = sys.complex.face_count();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& eq : sys.equations) {
    const double terms = static_cast<double>(eq.quad.size());
    for (const auto& q : eq.quad) {
      if (q.a == q.b) {
        w(q.a, q.a) += terms * 4 * q.coeff * q.coeff;
      } else {
        w(q.a, q.b) += terms * 2 * q.coeff * q.coeff;
        w(q.b, q.a) += terms * 2 * q.coeff * q.coeff;
      }
    }
  }
  return std::sqrt(w.maxCoeff());
}

KantorovichReport kantorovich_certificate(const QuadraticSystem& system, const AngleAssignment& target,
                                          const Eigen::VectorXd& x0) {
  QuadraticSystem sys = system;
  sys.capture_gauge(x0);
  KantorovichReport k;
  Eigen::VectorXd r = evaluate(sys, x0, target);
  Eigen::MatrixXd d = jacobian(sys, x0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  const auto& s = svd.singularValues();
  double smin = s[s.size() - 1];
  if (!(smin > 0) || s[0] / smin > 1e12) throw Error(ErrorCode::SingularJacobian, "DF(x0) is not invertible");
  k.residual_norm = r.norm();
  k.inverse_norm = 1.0 / smin;
  k.lipschitz = lipschitz_constant(sys);
  k.product = k.residual_norm * k.inverse_norm * k.inverse_norm * k.lipschitz;
  k.certified = k.product <= 0.5;
  return k;
}

AngleAssignment extract_angles(const Realization& p) {
  AngleAssignment a;
  for (const auto& e : p.complex.edges()) a.set(e, dihedral_angle(p.normals[e.a], p.normals[e.b]));
  return a;
}

namespace {

// Minkowski Gram-Schmidt against an orthonormal set, done twice: one pass
// leaves errors that grow with the size of the coordinates
LorentzVector orthonormalize(LorentzVector v, std::initializer_list<const LorentzVector*> basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const LorentzVector* b : basis) {
      double self = minkowski_inner(*b, *b) < 0 ? -1.0 : 1.0;
      v = v - (self * minkowski_inner(v, *b)) * *b;
    }
  return minkowski_inner(v, v) < 0 ? normalize_timelike(v) : normalize_spacelike(v);
}

}  // namespace

LorentzMatrix gauge_isometry(const std::vector<LorentzVector>& normals, const GaugeFaces& g) {
  const LorentzVector& v1 = normals[g.f1];
  const LorentzVector& v2 = normals[g.f2];
  LorentzVector s3 = normalize_spacelike(v1);
  LorentzVector s1 = orthonormalize(v2, {&s3});
  // the gauge vertex goes to the basepoint, so the third gauge row reads
  // v_f3.x0 = 0, which stays attainable while that vertex is finite
  auto corner = triple_intersection(v1, v2, normals[g.f3]);
  LorentzVector t = orthonormalize(corner.kind == VertexKind::Finite ? corner.vec : LorentzVector{1, 0, 0, 0}, {&s3, &s1});
  LorentzVector s2 = orthonormalize(minkowski_cross(t, s1, s3), {&s3, &s1, &t});
  LorentzMatrix f = frame_matrix(t, s1, s2, s3);
  Eigen::Matrix4d fm;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) fm(i, j) = f(i, j);
  if (fm.determinant() < 0) f = frame_matrix(t, s1, -s2, s3);
  return lorentz_inverse(f);
}

GaugeSpec centered_gauge(const Realization& p, const std::function<bool(const Triangle&)>& allowed) {
  GaugeSpec best;
  double best_reach = std::numeric_limits<double>::infinity();
  const auto& tris = p.complex.triangles();
  for (size_t t = 0; t < tris.size(); ++t) {
    if (p.vertices[t].kind != VertexKind::Finite || (allowed && !allowed(tris[t]))) continue;
    double reach = 0;
    for (const auto& v : p.normals) reach = std::max(reach, std::abs(minkowski_inner(p.vertices[t].vec, v)));
    if (reach < best_reach) {
      best_reach = reach;
      best = {tris[t].f[0], tris[t].f[1], tris[t].f[2]};
    }
  }
  return best;
}

std::vector<LorentzVector> apply_isometry(const LorentzMatrix& m, const std::vector<LorentzVector>& v) {
  std::vector<LorentzVector> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(m * x);
  return out;
}

// ---- verification ----

VerificationReport verify_realization(const Realization& p, const AngleAssignment& a, const SolverOptions& opts) {
  VerificationReport rep;
  auto issue = [&](std::string s) {
    rep.ok = false;
    if (rep.issues.size() < 20) rep.issues.push_back(std::move(s));
  };
  const int n = p.face_count();
  if (static_cast<int>(p.normals.size()) != n) {
    issue("normal count does not match the complex");
    return rep;
  }
  for (int i = 0; i < n; ++i) {
    if (!p.normals[i].finite()) issue("normal " + std::to_string(i) + " is not finite");
    double err = std::abs(minkowski_inner(p.normals[i], p.normals[i]) - 1.0);
    rep.max_norm_error = std::max(rep.max_norm_error, err);
    if (err > std::max(opts.residual_tol, 1e-9)) issue("normal " + std::to_string(i) + " is not unit");
  }
  for (const auto& e : p.complex.edges()) {
    double c = minkowski_inner(p.normals[e.a], p.normals[e.b]);
    if (!(c * c < 1)) {
      issue("faces " + std::to_string(e.a) + "," + std::to_string(e.b) + " do not intersect");
      continue;
    }
    double err = std::abs(std::acos(-c) - a.at(e));
    rep.max_angle_error = std::max(rep.max_angle_error, err);
    if (err > opts.angle_tol)
      issue("edge {" + std::to_string(e.a) + "," + std::to_string(e.b) + "} angle off by " + std::to_string(err));
  }
  for (size_t t = 0; t < p.vertices.size(); ++t) {
    const auto& v = p.vertices[t];
    const auto& f = p.complex.triangles()[t].f;
    if (v.kind != VertexKind::Finite) {
      rep.non_finite_vertices.push_back(static_cast<int>(t));
      issue(std::string("vertex not Finite: {") + std::to_string(f[0]) + "," + std::to_string(f[1]) + "," +
            std::to_string(f[2]) + "} is " + (v.kind == VertexKind::Ideal ? "ideal" : "hyperideal"));
      continue;
    }
    for (int m = 0; m < n; ++m) {
      double s = minkowski_inner(v.vec, p.normals[m]);
      if (m == f[0] || m == f[1] || m == f[2]) continue;
      rep.max_containment = std::max(rep.max_containment, s);
      if (s > opts.containment_tol)
        issue("vertex " + std::to_string(t) + " lies outside the half-space of face " + std::to_string(m));
    }
  }
  return rep;
}

// ---- homotopy ----

namespace {

bool compact_and_contained(const QuadraticSystem& sys, const Eigen::VectorXd& x, double tol) {
  Realization r(sys.complex, unpack(x));
  if (!r.compact()) return false;
  const int n = r.face_count();
  for (size_t t = 0; t < r.vertices.size(); ++t)
    for (int m = 0; m < n; ++m)
      if (minkowski_inner(r.vertices[t].vec, r.normals[m]) > tol && !sys.complex.triangles()[t].contains(m))
        return false;
  return true;
}

}  // namespace

Realization homotopy_deform(const Realization& p, const AngleAssignment& target, const SolverOptions& opts,
                            HomotopyStats* stats, bool check_endpoints) {
  QuadraticSystem sys = build_system(p.complex, opts.auto_gauge ? centered_gauge(p) : opts.gauge, !opts.ungauged);
  Eigen::VectorXd x = pack(apply_isometry(gauge_isometry(p.normals, sys.gauge), p.normals));
  require_complete(p.complex, target);
  // measured angles carry solver noise; snap it away so a right angle does
  // not read as obtuse
  AngleAssignment measured = extract_angles(p), start;
  for (const auto& [e, v] : measured.values()) {
    double s = v;
    if (std::abs(s - target.at(e)) <= opts.start_snap_tol) s = target.at(e);
    else if (std::abs(s - std::numbers::pi / 2) <= opts.start_snap_tol) s = std::numbers::pi / 2;
    start.set(e, s);
  }
  if (check_endpoints) {
    auto from = check_conditions(p.complex, start);
    if (!from.passes)
      throw Error(ErrorCode::EndpointOutsidePolytope, "current angles are outside A_C: " + from.summary());
    auto to = check_conditions(p.complex, target);
    if (!to.passes) throw Error(ErrorCode::EndpointOutsidePolytope, "target angles are outside A_C: " + to.summary());
  }
  HomotopyStats local;
  HomotopyStats& st = stats ? *stats : local;
  st = HomotopyStats{};
  st.gauge = {sys.gauge.f1, sys.gauge.f2, sys.gauge.f3};
  const int k = std::max(opts.k, 2);
  double last_residual = 0;
  int step_index = 0;

  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&, double, int)> advance =
      [&](double t0, const Eigen::VectorXd& x0, double t1, int depth) -> Eigen::VectorXd {
    AngleAssignment a1 = t1 >= 1.0 ? target : start.lerp(target, t1);
    try {
      auto rep = newton_iterate(sys, a1, x0, opts);
      st.newton_iterations += rep.iterations;
      last_residual = rep.residuals.back();
      if (opts.require_compact && !compact_and_contained(sys, rep.x, opts.containment_tol))
        throw Error(ErrorCode::HomotopyStuck, "step left the compact chamber");
      if (t1 >= 1.0) st.last_start = x0;
      return rep.x;
    } catch (const Error& e) {
      if (depth >= opts.max_bisection_depth)
        throw Error(ErrorCode::HomotopyStuck, "step " + std::to_string(step_index) + " of " + std::to_string(k - 1) +
                                                  " failed after bisection (" + e.what() + "), last residual " +
                                                  std::to_string(last_residual));
      ++st.bisections;
      double tm = 0.5 * (t0 + t1);
      Eigen::VectorXd xm = advance(t0, x0, tm, depth + 1);
      return advance(tm, xm, t1, depth + 1);
    }
  };

  for (int i = 1; i < k; ++i) {
    step_index = i;
    double t0 = double(i - 1) / (k - 1), t1 = double(i) / (k - 1);
    x = advance(t0, x, t1, 0);
    ++st.steps;
  }
  st.final_residual = last_residual;
  log_debug("homotopy: " + std::to_string(st.steps) + " steps, " + std::to_string(st.bisections) + " bisections");
  return Realization(p.complex, unpack(x));
}

}  // namespace andreev
