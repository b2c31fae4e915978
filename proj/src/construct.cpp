#include "andreev/construct.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "andreev/error.hpp"
#include "log.hpp"

namespace andreev {

namespace {

constexpr double kPi = std::numbers::pi;

std::string edge_str(const Edge& e) { return "(" + std::to_string(e.a) + "," + std::to_string(e.b) + ")"; }

Realization relabeled(const Realization& r, const AbstractPolyhedron& target, const std::vector<int>& map) {
  std::vector<LorentzVector> normals(r.normals.size());
  for (size_t i = 0; i < map.size(); ++i) normals[map[i]] = r.normals[i];
  return Realization(target, std::move(normals));
}

double residual_of(const Realization& r, const AngleAssignment& a) {
  auto sys = build_system(r.complex, {}, false);
  return evaluate(sys, pack(r.normals), a).lpNorm<Eigen::Infinity>();
}

// Move into the output gauge and re-solve there; the isometry into a distant
// gauge amplifies rounding.
Realization polish(const Realization& r, const AngleAssignment& a, const SolverOptions& opts) {
  auto sys = build_system(r.complex, opts.gauge);
  Eigen::VectorXd x = pack(apply_isometry(gauge_isometry(r.normals, sys.gauge), r.normals));
  return newton_solve(sys, a, x, opts);
}

void require_verified(const Realization& r, const AngleAssignment& a, const SolverOptions& opts, const char* what) {
  auto v = verify_realization(r, a, opts);
  if (!v.ok) throw Error(ErrorCode::VerificationFailed, std::string(what) + ": " + v.issues.front());
}

}  // namespace

void PipelineReport::stage(const std::string& name, double residual) {
  stages.push_back(name);
  residuals.push_back(residual);
  log_info(name + " (residual " + std::to_string(residual) + ")");
}

SeedSpec SeedSpec::natal(BaseKind kind, int n) {
  SeedSpec s;
  s.kind = kind;
  s.n = n;
  const int sides = kind == BaseKind::Prism ? n - 2 : n - 3;
  s.polygon_angle = std::min(kPi / 8, (kPi / 2 - kPi / sides) / 2);
  s.cap_angle = 0.45 * kPi;
  return s;
}

Realization build_prism(int n, double polygon_angle, double cap_angle) {
  if (n < 5) throw Error(ErrorCode::BadN, "prism needs N >= 5");
  const int k = n - 2;
  if (!(polygon_angle > 0 && polygon_angle < kPi / 2 - kPi / k))
    throw Error(ErrorCode::BadAngles, "no regular polygon with that angle");
  if (!(cap_angle > 0 && cap_angle < kPi / 2)) throw Error(ErrorCode::BadAngles, "cap angle must lie in (0, pi/2)");
  // inradius r of the polygon with interior angle 2 theta_p
  const double cr = std::cos(polygon_angle) / std::sin(kPi / k);
  const double sr = std::sqrt(cr * cr - 1);
  const double sh = std::cos(cap_angle) / sr;
  const double ch = std::sqrt(1 + sh * sh);
  std::vector<LorentzVector> normals(n);
  normals[0] = {sh, 0, 0, ch};
  normals[1] = {sh, 0, 0, -ch};
  for (int i = 0; i < k; ++i) {
    double psi = 2 * kPi * i / k;
    normals[2 + i] = {sr, cr * std::cos(psi), cr * std::sin(psi), 0};
  }
  Realization r(build_base_complex(BaseKind::Prism, n), std::move(normals));
  if (!r.compact()) throw Error(ErrorCode::BadAngles, "prism vertices are not finite");
  return r;
}

Realization build_split_prism(int n, const ConstructOptions& opts) {
  if (n < 8) throw Error(ErrorCode::BadN, "split prism needs N >= 8");
  // prism with N-1 faces: glue cap G = 0, opposite cap H = 1, S = 2, T_j = 3..N-2
  const int m = n - 1;
  auto seed = SeedSpec::natal(BaseKind::SplitPrism, n);
  Realization prism = build_prism(m, seed.polygon_angle, seed.cap_angle);
  AngleAssignment half;
  for (const auto& e : prism.complex.edges()) {
    double v = kPi / 2;
    if (e.a == 0 && e.b == 2) v = kPi / 4;
    else if (e.a == 1) v = kPi / 3;
    half.set(e, v);
  }
  Realization shaped = homotopy_deform(prism, half, opts.solver);
  LorentzMatrix r = reflection_matrix(shaped.normals[0]);
  std::vector<LorentzVector> normals(n);
  normals[0] = shaped.normals[1];
  normals[1] = r * shaped.normals[1];
  normals[2] = shaped.normals[2];
  normals[3] = r * shaped.normals[2];
  for (int j = 3; j <= m - 1; ++j) normals[j + 1] = shaped.normals[j];
  Realization d(build_base_complex(BaseKind::SplitPrism, n), std::move(normals));
  if (!d.compact()) throw Error(ErrorCode::InternalInvariantViolation, "glued split prism is not compact");
  return d;
}

Realization whitehead_move_geometric(const Realization& p, const Edge& e, double epsilon,
                                     const ConstructOptions& opts, const AngleAssignment& after) {
  const auto& c = p.complex;
  auto opp = c.opposite(e.a, e.b);
  if (opp.size() != 2) throw Error(ErrorCode::IllegalMove, "not an edge: " + edge_str(e));
  // gauge away from the move: a frame built from two nearly parallel planes
  // (the edge squeezed to epsilon) is degenerate
  ConstructOptions local = opts;
  local.solver.auto_gauge = false;
  local.solver.gauge = centered_gauge(p, [&](const Triangle& t) { return !t.contains(e.a) && !t.contains(e.b); });
  const SolverOptions& so = local.solver;

  AngleAssignment squeeze = extract_angles(p);
  squeeze.set(e, epsilon);
  for (int end : opp) {
    squeeze.set(Edge(e.a, end), kPi / 2);
    squeeze.set(Edge(e.b, end), kPi / 2);
  }
  log_debug("Wh" + edge_str(e) + ": squeeze, gauge {" + std::to_string(so.gauge.f1) + "," + std::to_string(so.gauge.f2) +
            "," + std::to_string(so.gauge.f3) + "}");
  Realization stage1 = homotopy_deform(p, squeeze, so);

  AbstractPolyhedron c2 = whitehead_move(c, {e});
  Edge e2(opp[0], opp[1]);
  AngleAssignment swapped;
  for (const auto& f : c2.edges()) swapped.set(f, f == e2 ? epsilon : squeeze.at(f));
  auto sys = build_system(c2, so.gauge, !so.ungauged);
  Eigen::VectorXd x = pack(apply_isometry(gauge_isometry(stage1.normals, sys.gauge), stage1.normals));
  Realization stage3;
  try {
    stage3 = newton_solve(sys, swapped, x, so);
  } catch (const Error& err) {
    throw Error(ErrorCode::WhiteheadBasinMiss, "Wh" + edge_str(e) + " with epsilon " + std::to_string(epsilon) + ": " +
                                                   err.what());
  }
  auto check = verify_realization(stage3, swapped, so);
  if (!check.ok)
    throw Error(ErrorCode::WhiteheadBasinMiss, "Wh" + edge_str(e) + " landed off the compact chamber: " +
                                                   check.issues.front());
  log_debug("Wh" + edge_str(e) + ": swapped, relaxing");
  AngleAssignment final_angles = after.size() ? after : AngleAssignment::uniform(c2, 2 * kPi / 5);
  return homotopy_deform(stage3, final_angles, so);
}

Realization construct_simple(const AbstractPolyhedron& c, const AngleAssignment& a, const ConstructOptions& opts,
                             PipelineReport* report) {
  PipelineReport local;
  PipelineReport& rep = report ? *report : local;
  auto trace = reduce_to_base(c);
  const int n = c.face_count();
  const auto& base = trace.final_complex();
  rep.stage("reduced to " + std::string(base_name(trace.base)) + "_" + std::to_string(n) + " in " +
                std::to_string(trace.moves.size()) + " moves",
            0.0);

  Realization seed;
  if (trace.base == BaseKind::Prism) {
    auto spec = SeedSpec::natal(BaseKind::Prism, n);
    seed = build_prism(n, spec.polygon_angle, spec.cap_angle);
  } else {
    seed = build_split_prism(n, opts);
  }
  auto map = isomorphism(seed.complex, base);
  if (!map) throw Error(ErrorCode::InternalInvariantViolation, "seed does not match the base complex");
  Realization cur = relabeled(seed, base, *map);
  const AngleAssignment uniform = AngleAssignment::uniform(base, 2 * kPi / 5);
  if (!trace.moves.empty()) {
    cur = homotopy_deform(cur, uniform, opts.solver);
    rep.stage("seed deformed to all 2pi/5", residual_of(cur, uniform));
  }

  for (int i = static_cast<int>(trace.moves.size()) - 1; i >= 0; --i) {
    const auto& before = trace.intermediates[i];
    Edge flip = flipped_edge(before, trace.moves[i].edge);
    double eps = opts.epsilon;
    ConstructOptions o = opts;
    for (int attempt = 0;; ++attempt) {
      try {
        cur = whitehead_move_geometric(cur, flip, eps, o);
        break;
      } catch (const Error& err) {
        bool retry = err.code() == ErrorCode::WhiteheadBasinMiss || err.code() == ErrorCode::HomotopyStuck;
        if (!retry || attempt >= opts.epsilon_retries) throw;
        log_info(std::string("retrying with smaller epsilon: ") + err.what());
        eps /= 2;
        o.solver.k *= 2;
      }
    }
    cur = Realization(before, cur.normals);
    rep.move_log.push_back("Wh" + edge_str(flip) + " eps=" + std::to_string(eps));
  }
  if (!trace.moves.empty()) rep.stage("replayed " + std::to_string(trace.moves.size()) + " Whitehead moves", 0.0);

  cur = homotopy_deform(cur, a, opts.solver);
  rep.stage("deformed to target angles", residual_of(cur, a));
  return cur;
}

LorentzVector solve_truncation_plane(const LorentzVector& seed, const std::array<LorentzVector, 3>& faces,
                                     const std::array<double, 3>& angles) {
  LorentzVector w = seed;
  std::array<double, 3> start;
  for (int i = 0; i < 3; ++i) start[i] = dihedral_angle(w, faces[i]);
  const int steps = 20;
  for (int s = 1; s <= steps; ++s) {
    double t = double(s) / steps;
    std::array<double, 3> target;
    for (int i = 0; i < 3; ++i) target[i] = (1 - t) * start[i] + t * angles[i];
    bool done = false;
    for (int it = 0; it < 40 && !done; ++it) {
      Eigen::Vector4d r;
      Eigen::Matrix4d d;
      r[0] = minkowski_inner(w, w) - 1;
      for (int k = 0; k < 4; ++k) d(0, k) = 2 * (k == 0 ? -w[k] : w[k]);
      for (int i = 0; i < 3; ++i) {
        r[i + 1] = minkowski_inner(w, faces[i]) + std::cos(target[i]);
        for (int k = 0; k < 4; ++k) d(i + 1, k) = k == 0 ? -faces[i][k] : faces[i][k];
      }
      if (r.lpNorm<Eigen::Infinity>() < 1e-14) break;
      Eigen::Vector4d step = d.colPivHouseholderQr().solve(-r);
      for (int k = 0; k < 4; ++k) w[k] += step[k];
      done = step.lpNorm<Eigen::Infinity>() < 1e-15;
    }
    if (!w.finite() || std::abs(minkowski_inner(w, w) - 1) > 1e-9)
      throw Error(ErrorCode::HomotopyStuck, "truncation plane solve failed");
  }
  return normalize_spacelike(w);
}

Realization construct_truncated(const AbstractPolyhedron& c, const AngleAssignment& a, const ConstructOptions& opts,
                                PipelineReport* report) {
  PipelineReport local;
  PipelineReport& rep = report ? *report : local;
  const auto cls = classify(c);
  if (cls.kind != CombinatorialClass::Kind::Truncated)
    throw Error(ErrorCode::NotTruncatedClass, std::string("complex is ") + kind_name(cls.kind));
  // pull the surviving edges to within delta of pi/3, keeping the edges of
  // collapsed triangles where a puts them; fall back to pulling everything
  AngleAssignment pulled = pull_toward_pi_over_3(a, 0.95 * opts.delta);
  std::set<Edge> held;
  for (const auto& v : truncation_path(c, pulled, opts.delta).vertices)
    for (int g : c.neighbors(v.triangle_face)) held.insert(Edge(v.triangle_face, g));
  AngleAssignment a_s;
  for (const auto& [e, v] : a.values()) a_s.set(e, held.count(e) ? v : pulled.at(e));
  if (!check_conditions(c, a_s).passes) a_s = pulled;

  TruncationPath path = truncation_path(c, a_s, opts.delta);
  const auto& ct = path.collapsed;
  for (const auto& v : path.vertices) rep.truncated_faces.push_back(v.triangle_face);
  rep.stage("collapsed " + std::to_string(path.vertices.size()) + " triangle faces", 0.0);

  Realization tilde = construct_simple(ct, path.beta, opts, &rep);
  rep.stage("realized the collapsed complex at beta", residual_of(tilde, path.beta));

  ConstructOptions o = opts;
  o.solver.k = opts.truncation_k;
  o.solver.require_compact = false;
  // gauge on a vertex that stays finite along the leg
  o.solver.auto_gauge = false;
  o.solver.gauge = centered_gauge(tilde, [&](const Triangle& t) {
    return std::none_of(path.vertices.begin(), path.vertices.end(),
                        [&](const CollapsedVertex& cv) { return cv.vertex.f == t.f; });
  });
  tilde = homotopy_deform(tilde, path.a_hat, o.solver, nullptr, false);
  rep.stage("deformed past the vertex crossings", residual_of(tilde, path.a_hat));

  // the finite vertices give an interior reference for the hyperideal signs
  LorentzVector sum;
  for (const auto& v : tilde.vertices)
    if (v.kind == VertexKind::Finite) sum = sum + v.vec;
  LorentzVector interior = normalize_timelike(sum);

  const int n = c.face_count();
  std::vector<LorentzVector> normals(n);
  for (size_t i = 0; i < path.face_map.size(); ++i) normals[path.face_map[i]] = tilde.normals[i];
  for (const auto& cv : path.vertices) {
    const auto& f = cv.vertex.f;
    VertexClass vc = triple_intersection(tilde.normals[f[0]], tilde.normals[f[1]], tilde.normals[f[2]], interior);
    if (vc.kind != VertexKind::Hyperideal)
      throw Error(ErrorCode::VertexNeverCrossed,
                  "vertex replacing face " + std::to_string(cv.triangle_face) + " did not become hyperideal");
    std::array<LorentzVector, 3> faces;
    std::array<double, 3> angles;
    bool right = true;
    for (int i = 0; i < 3; ++i) {
      faces[i] = tilde.normals[f[i]];
      angles[i] = a_s.at(Edge(cv.triangle_face, path.face_map[f[i]]));
      right = right && std::abs(angles[i] - kPi / 2) < 1e-15;
    }
    normals[cv.triangle_face] = right ? vc.vec : solve_truncation_plane(vc.vec, faces, angles);
  }
  Realization full(c, std::move(normals));
  require_verified(full, a_s, opts.solver, "truncated assembly");
  rep.stage("assembled truncated polyhedron", residual_of(full, a_s));

  full = homotopy_deform(full, a, opts.solver);
  rep.stage("deformed to target angles", residual_of(full, a));
  return full;
}

std::array<CutPiece, 2> cut_along(const AbstractPolyhedron& c, const AngleAssignment& a, const Circuit& gamma) {
  if (gamma.k != 3) throw Error(ErrorCode::InternalInvariantViolation, "can only cut along 3-circuits");
  const int n = c.face_count();
  std::vector<int> side(n, -1);
  for (int f : gamma.faces) side[f] = -2;
  int sides = 0;
  for (int s = 0; s < n; ++s) {
    if (side[s] != -1) continue;
    std::deque<int> q{s};
    side[s] = sides;
    while (!q.empty()) {
      int f = q.front();
      q.pop_front();
      for (int g : c.neighbors(f))
        if (side[g] == -1) {
          side[g] = sides;
          q.push_back(g);
        }
    }
    ++sides;
  }
  if (sides != 2) throw Error(ErrorCode::InternalInvariantViolation, "circuit does not separate the complex in two");
  std::array<CutPiece, 2> out;
  for (int s = 0; s < 2; ++s) {
    auto& piece = out[s];
    std::vector<int> local(n, -1);
    for (int f = 0; f < n; ++f)
      if (side[f] == s || side[f] == -2) {
        local[f] = static_cast<int>(piece.faces.size());
        piece.faces.push_back(f);
      }
    const int fnew = static_cast<int>(piece.faces.size());
    piece.faces.push_back(-1);
    std::vector<Triangle> tris;
    for (const auto& t : c.triangles())
      if (local[t.f[0]] >= 0 && local[t.f[1]] >= 0 && local[t.f[2]] >= 0)
        tris.emplace_back(local[t.f[0]], local[t.f[1]], local[t.f[2]]);
    const auto& g = gamma.faces;
    for (int i = 0; i < 3; ++i) tris.emplace_back(fnew, local[g[i]], local[g[(i + 1) % 3]]);
    piece.complex = AbstractPolyhedron(fnew + 1, std::move(tris));
    require_valid(piece.complex);
    for (const auto& e : piece.complex.edges()) {
      if (e.b == fnew)
        piece.angles.set(e, kPi / 2);
      else
        piece.angles.set(e, a.at(Edge(piece.faces[e.a], piece.faces[e.b])));
    }
  }
  return out;
}

namespace {

// frame (p_xy, +-n_F, toward p_yz, completion toward p_zx)
LorentzMatrix triangle_frame(const Realization& r, int f, const std::array<int, 3>& xyz, double normal_sign) {
  const auto& v = r.normals;
  auto corner = [&](int i, int j) {
    auto vc = triple_intersection(v[f], v[xyz[i]], v[xyz[j]]);
    if (vc.kind != VertexKind::Finite) throw Error(ErrorCode::GlueMismatch, "gluing triangle has a non-finite corner");
    return vc.vec;
  };
  LorentzVector pxy = corner(0, 1), pyz = corner(1, 2), pzx = corner(2, 0);
  LorentzVector nf = normal_sign * v[f];
  LorentzVector u = pyz + minkowski_inner(pyz, pxy) * pxy;
  u = u - minkowski_inner(u, nf) * nf;
  LorentzVector s2 = normalize_spacelike(u);
  LorentzVector s3 = normalize_spacelike(minkowski_cross(pxy, nf, s2));
  if (minkowski_inner(pzx, s3) < 0) s3 = -s3;
  return frame_matrix(pxy, nf, s2, s3);
}

}  // namespace

LorentzMatrix glue_isometry(const Realization& a, int fa, const std::array<int, 3>& xyz_a, const Realization& b,
                            int fb, const std::array<int, 3>& xyz_b) {
  LorentzMatrix fa_m = triangle_frame(a, fa, xyz_a, 1.0);
  LorentzMatrix fb_m = triangle_frame(b, fb, xyz_b, -1.0);
  return fa_m * lorentz_inverse(fb_m);
}

Realization construct_compound(const AbstractPolyhedron& c, const AngleAssignment& a, const ConstructOptions& opts,
                               PipelineReport* report) {
  PipelineReport local;
  PipelineReport& rep = report ? *report : local;
  const auto cls = classify(c);
  if (cls.kind != CombinatorialClass::Kind::Compound)
    throw Error(ErrorCode::SemanticError, std::string("complex is ") + kind_name(cls.kind) + ", not compound");
  const Circuit& gamma = cls.cutting_circuits.front();
  auto pieces = cut_along(c, a, gamma);
  std::string cut = "cut along {" + std::to_string(gamma.faces[0]) + "," + std::to_string(gamma.faces[1]) + "," +
                    std::to_string(gamma.faces[2]) + "}";
  rep.pieces.push_back(cut + ": pieces of " + std::to_string(pieces[0].complex.face_count()) + " and " +
                       std::to_string(pieces[1].complex.face_count()) + " faces");
  rep.stage(cut, 0.0);

  std::array<Realization, 2> real;
  for (int s = 0; s < 2; ++s) {
    PipelineReport sub;
    real[s] = construct(pieces[s].complex, pieces[s].angles, opts, &sub);
    for (const auto& line : sub.pieces) rep.pieces.push_back("  " + line);
    rep.pieces.push_back("  piece " + std::to_string(s) + ": " + sub.classification + ", " +
                         std::to_string(pieces[s].complex.face_count()) + " faces");
    for (int t : sub.truncated_faces)
      if (pieces[s].faces[t] >= 0) rep.truncated_faces.push_back(pieces[s].faces[t]);
  }
  std::array<std::array<int, 3>, 2> xyz;
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 3; ++i)
      xyz[s][i] = static_cast<int>(std::find(pieces[s].faces.begin(), pieces[s].faces.end(), gamma.faces[i]) -
                                   pieces[s].faces.begin());
  const int f0 = pieces[0].complex.face_count() - 1, f1 = pieces[1].complex.face_count() - 1;
  LorentzMatrix g = glue_isometry(real[0], f0, xyz[0], real[1], f1, xyz[1]);
  auto moved = apply_isometry(g, real[1].normals);

  const int n = c.face_count();
  std::vector<LorentzVector> normals(n);
  std::vector<char> have(n, 0);
  for (size_t i = 0; i + 1 < pieces[0].faces.size(); ++i) {
    normals[pieces[0].faces[i]] = real[0].normals[i];
    have[pieces[0].faces[i]] = 1;
  }
  double mismatch = 0;
  for (size_t i = 0; i + 1 < pieces[1].faces.size(); ++i) {
    int f = pieces[1].faces[i];
    if (have[f]) {
      auto d = normals[f] - moved[i];
      mismatch = std::max({mismatch, std::abs(d.x0), std::abs(d.x1), std::abs(d.x2), std::abs(d.x3)});
    } else {
      normals[f] = moved[i];
    }
  }
  auto dn = real[0].normals[f0] + moved[f1];
  mismatch = std::max({mismatch, std::abs(dn.x0), std::abs(dn.x1), std::abs(dn.x2), std::abs(dn.x3)});
  if (mismatch > 1e-6) throw Error(ErrorCode::GlueMismatch, "pieces disagree by " + std::to_string(mismatch));
  Realization glued(c, std::move(normals));
  glued = polish(glued, a, opts.solver);
  rep.stage("glued pieces (mismatch " + std::to_string(mismatch) + ")", residual_of(glued, a));
  return glued;
}

Realization construct(const AbstractPolyhedron& c, const AngleAssignment& a, const ConstructOptions& opts,
                      PipelineReport* report) {
  PipelineReport local;
  PipelineReport& rep = report ? *report : local;
  require_valid(c);
  auto cond = check_conditions(c, a);
  if (!cond.passes) throw Error(ErrorCode::ConditionsFailed, cond.summary());
  Realization out;
  const int n = c.face_count();
  if (isomorphism(c, build_base_complex(BaseKind::Prism, n))) {
    rep.classification = "prism";
    out = construct_simple(c, a, opts, &rep);
  } else {
    auto cls = classify(c);
    rep.classification = kind_name(cls.kind);
    switch (cls.kind) {
      case CombinatorialClass::Kind::Simple: out = construct_simple(c, a, opts, &rep); break;
      case CombinatorialClass::Kind::Truncated: out = construct_truncated(c, a, opts, &rep); break;
      case CombinatorialClass::Kind::Compound: out = construct_compound(c, a, opts, &rep); break;
    }
  }
  out = polish(out, a, opts.solver);
  require_verified(out, a, opts.solver, "construct");
  return out;
}

}  // namespace andreev
