#include "andreev/andreev_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "andreev/error.hpp"

namespace andreev {

namespace {
constexpr double kPi = std::numbers::pi;

std::string faces_str(const std::vector<int>& f) {
  std::string s = "{";
  for (size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
  return s + "}";
}
}  // namespace

AngleAssignment AngleAssignment::uniform(const AbstractPolyhedron& c, double angle) {
  AngleAssignment a;
  for (const auto& e : c.edges()) a.set(e, angle);
  return a;
}

std::optional<double> AngleAssignment::get(const Edge& e) const {
  auto it = angles_.find(e);
  if (it == angles_.end()) return std::nullopt;
  return it->second;
}

double AngleAssignment::at(const Edge& e) const {
  auto it = angles_.find(e);
  if (it == angles_.end())
    throw Error(ErrorCode::MissingEdgeAngle, "no angle for edge {" + std::to_string(e.a) + "," + std::to_string(e.b) + "}");
  return it->second;
}

double AngleAssignment::distance(const AngleAssignment& other) const {
  double d = 0;
  for (const auto& [e, v] : angles_) d = std::max(d, std::abs(v - other.at(e)));
  return d;
}

AngleAssignment AngleAssignment::lerp(const AngleAssignment& other, double t) const {
  AngleAssignment out;
  for (const auto& [e, v] : angles_) out.set(e, (1 - t) * v + t * other.at(e));
  return out;
}

void require_complete(const AbstractPolyhedron& c, const AngleAssignment& a) {
  for (const auto& e : c.edges()) a.at(e);
}

bool ConditionReport::failed(int condition) const {
  return std::any_of(failures.begin(), failures.end(), [&](const auto& f) { return f.condition == condition; });
}

std::string ConditionReport::summary() const {
  std::ostringstream os;
  if (passes) {
    os << "all Andreev conditions hold";
    return os.str();
  }
  for (const auto& f : failures) os << "condition (" << f.condition << ") fails: " << f.detail << "\n";
  return os.str();
}

ConditionReport check_conditions(const AbstractPolyhedron& c, const AngleAssignment& a) {
  require_complete(c, a);
  ConditionReport r;
  auto fail = [&](int cond, std::string detail, std::vector<int> witness) {
    r.passes = false;
    r.failures.push_back({cond, std::move(detail), std::move(witness)});
  };
  for (const auto& e : c.edges()) {
    double v = a.at(e);
    if (v > kPi / 2 + kStrictSlack) fail(0, "edge " + faces_str({e.a, e.b}) + " is obtuse", {e.a, e.b});
    if (!(v >= kStrictSlack)) fail(1, "edge " + faces_str({e.a, e.b}) + " is not positive", {e.a, e.b});
  }
  for (const auto& t : c.triangles()) {
    const auto& f = t.f;
    double s = a.at(Edge(f[0], f[1])) + a.at(Edge(f[1], f[2])) + a.at(Edge(f[0], f[2]));
    if (!(s > kPi + kStrictSlack)) fail(2, "vertex " + faces_str({f[0], f[1], f[2]}) + " has angle sum <= pi", {f[0], f[1], f[2]});
  }
  for (const auto& circ : find_prismatic_circuits(c, 3)) {
    double s = 0;
    for (const auto& e : circ.edges) s += a.at(e);
    if (!(s < kPi - kStrictSlack)) fail(3, "prismatic 3-circuit " + faces_str(circ.faces) + " has sum >= pi", circ.faces);
  }
  for (const auto& circ : find_prismatic_circuits(c, 4)) {
    double s = 0;
    for (const auto& e : circ.edges) s += a.at(e);
    if (!(s < 2 * kPi - kStrictSlack))
      fail(4, "prismatic 4-circuit " + faces_str(circ.faces) + " has sum >= 2pi", circ.faces);
  }
  for (int f = 0; f < c.face_count(); ++f) {
    if (c.degree(f) != 4) continue;
    const auto& g = c.neighbors(f);
    double ring = 0;
    for (int i = 0; i < 4; ++i) ring += a.at(Edge(g[i], g[(i + 1) % 4]));
    for (int off : {0, 1}) {
      double s = ring + a.at(Edge(f, g[off])) + a.at(Edge(f, g[off + 2]));
      if (!(s < 3 * kPi - kStrictSlack))
        fail(5, "quadrilateral face " + std::to_string(f) + " has sum >= 3pi", {f, g[0], g[1], g[2], g[3]});
    }
  }
  return r;
}

std::vector<AngleAssignment> linear_path(const AbstractPolyhedron& c, const AngleAssignment& from,
                                         const AngleAssignment& to, int k) {
  if (!check_conditions(c, from).passes)
    throw Error(ErrorCode::EndpointOutsidePolytope, "path start is outside A_C");
  if (!check_conditions(c, to).passes)
    throw Error(ErrorCode::EndpointOutsidePolytope, "path end is outside A_C");
  k = std::max(k, 2);
  std::vector<AngleAssignment> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) out.push_back(i == k - 1 ? to : from.lerp(to, double(i) / (k - 1)));
  return out;
}

int validate_path(const AbstractPolyhedron& c, const std::vector<AngleAssignment>& corners, int k) {
  int index = 0;
  for (size_t leg = 0; leg + 1 < corners.size(); ++leg)
    for (int i = (leg == 0 ? 0 : 1); i < k; ++i, ++index)
      if (!check_conditions(c, corners[leg].lerp(corners[leg + 1], double(i) / (k - 1))).passes) return index;
  if (corners.size() == 1 && !check_conditions(c, corners[0]).passes) return 0;
  return -1;
}

AngleAssignment pull_toward_pi_over_3(const AngleAssignment& a, double margin) {
  double worst = 0;
  for (const auto& [e, v] : a.values()) worst = std::max(worst, std::abs(v - kPi / 3));
  if (worst <= margin) return a;
  double s = 1 - margin / worst;
  AngleAssignment out;
  for (const auto& [e, v] : a.values()) out.set(e, (1 - s) * v + s * kPi / 3);
  return out;
}

TruncationPath truncation_path(const AbstractPolyhedron& c, const AngleAssignment& a, double delta) {
  auto cls = classify(c);
  if (cls.kind != CombinatorialClass::Kind::Truncated)
    throw Error(ErrorCode::NotTruncatedClass, std::string("complex is ") + kind_name(cls.kind));
  require_complete(c, a);

  // collapse triangles one at a time, in C labels
  const int n = c.face_count();
  std::vector<char> removed(n, 0);
  std::vector<Triangle> tris = c.triangles();
  TruncationPath out;
  std::vector<std::pair<int, Triangle>> collapsed;  // C face, vertex in C labels
  int alive = n;
  for (int t : cls.triangle_faces) {
    if (alive - 1 < 5) {
      out.kept_triangles.push_back(t);
      continue;
    }
    const auto& g = c.neighbors(t);
    std::vector<Triangle> next;
    for (const auto& tr : tris)
      if (!tr.contains(t)) next.push_back(tr);
    next.emplace_back(g[0], g[1], g[2]);
    // validity in a compacted labelling
    std::vector<int> idx(n, -1);
    int m = 0;
    for (int f = 0; f < n; ++f)
      if (!removed[f] && f != t) idx[f] = m++;
    std::vector<Triangle> compact;
    for (const auto& tr : next) compact.emplace_back(idx[tr.f[0]], idx[tr.f[1]], idx[tr.f[2]]);
    if (!validate(AbstractPolyhedron(m, compact)).ok) {
      out.kept_triangles.push_back(t);
      continue;
    }
    tris = std::move(next);
    removed[t] = 1;
    --alive;
    collapsed.emplace_back(t, Triangle(g[0], g[1], g[2]));
  }
  if (collapsed.empty()) throw Error(ErrorCode::NotTruncatedClass, "no triangle face can be collapsed");

  std::vector<int> idx(n, -1);
  for (int f = 0; f < n; ++f)
    if (!removed[f]) {
      idx[f] = static_cast<int>(out.face_map.size());
      out.face_map.push_back(f);
    }
  std::vector<Triangle> compact;
  for (const auto& tr : tris) compact.emplace_back(idx[tr.f[0]], idx[tr.f[1]], idx[tr.f[2]]);
  out.collapsed = AbstractPolyhedron(static_cast<int>(out.face_map.size()), compact);
  const auto& ct = out.collapsed;

  // only edges that survive the collapse move along the path
  for (const auto& e : ct.edges()) {
    Edge pe(out.face_map[e.a], out.face_map[e.b]);
    double v = a.at(pe);
    if (std::abs(v - kPi / 3) > delta + 1e-12)
      throw Error(ErrorCode::AngleTooFarFromPiOver3,
                  "edge {" + std::to_string(pe.a) + "," + std::to_string(pe.b) + "} is farther than delta from pi/3");
    out.a_hat.set(e, v);
  }
  std::vector<Edge> held;
  for (const auto& circ : find_prismatic_circuits(ct, 3))
    for (const auto& e : circ.edges) held.push_back(e);
  for (const auto& e : ct.edges()) {
    bool hold = std::find(held.begin(), held.end(), e) != held.end();
    out.beta.set(e, out.a_hat.at(e) + (hold ? 0.0 : 2 * delta));
  }
  for (const auto& [face, v] : collapsed) {
    CollapsedVertex cv;
    cv.triangle_face = face;
    cv.vertex = Triangle(idx[v.f[0]], idx[v.f[1]], idx[v.f[2]]);
    const auto& f = cv.vertex.f;
    auto sum = [&](const AngleAssignment& x) {
      return x.at(Edge(f[0], f[1])) + x.at(Edge(f[1], f[2])) + x.at(Edge(f[0], f[2]));
    };
    double sb = sum(out.beta), sa = sum(out.a_hat);
    if (!(sa < kPi && sb > kPi))
      throw Error(ErrorCode::VertexNeverCrossed,
                  "angle sum at the vertex replacing face " + std::to_string(face) + " never crosses pi");
    cv.crossing = (sb - kPi) / (sb - sa);
    out.vertices.push_back(cv);
  }
  return out;
}

}  // namespace andreev
