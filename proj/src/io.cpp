#include "andreev/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>
#include <unistd.h>

#include "andreev/error.hpp"

namespace andreev {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, "at " + where + ": " + what);
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where, "expected an integer");
  return j.get<int>();
}

AngleSpec angle_from_json(const json& j, const std::string& where) {
  if (j.is_number()) {
    AngleSpec a;
    a.radians = j.get<double>();
    return a;
  }
  if (!j.is_string()) schema_error(where, "expected an angle (\"a/b pi\" or radians)");
  try {
    return parse_angle(j.get<std::string>());
  } catch (const Error& e) {
    schema_error(where, e.what());
  }
}

json angle_to_json(const AngleSpec& a) {
  if (a.kind == AngleSpec::Kind::RationalOfPi) return format_angle(a);
  return a.radians;
}

std::string line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

// ---- angles ----

double AngleSpec::value() const { return kind == Kind::RationalOfPi ? kPi * double(num) / double(den) : radians; }

AngleSpec parse_angle(const std::string& text) {
  static const std::regex frac(R"(^\s*(\d+)\s*/\s*(\d+)\s*\*?\s*pi\s*$)");
  static const std::regex over(R"(^\s*(\d+)?\s*\*?\s*pi\s*(?:/\s*(\d+))?\s*$)");
  std::smatch m;
  AngleSpec a;
  long long num = 0, den = 0;
  if (std::regex_match(text, m, frac)) {
    num = std::stoll(m[1]);
    den = std::stoll(m[2]);
  } else if (std::regex_match(text, m, over)) {
    num = m[1].matched ? std::stoll(m[1]) : 1;
    den = m[2].matched ? std::stoll(m[2]) : 1;
  } else {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || text.find_first_not_of(" \t", used) != std::string::npos)
      throw Error(ErrorCode::ParseError, "not an angle: \"" + text + "\"");
    a.radians = v;
    return a;
  }
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in \"" + text + "\"");
  long long g = std::gcd(num, den);
  a.kind = AngleSpec::Kind::RationalOfPi;
  a.num = g ? num / g : 0;
  a.den = g ? den / g : 1;
  return a;
}

std::string format_angle(const AngleSpec& a) {
  if (a.kind == AngleSpec::Kind::Decimal) return fmt("%.17g", a.radians);
  if (a.den == 1) return a.num == 1 ? "pi" : std::to_string(a.num) + " pi";
  return std::to_string(a.num) + "/" + std::to_string(a.den) + " pi";
}

// ---- input documents ----

InputDocument parse_input(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    auto pos = msg.find("]: ");  // drop the library's own position prefix
    throw Error(ErrorCode::ParseError, line_col(text, e.byte ? e.byte - 1 : 0) + ": " +
                                           (pos == std::string::npos ? msg : msg.substr(pos + 3)));
  }
  if (!j.is_object()) schema_error("/", "expected an object");
  static const std::set<std::string> known{"name", "faces", "index_base", "triangles", "default_angle", "angles",
                                           "options"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) schema_error("/" + key, "unknown key");

  InputDocument doc;
  if (j.contains("name")) {
    if (!j["name"].is_string()) schema_error("/name", "expected a string");
    doc.name = j["name"].get<std::string>();
  }
  if (!j.contains("faces")) schema_error("/faces", "missing face count");
  doc.face_count = as_int(j["faces"], "/faces");
  if (doc.face_count < 4) throw Error(ErrorCode::SemanticError, "a polyhedron needs at least 4 faces");
  if (j.contains("index_base")) {
    doc.index_base = as_int(j["index_base"], "/index_base");
    if (doc.index_base != 0 && doc.index_base != 1) schema_error("/index_base", "must be 0 or 1");
  }
  const int base = doc.index_base;
  auto face = [&](const json& v, const std::string& where) {
    int f = as_int(v, where) - base;
    if (f < 0 || f >= doc.face_count)
      throw Error(ErrorCode::SemanticError, "face index at " + where + " is out of range");
    return f;
  };

  if (!j.contains("triangles") || !j["triangles"].is_array()) schema_error("/triangles", "expected an array");
  std::set<Triangle> seen;
  for (std::size_t i = 0; i < j["triangles"].size(); ++i) {
    const auto& t = j["triangles"][i];
    std::string where = "/triangles/" + std::to_string(i);
    if (!t.is_array() || t.size() != 3) schema_error(where, "expected three face indices");
    std::array<int, 3> tri{face(t[0], where + "/0"), face(t[1], where + "/1"), face(t[2], where + "/2")};
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw Error(ErrorCode::SemanticError, "triangle at " + where + " repeats a face");
    if (!seen.insert(Triangle(tri[0], tri[1], tri[2])).second)
      throw Error(ErrorCode::SemanticError, "triangle at " + where + " is listed twice");
    doc.dual_triangles.push_back(tri);
  }
  std::vector<Triangle> tris;
  for (const auto& t : doc.dual_triangles) tris.emplace_back(t[0], t[1], t[2]);
  AbstractPolyhedron c(doc.face_count, tris);
  auto report = validate(c);
  if (!report.ok) throw Error(ErrorCode::SemanticError, "not a polyhedron: " + report.violations.front());

  if (j.contains("default_angle")) doc.default_angle = angle_from_json(j["default_angle"], "/default_angle");
  if (j.contains("angles")) {
    if (!j["angles"].is_array()) schema_error("/angles", "expected an array");
    for (std::size_t i = 0; i < j["angles"].size(); ++i) {
      const auto& e = j["angles"][i];
      std::string where = "/angles/" + std::to_string(i);
      if (!e.is_array() || e.size() != 3) schema_error(where, "expected [face, face, angle]");
      int a = face(e[0], where + "/0"), b = face(e[1], where + "/1");
      if (!c.adjacent(a, b))
        throw Error(ErrorCode::SemanticError, "angle at " + where + " names faces " + std::to_string(a + base) +
                                                  " and " + std::to_string(b + base) + ", which are not adjacent");
      AngleSpec v = angle_from_json(e[2], where + "/2");
      auto [it, fresh] = doc.edge_angles.emplace(Edge(a, b), v);
      if (!fresh && !(it->second == v))
        throw Error(ErrorCode::SemanticError, "edge {" + std::to_string(a + base) + "," + std::to_string(b + base) +
                                                  "} is given two different angles");
    }
  }

  if (j.contains("options")) {
    const auto& o = j["options"];
    if (!o.is_object()) schema_error("/options", "expected an object");
    auto& p = doc.options;
    auto number = [&](const char* key) {
      if (!o[key].is_number()) schema_error(std::string("/options/") + key, "expected a number");
      return o[key].get<double>();
    };
    for (const auto& [key, value] : o.items()) {
      std::string where = "/options/" + key;
      if (key == "k") p.k = as_int(value, where);
      else if (key == "epsilon") p.epsilon = angle_from_json(value, where);
      else if (key == "delta") p.delta = angle_from_json(value, where);
      else if (key == "residual_tol") p.residual_tol = number("residual_tol");
      else if (key == "angle_tol") p.angle_tol = number("angle_tol");
      else if (key == "containment_tol") p.containment_tol = number("containment_tol");
      else if (key == "seed") {
        if (!value.is_number_unsigned()) schema_error(where, "expected a non-negative integer");
        p.seed = value.get<std::uint64_t>();
      } else if (key == "samples") {
        if (!value.is_number_integer() || value.get<long long>() < 2) schema_error(where, "expected an integer >= 2");
        p.samples = value.get<long long>();
      } else if (key == "gauge") {
        if (!value.is_array() || value.size() != 3) schema_error(where, "expected three face indices");
        std::array<int, 3> g{face(value[0], where + "/0"), face(value[1], where + "/1"), face(value[2], where + "/2")};
        if (!c.has_triangle(g[0], g[1], g[2]))
          throw Error(ErrorCode::SemanticError, "gauge faces must meet at a vertex");
        p.gauge = g;
      } else {
        schema_error(where, "unknown option");
      }
    }
    if (p.k && *p.k < 2) schema_error("/options/k", "must be at least 2");
  }
  return doc;
}

std::string serialize_input(const InputDocument& doc) {
  // fixed key order, one triangle or angle per line
  const int base = doc.index_base;
  std::ostringstream out;
  out << "{\n";
  if (!doc.name.empty()) out << "  \"name\": " << json(doc.name).dump() << ",\n";
  out << "  \"faces\": " << doc.face_count << ",\n";
  out << "  \"index_base\": " << base << ",\n";
  out << "  \"triangles\": [";
  for (std::size_t i = 0; i < doc.dual_triangles.size(); ++i) {
    const auto& t = doc.dual_triangles[i];
    out << (i ? ",\n    " : "\n    ") << json{t[0] + base, t[1] + base, t[2] + base}.dump();
  }
  out << "\n  ]";
  if (doc.default_angle) out << ",\n  \"default_angle\": " << angle_to_json(*doc.default_angle).dump();
  if (!doc.edge_angles.empty()) {
    out << ",\n  \"angles\": [";
    bool first = true;
    for (const auto& [e, a] : doc.edge_angles) {
      out << (first ? "\n    " : ",\n    ") << json{e.a + base, e.b + base, angle_to_json(a)}.dump();
      first = false;
    }
    out << "\n  ]";
  }
  const auto& p = doc.options;
  json o = json::object();
  if (p.k) o["k"] = *p.k;
  if (p.epsilon) o["epsilon"] = angle_to_json(*p.epsilon);
  if (p.delta) o["delta"] = angle_to_json(*p.delta);
  if (p.residual_tol) o["residual_tol"] = *p.residual_tol;
  if (p.angle_tol) o["angle_tol"] = *p.angle_tol;
  if (p.containment_tol) o["containment_tol"] = *p.containment_tol;
  if (p.gauge) o["gauge"] = {(*p.gauge)[0] + base, (*p.gauge)[1] + base, (*p.gauge)[2] + base};
  if (p.seed) o["seed"] = *p.seed;
  if (p.samples) o["samples"] = *p.samples;
  if (!o.empty()) out << ",\n  \"options\": " << o.dump();
  out << "\n}\n";
  return out.str();
}

Problem to_problem(const InputDocument& doc) {
  Problem pr;
  std::vector<Triangle> tris;
  for (const auto& t : doc.dual_triangles) tris.emplace_back(t[0], t[1], t[2]);
  pr.complex = AbstractPolyhedron(doc.face_count, std::move(tris));
  require_valid(pr.complex);
  for (const auto& e : pr.complex.edges()) {
    auto it = doc.edge_angles.find(e);
    if (it != doc.edge_angles.end())
      pr.angles.set(e, it->second.value());
    else if (doc.default_angle)
      pr.angles.set(e, doc.default_angle->value());
    else
      throw Error(ErrorCode::MissingEdgeAngle, "edge {" + std::to_string(e.a + doc.index_base) + "," +
                                                   std::to_string(e.b + doc.index_base) +
                                                   "} has no angle and there is no default_angle");
  }
  const auto& p = doc.options;
  auto& o = pr.options;
  if (p.k) o.solver.k = *p.k;
  if (p.epsilon) o.epsilon = p.epsilon->value();
  if (p.delta) o.delta = p.delta->value();
  if (p.residual_tol) o.solver.residual_tol = *p.residual_tol;
  if (p.angle_tol) o.solver.angle_tol = *p.angle_tol;
  if (p.containment_tol) o.solver.containment_tol = *p.containment_tol;
  if (p.gauge) o.solver.gauge = {(*p.gauge)[0], (*p.gauge)[1], (*p.gauge)[2]};
  if (p.seed) pr.monte_carlo.seed = *p.seed;
  if (p.samples) pr.monte_carlo.samples = *p.samples;
  return pr;
}

// ---- OFF ----

std::string write_off(const Realization& p) {
  if (!p.compact()) throw Error(ErrorCode::NonCompact, "OFF output needs every vertex finite");
  const auto& c = p.complex;
  OffMesh mesh;
  mesh.edge_count = c.edge_count();
  for (const auto& v : p.vertices) mesh.vertices.push_back(to_projective(v.vec));
  for (int f = 0; f < c.face_count(); ++f) {
    const auto& g = c.neighbors(f);
    const int d = static_cast<int>(g.size());
    std::vector<int> ring;
    for (int i = 0; i < d; ++i) ring.push_back(c.triangle_index(f, g[i], g[(i + 1) % d]));
    // Newell normal against the outward direction of the Klein plane
    double nx = 0, ny = 0, nz = 0;
    for (int i = 0; i < d; ++i) {
      const auto& a = mesh.vertices[ring[i]];
      const auto& b = mesh.vertices[ring[(i + 1) % d]];
      nx += (a[1] - b[1]) * (a[2] + b[2]);
      ny += (a[2] - b[2]) * (a[0] + b[0]);
      nz += (a[0] - b[0]) * (a[1] + b[1]);
    }
    const auto& v = p.normals[f];
    if (nx * v.x1 + ny * v.x2 + nz * v.x3 < 0) std::reverse(ring.begin(), ring.end());
    mesh.faces.push_back(std::move(ring));
    mesh.colors.push_back(f % 16);
  }
  return write_off(mesh);
}

std::string write_off(const OffMesh& mesh) {
  std::ostringstream out;
  out << mesh.vertices.size() << ' ' << mesh.faces.size() << ' ' << mesh.edge_count << '\n';
  for (const auto& k : mesh.vertices)
    out << fmt("%.6f", k[0]) << ' ' << fmt("%.6f", k[1]) << ' ' << fmt("%.6f", k[2]) << '\n';
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    out << mesh.faces[f].size();
    for (int r : mesh.faces[f]) out << ' ' << r;
    if (f < mesh.colors.size()) out << ' ' << mesh.colors[f];
    out << '\n';
  }
  return out.str();
}

OffMesh read_off(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  }
  std::size_t at = 0;
  if (!lines.empty() && lines[0].find("OFF") != std::string::npos) ++at;
  auto fail = [&](const std::string& what) -> OffMesh {
    throw Error(ErrorCode::ParseError, "OFF line " + std::to_string(at + 1) + ": " + what);
  };
  if (at >= lines.size()) return fail("missing counts");
  long long nv = -1, nf = -1, ne = -1;
  {
    std::istringstream h(lines[at]);
    if (!(h >> nv >> nf >> ne) || nv < 0 || nf < 0) return fail("expected \"V F E\"");
  }
  ++at;
  OffMesh mesh;
  mesh.edge_count = static_cast<int>(ne);
  for (long long i = 0; i < nv; ++i, ++at) {
    if (at >= lines.size()) return fail("missing vertices");
    std::istringstream l(lines[at]);
    std::array<double, 3> v{};
    if (!(l >> v[0] >> v[1] >> v[2])) return fail("expected three coordinates");
    mesh.vertices.push_back(v);
  }
  for (long long i = 0; i < nf; ++i, ++at) {
    if (at >= lines.size()) return fail("missing faces");
    std::istringstream l(lines[at]);
    int n = 0;
    if (!(l >> n) || n < 3) return fail("expected a vertex count of at least 3");
    std::vector<int> face(n);
    for (int& x : face)
      if (!(l >> x) || x < 0 || x >= nv) return fail("bad vertex index");
    int color = 0;
    l >> color;
    mesh.faces.push_back(std::move(face));
    mesh.colors.push_back(color);
  }
  return mesh;
}

Realization realization_from_off(const OffMesh& mesh) {
  const int n = static_cast<int>(mesh.faces.size());
  const int nv = static_cast<int>(mesh.vertices.size());
  std::vector<std::vector<int>> on(nv);
  for (int f = 0; f < n; ++f)
    for (int v : mesh.faces[f]) on[v].push_back(f);
  std::vector<Triangle> tris;
  for (int v = 0; v < nv; ++v) {
    if (on[v].size() != 3)
      throw Error(ErrorCode::SemanticError, "OFF vertex " + std::to_string(v) + " is not on exactly three faces");
    tris.emplace_back(on[v][0], on[v][1], on[v][2]);
  }
  AbstractPolyhedron c(n, std::move(tris));
  require_valid(c);
  std::array<double, 3> centre{0, 0, 0};
  for (const auto& v : mesh.vertices)
    for (int i = 0; i < 3; ++i) centre[i] += v[i] / nv;
  std::vector<LorentzVector> normals;
  for (int f = 0; f < n; ++f) {
    // least-squares plane m.x = d through the face's vertices
    Eigen::MatrixXd a(mesh.faces[f].size(), 4);
    for (std::size_t i = 0; i < mesh.faces[f].size(); ++i) {
      const auto& v = mesh.vertices[mesh.faces[f][i]];
      a.row(i) << v[0], v[1], v[2], -1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    Eigen::Vector4d s = svd.matrixV().col(3);
    // Klein plane m.x = d is the hyperboloid plane with normal (d, m)
    LorentzVector v{s[3], s[0], s[1], s[2]};
    if (-v.x0 + v.x1 * centre[0] + v.x2 * centre[1] + v.x3 * centre[2] > 0) v = -v;
    normals.push_back(normalize_spacelike(v));
  }
  return Realization(c, std::move(normals));
}

// ---- generators ----

std::string write_generators(const GeneratorSet& g) {
  for (const auto& [e, a] : g.angles.values()) {
    double k = std::round(kPi / a);
    if (!(k >= 2) || std::abs(a - kPi / k) > 1e-9)
      throw Error(ErrorCode::NotSubmultiple, "edge {" + std::to_string(e.a) + "," + std::to_string(e.b) +
                                                 "} has angle " + fmt("%.12g", a) + ", not pi/k");
  }
  std::ostringstream out;
  out << g.matrices.size() << '\n';
  for (const auto& m : g.matrices) {
    out << '\n';
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) out << fmt("%.15e", m(r, c)) << (c == 3 ? '\n' : ' ');
  }
  return out.str();
}

std::vector<LorentzMatrix> read_generators(const std::string& text) {
  std::istringstream in(text);
  long long n = 0;
  if (!(in >> n) || n < 0) throw Error(ErrorCode::ParseError, "generators: expected a count");
  std::vector<LorentzMatrix> out;
  for (long long i = 0; i < n; ++i) {
    LorentzMatrix m;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (!(in >> m(r, c)))
          throw Error(ErrorCode::ParseError, "generators: matrix " + std::to_string(i) + " is incomplete");
    out.push_back(m);
  }
  std::string rest;
  if (in >> rest) throw Error(ErrorCode::ParseError, "generators: trailing data");
  return out;
}

// ---- state files ----

std::string write_state(const Realization& p) {
  json j;
  j["faces"] = p.face_count();
  json tris = json::array();
  for (const auto& t : p.complex.triangles()) tris.push_back({t.f[0], t.f[1], t.f[2]});
  j["triangles"] = tris;
  json normals = json::array();
  for (const auto& v : p.normals) normals.push_back({v.x0, v.x1, v.x2, v.x3});
  j["normals"] = normals;
  return j.dump(2) + "\n";
}

Realization read_state(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "state file, " + line_col(text, e.byte ? e.byte - 1 : 0));
  }
  try {
    int n = j.at("faces").get<int>();
    std::vector<Triangle> tris;
    for (const auto& t : j.at("triangles")) tris.emplace_back(t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>());
    std::vector<LorentzVector> normals;
    for (const auto& v : j.at("normals"))
      normals.push_back({v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>(), v.at(3).get<double>()});
    for (const auto& t : tris)
      for (int f : t.f)
        if (f < 0 || f >= n) throw Error(ErrorCode::SemanticError, "state file: face index out of range");
    AbstractPolyhedron c(n, std::move(tris));
    require_valid(c);
    if (static_cast<int>(normals.size()) != n) throw Error(ErrorCode::SemanticError, "state file: normal count");
    return Realization(c, std::move(normals));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("state file: ") + e.what());
  }
}

// ---- files ----

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::IoError, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot replace " + path);
  }
}

}  // namespace andreev
