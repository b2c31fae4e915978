#include "andreev/combinatorics.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "andreev/error.hpp"
#include "log.hpp"

namespace andreev {

namespace {

long long edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<long long>(a) << 32) | static_cast<unsigned>(b);
}

long long tri_key(const Triangle& t) {
  return (static_cast<long long>(t.f[0]) << 42) | (static_cast<long long>(t.f[1]) << 21) | t.f[2];
}

std::vector<int> normalize_cycle(const std::vector<int>& cyc) {
  const int k = static_cast<int>(cyc.size());
  std::vector<int> best;
  for (int dir : {1, -1})
    for (int s = 0; s < k; ++s) {
      std::vector<int> cand(k);
      for (int i = 0; i < k; ++i) cand[i] = cyc[((s + dir * i) % k + k) % k];
      if (best.empty() || cand < best) best = cand;
    }
  return best;
}

Circuit make_circuit(const std::vector<int>& cyc) {
  Circuit c;
  c.k = static_cast<int>(cyc.size());
  c.faces = normalize_cycle(cyc);
  for (int i = 0; i < c.k; ++i) c.edges.emplace_back(c.faces[i], c.faces[(i + 1) % c.k]);
  return c;
}

}  // namespace

Triangle::Triangle(int x, int y, int z) : f{x, y, z} { std::sort(f.begin(), f.end()); }

int Triangle::third(int x, int y) const {
  for (int v : f)
    if (v != x && v != y) return v;
  return -1;
}

AbstractPolyhedron::AbstractPolyhedron(int face_count, std::vector<Triangle> triangles)
    : n_(face_count), tris_(std::move(triangles)) {
  derive();
}

void AbstractPolyhedron::derive() {
  problems_.clear();
  nbrs_.assign(std::max(n_, 0), {});
  for (size_t t = 0; t < tris_.size(); ++t) {
    const auto& f = tris_[t].f;
    bool in_range = true;
    for (int v : f)
      if (v < 0 || v >= n_) in_range = false;
    if (!in_range) {
      problems_.push_back("triangle " + std::to_string(t) + " has a face index out of range");
      continue;
    }
    if (f[0] == f[1] || f[1] == f[2]) {
      problems_.push_back("triangle " + std::to_string(t) + " repeats a face");
      continue;
    }
    if (!tri_lookup_.emplace(tri_key(tris_[t]), static_cast<int>(t)).second) {
      problems_.push_back("triangle {" + std::to_string(f[0]) + "," + std::to_string(f[1]) + "," +
                          std::to_string(f[2]) + "} listed twice");
      continue;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        auto& v = edge_tris_[edge_key(f[i], f[j])];
        if (v.empty()) edges_.emplace_back(f[i], f[j]);
        v.push_back(static_cast<int>(t));
      }
  }
  std::sort(edges_.begin(), edges_.end());
  for (size_t i = 0; i < edges_.size(); ++i) {
    edge_lookup_[edge_key(edges_[i].a, edges_[i].b)] = static_cast<int>(i);
    nbrs_[edges_[i].a].push_back(edges_[i].b);
    nbrs_[edges_[i].b].push_back(edges_[i].a);
  }
  for (const auto& e : edges_) {
    size_t cnt = edge_tris_[edge_key(e.a, e.b)].size();
    if (cnt != 2)
      problems_.push_back("edge {" + std::to_string(e.a) + "," + std::to_string(e.b) + "} on " +
                          (cnt == 3 ? std::string("three") : std::to_string(cnt)) + " faces");
  }
  if (!problems_.empty()) return;

  // coherent orientation by flooding across edges
  oriented_.assign(tris_.size(), {-1, -1, -1});
  std::vector<char> done(tris_.size(), 0);
  for (size_t seed = 0; seed < tris_.size(); ++seed) {
    if (done[seed]) continue;
    oriented_[seed] = tris_[seed].f;
    done[seed] = 1;
    std::deque<int> q{static_cast<int>(seed)};
    while (!q.empty()) {
      int t = q.front();
      q.pop_front();
      auto o = oriented_[t];
      for (int i = 0; i < 3; ++i) {
        int a = o[i], b = o[(i + 1) % 3];
        for (int u : edge_tris_[edge_key(a, b)]) {
          if (u == t) continue;
          int c = tris_[u].third(a, b);
          std::array<int, 3> want{b, a, c};
          if (!done[u]) {
            oriented_[u] = want;
            done[u] = 1;
            q.push_back(u);
          } else {
            // must contain directed edge b->a
            const auto& w = oriented_[u];
            bool ok = false;
            for (int j = 0; j < 3; ++j)
              if (w[j] == b && w[(j + 1) % 3] == a) ok = true;
            if (!ok) {
              problems_.push_back("dual triangulation is not orientable");
              return;
            }
          }
        }
      }
    }
  }
  // cyclic neighbour order from the oriented fans
  for (int f = 0; f < n_; ++f) {
    if (nbrs_[f].empty()) continue;
    std::map<int, int> succ;
    for (const auto& o : oriented_) {
      for (int i = 0; i < 3; ++i)
        if (o[i] == f) succ[o[(i + 1) % 3]] = o[(i + 2) % 3];
    }
    std::vector<int> cyc;
    int start = nbrs_[f].front(), cur = start;
    do {
      cyc.push_back(cur);
      auto it = succ.find(cur);
      if (it == succ.end()) break;
      cur = it->second;
    } while (cur != start && cyc.size() <= nbrs_[f].size());
    if (cur != start || cyc.size() != nbrs_[f].size()) {
      problems_.push_back("link of face " + std::to_string(f) + " is not a single cycle");
      return;
    }
    nbrs_[f] = cyc;
  }
  well_formed_ = true;
}

int AbstractPolyhedron::edge_index(int a, int b) const {
  auto it = edge_lookup_.find(edge_key(a, b));
  return it == edge_lookup_.end() ? -1 : it->second;
}

int AbstractPolyhedron::triangle_index(int a, int b, int c) const {
  if (a == b || b == c || a == c) return -1;
  auto it = tri_lookup_.find(tri_key(Triangle(a, b, c)));
  return it == tri_lookup_.end() ? -1 : it->second;
}

std::vector<int> AbstractPolyhedron::opposite(int a, int b) const {
  std::vector<int> out;
  auto it = edge_tris_.find(edge_key(a, b));
  if (it == edge_tris_.end()) return out;
  for (int t : it->second) out.push_back(tris_[t].third(a, b));
  return out;
}

std::string AbstractPolyhedron::to_string() const {
  std::ostringstream os;
  os << "N=" << n_ << " [";
  for (size_t i = 0; i < tris_.size(); ++i)
    os << (i ? " " : "") << tris_[i].f[0] << "," << tris_[i].f[1] << "," << tris_[i].f[2];
  os << "]";
  return os.str();
}

ValidationReport validate(const AbstractPolyhedron& c) {
  ValidationReport r;
  auto fail = [&](std::string s) {
    r.ok = false;
    r.violations.push_back(std::move(s));
  };
  const int n = c.face_count();
  if (n < 4) fail("fewer than 4 faces");
  for (const auto& p : c.problems_) fail(p);
  for (int f = 0; f < n; ++f) {
    if (c.nbrs_[f].empty())
      fail("face " + std::to_string(f) + " appears in no triangle");
    else if (c.nbrs_[f].size() < 3)
      fail("face " + std::to_string(f) + " has fewer than 3 edges");
  }
  const int v = c.vertex_count(), e = c.edge_count();
  if (v - e + n != 2)
    fail("Euler count V - E + N = " + std::to_string(v - e + n) + ", expected 2");
  if (2 * e != 3 * v) fail("2E != 3V (not trivalent)");
  if (e != 3 * n - 6) fail("E = " + std::to_string(e) + ", expected 3N - 6 = " + std::to_string(3 * n - 6));
  if (n > 0) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      for (int g : c.nbrs_[f])
        if (!seen[g]) {
          seen[g] = 1;
          ++count;
          stack.push_back(g);
        }
    }
    if (count != n) fail("complex is not connected");
  }
  return r;
}

void require_valid(const AbstractPolyhedron& c) {
  auto r = validate(c);
  if (!r.ok) throw Error(ErrorCode::SemanticError, r.violations.front());
}

std::vector<Circuit> find_prismatic_circuits(const AbstractPolyhedron& c, int k) {
  std::set<Circuit> found;
  const int n = c.face_count();
  if (k == 3) {
    for (const auto& e : c.edges())
      for (int x : c.neighbors(e.b))
        if (x > e.b && c.adjacent(e.a, x) && !c.has_triangle(e.a, e.b, x))
          found.insert(make_circuit({e.a, e.b, x}));
  } else if (k == 4) {
    // a is the smallest label on the cycle; b and d its two cycle neighbours
    for (int a = 0; a < n; ++a)
      for (int b : c.neighbors(a)) {
        if (b <= a) continue;
        for (int cc : c.neighbors(b)) {
          if (cc <= a || cc == b || c.has_triangle(a, b, cc)) continue;
          for (int d : c.neighbors(cc)) {
            if (d <= a || d == b || !c.adjacent(d, a)) continue;
            if (c.has_triangle(b, cc, d) || c.has_triangle(cc, d, a) || c.has_triangle(d, a, b)) continue;
            found.insert(make_circuit({a, b, cc, d}));
          }
        }
      }
  }
  return {found.begin(), found.end()};
}

bool is_simple(const AbstractPolyhedron& c) {
  for (const auto& e : c.edges())
    for (int x : c.neighbors(e.b))
      if (x > e.b && c.adjacent(e.a, x) && !c.has_triangle(e.a, e.b, x)) return false;
  return true;
}

const char* kind_name(CombinatorialClass::Kind k) {
  switch (k) {
    case CombinatorialClass::Kind::Simple: return "simple";
    case CombinatorialClass::Kind::Truncated: return "truncated";
    case CombinatorialClass::Kind::Compound: return "compound";
  }
  return "?";
}

CombinatorialClass classify(const AbstractPolyhedron& c) {
  CombinatorialClass out;
  auto circuits = find_prismatic_circuits(c, 3);
  if (circuits.empty()) return out;
  std::set<int> tri_faces;
  for (const auto& circ : circuits) {
    int a = circ.faces[0], b = circ.faces[1], d = circ.faces[2];
    int surrounded = -1;
    for (int t : c.neighbors(a))
      if (c.degree(t) == 3 && c.has_triangle(t, a, b) && c.has_triangle(t, b, d) && c.has_triangle(t, d, a))
        surrounded = t;
    if (surrounded >= 0)
      tri_faces.insert(surrounded);
    else
      out.cutting_circuits.push_back(circ);
  }
  out.triangle_faces.assign(tri_faces.begin(), tri_faces.end());
  out.kind = out.cutting_circuits.empty() ? CombinatorialClass::Kind::Truncated
                                          : CombinatorialClass::Kind::Compound;
  return out;
}

Edge flipped_edge(const AbstractPolyhedron& c, const Edge& e) {
  auto opp = c.opposite(e.a, e.b);
  if (opp.size() != 2) throw Error(ErrorCode::IllegalMove, "edge is not interior to two triangles");
  return Edge(opp[0], opp[1]);
}

AbstractPolyhedron whitehead_move(const AbstractPolyhedron& c, const WhiteheadMove& m) {
  const int x = m.edge.a, y = m.edge.b;
  auto opp = c.opposite(x, y);
  auto name = [&] { return "Wh(" + std::to_string(x) + "," + std::to_string(y) + ")"; };
  if (opp.size() != 2) throw Error(ErrorCode::IllegalMove, name() + ": not an edge of the dual");
  const int a = opp[0], b = opp[1];
  if (a == b || c.adjacent(a, b)) throw Error(ErrorCode::IllegalMove, name() + ": would double an edge");
  if (c.degree(x) <= 3 || c.degree(y) <= 3)
    throw Error(ErrorCode::IllegalMove, name() + ": would leave a face with two edges");
  std::vector<Triangle> tris;
  tris.reserve(c.triangles().size());
  for (const auto& t : c.triangles())
    if (!(t.contains(x) && t.contains(y))) tris.push_back(t);
  tris.emplace_back(a, b, x);
  tris.emplace_back(a, b, y);
  AbstractPolyhedron out(c.face_count(), std::move(tris));
  auto r = validate(out);
  if (!r.ok) throw Error(ErrorCode::IllegalMove, name() + ": " + r.violations.front());
  return out;
}

const char* base_name(BaseKind b) { return b == BaseKind::Prism ? "Pr" : "D"; }

AbstractPolyhedron build_base_complex(BaseKind kind, int n) {
  std::vector<Triangle> tris;
  if (kind == BaseKind::Prism) {
    if (n < 5) throw Error(ErrorCode::BadN, "prism needs N >= 5");
    const int k = n - 2;
    for (int i = 0; i < k; ++i) {
      int s = 2 + i, t = 2 + (i + 1) % k;
      tris.emplace_back(0, s, t);
      tris.emplace_back(1, s, t);
    }
  } else {
    if (n < 8) throw Error(ErrorCode::BadN, "split prism needs N >= 8 (it coincides with the prism below)");
    const int first = 4, last = n - 1;
    for (int j = first; j < last; ++j) {
      tris.emplace_back(0, j, j + 1);
      tris.emplace_back(1, j, j + 1);
    }
    tris.emplace_back(0, 2, first);
    tris.emplace_back(0, 2, last);
    tris.emplace_back(1, 3, first);
    tris.emplace_back(1, 3, last);
    tris.emplace_back(2, 3, first);
    tris.emplace_back(2, 3, last);
  }
  return AbstractPolyhedron(n, std::move(tris));
}

AbstractPolyhedron relabel(const AbstractPolyhedron& c, const std::vector<int>& perm) {
  std::vector<Triangle> tris;
  for (const auto& t : c.triangles()) tris.emplace_back(perm[t.f[0]], perm[t.f[1]], perm[t.f[2]]);
  return AbstractPolyhedron(c.face_count(), std::move(tris));
}

AbstractPolyhedron cube_complex() {
  std::vector<Triangle> tris;
  for (int x : {0, 1})
    for (int y : {2, 3})
      for (int z : {4, 5}) tris.emplace_back(x, y, z);
  return AbstractPolyhedron(6, std::move(tris));
}

AbstractPolyhedron lobell_complex(int n) {
  if (n < 5) throw Error(ErrorCode::BadN, "Lobell polyhedron needs n >= 5");
  auto u = [n](int i) { return 2 + ((i % n) + n) % n; };
  auto l = [n](int i) { return 2 + n + ((i % n) + n) % n; };
  std::vector<Triangle> tris;
  for (int i = 0; i < n; ++i) {
    tris.emplace_back(0, u(i), u(i + 1));
    tris.emplace_back(u(i), u(i + 1), l(i + 1));
    tris.emplace_back(l(i), l(i + 1), u(i));
    tris.emplace_back(1, l(i), l(i + 1));
  }
  return AbstractPolyhedron(2 * n + 2, std::move(tris));
}

AbstractPolyhedron dodecahedron_complex() { return lobell_complex(5); }

// ---- canonical form ----

namespace {

// BFS code from the flag (f, g, dir). labels[face] receives the BFS label.
std::vector<int> bfs_code(const AbstractPolyhedron& c, int f, int g, int dir, std::vector<int>& labels) {
  const int n = c.face_count();
  labels.assign(n, -1);
  std::vector<int> ref(n, -1);
  std::vector<int> code;
  code.reserve(2 * c.edge_count() + n + 1);
  code.push_back(n);
  labels[f] = 0;
  ref[f] = g;
  int next = 1;
  std::deque<int> q{f};
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    const auto& L = c.neighbors(v);
    const int d = static_cast<int>(L.size());
    int pos = static_cast<int>(std::find(L.begin(), L.end(), ref[v]) - L.begin());
    for (int k = 0; k < d; ++k) {
      int u = L[((pos + dir * k) % d + d) % d];
      if (labels[u] < 0) {
        labels[u] = next++;
        ref[u] = v;
        q.push_back(u);
      }
      code.push_back(labels[u]);
    }
    code.push_back(-1);
  }
  return code;
}

}  // namespace

std::vector<int> canonical_code(const AbstractPolyhedron& c) {
  std::vector<int> best, labels;
  for (int f = 0; f < c.face_count(); ++f)
    for (int g : c.neighbors(f))
      for (int dir : {1, -1}) {
        auto code = bfs_code(c, f, g, dir, labels);
        if (best.empty() || code < best) best = std::move(code);
      }
  return best;
}

std::optional<std::vector<int>> isomorphism(const AbstractPolyhedron& a, const AbstractPolyhedron& b) {
  if (a.face_count() != b.face_count() || a.edge_count() != b.edge_count()) return std::nullopt;
  if (a.face_count() == 0 || a.neighbors(0).empty()) return std::nullopt;
  std::vector<int> la, lb;
  auto ca = bfs_code(a, 0, a.neighbors(0).front(), 1, la);
  for (int f = 0; f < b.face_count(); ++f) {
    if (b.degree(f) != a.degree(0)) continue;
    for (int g : b.neighbors(f))
      for (int dir : {1, -1}) {
        if (bfs_code(b, f, g, dir, lb) != ca) continue;
        std::vector<int> inv(b.face_count()), map(a.face_count());
        for (int x = 0; x < b.face_count(); ++x) inv[lb[x]] = x;
        for (int x = 0; x < a.face_count(); ++x) map[x] = inv[la[x]];
        return map;
      }
  }
  return std::nullopt;
}

// ---- reduction to a base complex ----

namespace {

struct StepFailed {};

class Reducer {
 public:
  explicit Reducer(const AbstractPolyhedron& c) : cur_(c) {
    trace_.intermediates.push_back(c);
    const int n = c.face_count();
    int best = -1;
    for (int f = 0; f < n; ++f)
      if (best < 0 || c.degree(f) > c.degree(best)) best = f;
    vinf_ = best;
    budget_ = 20 * n;
  }

  ReductionTrace run();

 private:
  int n() const { return cur_.face_count(); }
  int plen() const { return cur_.degree(vinf_); }
  bool in_p(int f) const { return cur_.adjacent(vinf_, f); }
  bool interior(int f) const { return f != vinf_ && !in_p(f); }

  std::vector<int> interior_vertices() const {
    std::vector<int> out;
    for (int f = 0; f < n(); ++f)
      if (interior(f)) out.push_back(f);
    return out;
  }
  std::vector<int> interior_nbrs(int a) const {
    std::vector<int> out;
    for (int g : cur_.neighbors(a))
      if (interior(g)) out.push_back(g);
    return out;
  }
  bool endpoint(int a) const { return interior_nbrs(a).size() == 1; }

  // Maximal runs of P-vertices in the link of a, in cyclic link order.
  std::vector<std::vector<int>> components(int a) const {
    const auto& L = cur_.neighbors(a);
    const int d = static_cast<int>(L.size());
    int start = -1;
    for (int i = 0; i < d; ++i)
      if (!in_p(L[i])) start = i;
    std::vector<std::vector<int>> comps;
    if (start < 0) {
      comps.push_back(L);
      return comps;
    }
    std::vector<int> run;
    for (int k = 1; k <= d; ++k) {
      int v = L[(start + k) % d];
      if (in_p(v)) {
        run.push_back(v);
      } else if (!run.empty()) {
        comps.push_back(run);
        run.clear();
      }
    }
    if (!run.empty()) comps.push_back(run);
    return comps;
  }
  int p_count(int a) const {
    int k = 0;
    for (int g : cur_.neighbors(a))
      if (in_p(g)) ++k;
    return k;
  }

  void flip(int x, int y) {
    if (static_cast<int>(trace_.moves.size()) >= budget_)
      throw Error(ErrorCode::InternalInvariantViolation, "reduction exceeded the 20N move budget");
    if (!cur_.adjacent(x, y)) throw StepFailed{};
    AbstractPolyhedron next;
    try {
      next = whitehead_move(cur_, {Edge(x, y)});
    } catch (const Error&) {
      throw StepFailed{};
    }
    if (!is_simple(next)) throw StepFailed{};
    cur_ = std::move(next);
    trace_.moves.push_back({Edge(x, y)});
    trace_.intermediates.push_back(cur_);
  }

  // Run body on a snapshot; restore on failure.
  bool attempt(const std::function<void()>& body) {
    auto saved_cur = cur_;
    auto saved_moves = trace_.moves.size();
    try {
      body();
      return true;
    } catch (const StepFailed&) {
      cur_ = saved_cur;
      trace_.moves.resize(saved_moves);
      trace_.intermediates.resize(saved_moves + 1);
      return false;
    }
  }

  // Move 2: shrink the component of a containing `anchor` to `keep` vertices,
  // keeping its front (from_back) or its back.
  void move2(int a, int anchor, size_t keep, bool from_back) {
    for (;;) {
      auto comps = components(a);
      const std::vector<int>* comp = nullptr;
      for (const auto& cp : comps)
        if (std::find(cp.begin(), cp.end(), anchor) != cp.end()) comp = &cp;
      if (!comp) throw StepFailed{};
      if (comp->size() <= keep) return;
      flip(a, from_back ? comp->back() : comp->front());
    }
  }

  // Move 3: remove every component of a that contains neither x nor y.
  void move3(int a, int x, int y) {
    if (!cur_.adjacent(a, x) || !cur_.adjacent(a, y)) throw StepFailed{};
    for (int guard = 0; guard < 4 * n(); ++guard) {
      auto comps = components(a);
      const std::vector<int>* target = nullptr;
      for (const auto& cp : comps) {
        bool keep = std::find(cp.begin(), cp.end(), x) != cp.end() || std::find(cp.begin(), cp.end(), y) != cp.end();
        if (!keep) {
          target = &cp;
          break;
        }
      }
      if (!target) return;
      int q1 = target->back(), q2 = target->front();
      if (!attempt([&] { flip(a, q1); })) flip(a, q2);
    }
    throw StepFailed{};
  }

  // Move 1 on the unique two-vertex component of a.
  void move1(int a) {
    auto comps = components(a);
    if (comps.size() != 1 || comps[0].size() != 2) throw StepFailed{};
    int before = plen();
    flip(comps[0][0], comps[0][1]);
    if (plen() != before + 1) throw StepFailed{};
  }

  bool case1();
  bool case2();
  bool case3();
  bool fallback_search();
  void finish();

  AbstractPolyhedron cur_;
  ReductionTrace trace_;
  int vinf_ = 0;
  int budget_ = 0;
};

bool Reducer::case1() {
  for (int a : interior_vertices()) {
    if (endpoint(a)) continue;
    for (const auto& comp : components(a)) {
      if (comp.size() < 2) continue;
      for (bool from_back : {true, false}) {
        int kept0 = from_back ? comp[0] : comp[comp.size() - 2];
        int kept1 = from_back ? comp[1] : comp[comp.size() - 1];
        bool ok = attempt([&] {
          move2(a, kept0, 2, from_back);
          move3(a, kept0, kept1);
          move1(a);
        });
        if (ok) {
          log_debug("reduce: case 1 at " + std::to_string(a) + ", |P| = " + std::to_string(plen()));
          return true;
        }
      }
    }
  }
  return false;
}

bool Reducer::case2() {
  for (int a : interior_vertices()) {
    if (!endpoint(a) || p_count(a) <= 3) continue;
    auto comps = components(a);
    if (comps.size() != 1) continue;
    for (bool back : {true, false}) {
      int q = back ? comps[0].back() : comps[0].front();
      bool ok = attempt([&] {
        flip(a, q);
        if (!case1()) throw StepFailed{};
      });
      if (ok) {
        log_debug("reduce: case 2 at " + std::to_string(a));
        return true;
      }
    }
  }
  return false;
}

bool Reducer::case3() {
  for (int i1 : interior_vertices()) {
    if (!endpoint(i1)) continue;
    auto comps = components(i1);
    if (comps.size() != 1 || comps[0].size() != 3) continue;
    std::vector<int> chain{i1};
    int prev = i1, cur = interior_nbrs(i1)[0];
    while (true) {
      auto nb = interior_nbrs(cur);
      if (nb.size() > 2) break;
      if (nb.size() < 2) {
        chain.clear();
        break;
      }
      chain.push_back(cur);
      int nxt = nb[0] == prev ? nb[1] : nb[0];
      prev = cur;
      cur = nxt;
    }
    if (chain.empty()) continue;
    const int im = cur;
    for (bool mirror : {false, true}) {
      int p1 = mirror ? comps[0][2] : comps[0][0];
      int p2 = comps[0][1];
      int p3 = mirror ? comps[0][0] : comps[0][2];
      bool ok = attempt([&] {
        move3(im, p1, p3);
        flip(im, p3);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) flip(*it, p1);
        int before = plen();
        flip(p1, p2);
        if (plen() != before + 1) throw StepFailed{};
      });
      if (ok) {
        log_debug("reduce: case 3 from endpoint " + std::to_string(i1));
        return true;
      }
    }
  }
  return false;
}

// Not part of the lemma's recipe: a bounded search used only when every case
// fails for the chosen orientation conventions.
bool Reducer::fallback_search() {
  const int target = plen() + 1;
  std::function<bool(int)> dfs = [&](int depth) -> bool {
    if (plen() >= target) return true;
    if (depth == 0) return false;
    auto edges = cur_.edges();
    for (const auto& e : edges) {
      if (e.a == vinf_ || e.b == vinf_) continue;
      if (attempt([&] {
            flip(e.a, e.b);
            if (!dfs(depth - 1)) throw StepFailed{};
          }))
        return true;
    }
    return false;
  };
  for (int depth = 1; depth <= 3; ++depth)
    if (dfs(depth)) {
      log_info("reduce: used fallback search of depth " + std::to_string(depth));
      return true;
    }
  return false;
}

void Reducer::finish() {
  // two interior endpoints remain; D_N has one of them touching P in exactly 3
  auto inner = interior_vertices();
  if (inner.size() != 2) throw Error(ErrorCode::InternalInvariantViolation, "expected two interior vertices");
  for (int a : inner)
    if (p_count(a) == 3) return;
  for (int a : inner) {
    auto comps = components(a);
    if (comps.size() != 1) continue;
    if (attempt([&] { move2(a, comps[0][0], 3, true); }) ||
        attempt([&] { move2(a, comps[0].back(), 3, false); }))
      return;
  }
  throw Error(ErrorCode::InternalInvariantViolation, "final Move 2(b) failed");
}

ReductionTrace Reducer::run() {
  const int target = n() - 3;
  while (plen() < target) {
    if (case1() || case2() || case3() || fallback_search()) continue;
    throw Error(ErrorCode::InternalInvariantViolation,
                "no simple Whitehead sequence found at |P| = " + std::to_string(plen()));
  }
  finish();
  if (!isomorphism(cur_, build_base_complex(BaseKind::SplitPrism, n())))
    throw Error(ErrorCode::InternalInvariantViolation, "reduction did not end at the split prism");
  trace_.base = BaseKind::SplitPrism;
  return std::move(trace_);
}

}  // namespace

ReductionTrace reduce_to_base(const AbstractPolyhedron& c) {
  require_valid(c);
  const int n = c.face_count();
  if (n < 5) throw Error(ErrorCode::BadN, "reduction needs N > 4");
  if (isomorphism(c, build_base_complex(BaseKind::Prism, n))) {
    ReductionTrace t;
    t.intermediates.push_back(c);
    t.base = BaseKind::Prism;
    return t;
  }
  if (!is_simple(c)) throw Error(ErrorCode::NotSimple, "complex has a prismatic 3-circuit");
  if (n <= 7) throw Error(ErrorCode::InternalInvariantViolation, "simple complex with N <= 7 that is not a prism");
  return Reducer(c).run();
}

}  // namespace andreev
