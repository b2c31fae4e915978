#pragma once

// Independent oracles and shared fixtures for the test binaries.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "andreev/andreev_conditions.hpp"
#include "andreev/combinatorics.hpp"
#include "andreev/construct.hpp"
#include "andreev/lorentz.hpp"
#include "andreev/solver.hpp"

namespace oracle {

constexpr double pi = std::numbers::pi;

inline std::string data(const std::string& name) { return std::string(ANDREEV_DATA_DIR) + "/" + name; }

// Lobachevsky function by composite Gauss-Legendre quadrature. On (0, pi),
// 2 sin t = (2/pi) t (pi - t) g(t) with g smooth and positive (g(0) = g(pi) = 1),
// so the two log singularities integrate in closed form.
inline double lobachevsky_quadrature(double x) {
  x = std::remainder(x, pi);  // odd, pi-periodic
  if (x == 0) return 0;
  const double s = x < 0 ? -1 : 1;
  x = std::abs(x);
  auto xlogx = [](double u) { return u > 0 ? u * std::log(u) : 0.0; };
  auto log_g = [](double t) {
    double u = pi - t;
    if (t < 1e-9 || u < 1e-9) return 0.0;
    return std::log(pi * std::sin(t) / (t * u));
  };
  static const double nodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                  0.9061798459386640};
  static const double weights[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                    0.2369268850561891, 0.2369268850561891};
  const int panels = 400;
  const double h = x / panels;
  double smooth = 0;
  for (int i = 0; i < panels; ++i) {
    double mid = (i + 0.5) * h;
    for (int k = 0; k < 5; ++k) smooth += weights[k] * log_g(mid + nodes[k] * h / 2) * h / 2;
  }
  double value = -x * std::log(2.0) - (xlogx(x) - x) + (xlogx(pi - x) - (pi - x)) - (xlogx(pi) - pi) +
                 x * std::log(pi) - smooth;
  return s * value;
}

// Crossed-edge endpoints of a candidate circuit: for each consecutive face
// pair, the two dual triangles containing that pair. Prismatic iff all
// 2k endpoints are distinct.
inline bool prismatic_by_definition(const andreev::AbstractPolyhedron& c, const std::vector<int>& cyc) {
  std::vector<andreev::Triangle> ends;
  const int k = static_cast<int>(cyc.size());
  for (int i = 0; i < k; ++i) {
    int a = cyc[i], b = cyc[(i + 1) % k];
    if (!c.adjacent(a, b)) return false;
    for (const auto& t : c.triangles())
      if (t.contains(a) && t.contains(b)) ends.push_back(t);
  }
  std::set<andreev::Triangle> distinct(ends.begin(), ends.end());
  return distinct.size() == ends.size() && static_cast<int>(ends.size()) == 2 * k;
}

// Brute-force enumeration of prismatic k-circuits as face sets with
// orientation removed: every ordered k-tuple of distinct faces is tried.
inline std::set<std::vector<int>> brute_circuits(const andreev::AbstractPolyhedron& c, int k) {
  std::set<std::vector<int>> out;
  const int n = c.face_count();
  std::vector<int> cyc(k);
  auto canon = [&](std::vector<int> v) {
    std::vector<int> best;
    for (int dir = 0; dir < 2; ++dir) {
      for (int r = 0; r < k; ++r) {
        std::vector<int> w(k);
        for (int i = 0; i < k; ++i) w[i] = v[(r + i) % k];
        if (best.empty() || w < best) best = w;
      }
      std::reverse(v.begin(), v.end());
    }
    return best;
  };
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == k) {
      if (prismatic_by_definition(c, cyc)) out.insert(canon(cyc));
      return;
    }
    for (int f = 0; f < n; ++f) {
      if (std::find(cyc.begin(), cyc.begin() + depth, f) != cyc.begin() + depth) continue;
      cyc[depth] = f;
      self(self, depth + 1);
    }
  };
  rec(rec, 0);
  return out;
}

// Face normals of the 16-face example as printed (4 decimals), in face order.
inline std::vector<andreev::LorentzVector> example16_normals() {
  const double rows[16][4] = {
      {36.5078, -10.7624, -0.3090, -34.8983}, {4.9237, -1.5291, -1.2342, -4.6240},
      {-0.0000, 0.8660, -0.5000, -0.0000},    {4.5134, -2.1988, -2.3943, -3.2868},
      {2.7290, -1.9854, -0.3091, -2.1000},    {13.3691, -5.0338, -0.3090, -12.4216},
      {65.0863, -19.6363, -2.7939, -61.9987}, {35.9576, -9.6209, -1.5515, -34.6262},
      {51.5713, -13.3145, -0.3090, -49.8320}, {5.8378, -0.5352, -0.3090, -5.8905},
      {-0.0000, 0.0000, 1.0000, 0.0000},      {1.2179, -1.4082, -0.7071, 0.0000},
      {-7.8692, 2.1329, 3.6943, 6.6879},      {3.4039, -1.5744, -2.7269, -1.6344},
      {-1.0781, 0.5773, -0.0000, -1.3524},    {-2.1544, 0.9964, 1.7260, -1.2921}};
  std::vector<andreev::LorentzVector> out;
  for (const auto& r : rows) out.push_back({r[0], r[1], r[2], r[3]});
  return out;
}

// Dual triangles of the 16-face example (1-based as printed).
inline const std::vector<std::array<int, 3>>& example16_vert() {
  static const std::vector<std::array<int, 3>> v = {
      {3, 4, 14},  {6, 5, 11},  {4, 12, 5},  {12, 5, 11}, {1, 6, 7},   {1, 7, 8},   {1, 8, 9},
      {1, 9, 11},  {10, 9, 11}, {1, 6, 11},  {2, 3, 13},  {2, 4, 5},   {2, 5, 6},   {2, 6, 7},
      {2, 7, 8},   {9, 8, 10},  {2, 8, 10},  {2, 10, 3},  {11, 10, 3}, {2, 4, 13},  {3, 4, 13},
      {3, 12, 14}, {4, 12, 14}, {11, 3, 15}, {11, 12, 15}, {3, 12, 16}, {3, 15, 16}, {12, 15, 16}};
  return v;
}

// Vertices of the printed 16-face OFF listing (Klein model), in the order of
// example16_vert().
inline const std::vector<std::array<double, 3>>& example16_off_vertices() {
  static const std::vector<std::array<double, 3>> v = {
      {0.093414, 0.626297, -0.759378},
      {0.668701, -0.423986, 0.508660},
      {0.480895, 0.480927, -0.729094},
      {0.533074, -0.046431, -0.835831},
      {0.000602, -0.321164, 0.944739},
      {-0.109909, -0.298793, 0.946284},
      {-0.257482, -0.413626, 0.871178},
      {-0.241511, -0.517345, 0.817366},
      {-0.394737, -0.502851, 0.762029},
      {0.039860, -0.522084, 0.841280},
      {-0.198257, 0.894806, -0.304826},
      {0.473945, 0.834475, -0.252208},
      {0.632626, 0.016126, 0.705772},
      {0.030462, -0.199457, 0.975695},
      {-0.112537, -0.193119, 0.972142},
      {-0.373893, -0.377061, 0.844031},
      {-0.376723, -0.130280, 0.905450},
      {-0.802208, 0.544817, 0.123196},
      {-0.869841, -0.223571, -0.241933},
      {0.160888, 0.910483, -0.333052},
      {0.007468, 0.802257, -0.570580},
      {0.104069, 0.367146, -0.917226},
      {0.301741, 0.507113, -0.798909},
      {-0.023848, -0.005394, -0.995609},
      {0.158629, -0.006953, -0.985479},
      {0.065661, 0.192695, -0.976218},
      {0.028183, 0.094604, -0.992919},
      {0.091162, 0.094314, -0.989423}};
  return v;
}

// Hyperboloid point of a Klein-model point.
inline andreev::LorentzVector from_klein(const std::array<double, 3>& k) {
  const double s = 1 / std::sqrt(1 - k[0] * k[0] - k[1] * k[1] - k[2] * k[2]);
  return {s, s * k[0], s * k[1], s * k[2]};
}

inline andreev::AbstractPolyhedron example16() {
  std::vector<andreev::Triangle> t;
  for (const auto& v : example16_vert()) t.emplace_back(v[0] - 1, v[1] - 1, v[2] - 1);
  return andreev::AbstractPolyhedron(16, t);
}

// Angles of the 16-face example's figure, 1-based face pairs.
inline andreev::AngleAssignment example16_angles(const andreev::AbstractPolyhedron& c) {
  using andreev::Edge;
  auto a = andreev::AngleAssignment::uniform(c, 2 * pi / 5);
  auto set = [&](int x, int y, double v) { a.set(Edge(x - 1, y - 1), v); };
  for (auto [x, y] : {std::pair{2, 3}, {2, 4}, {3, 4}, {4, 12}, {11, 12}}) set(x, y, pi / 4);
  for (auto [x, y] : {std::pair{2, 13}, {3, 13}, {3, 14}, {3, 16}, {4, 13}, {4, 14}, {11, 15}, {12, 14}, {12, 16},
                      {15, 16}})
    set(x, y, pi / 2);
  for (auto [x, y] : {std::pair{3, 11}, {3, 15}, {12, 15}}) set(x, y, pi / 3);
  set(3, 12, pi / 6);
  return a;
}

// Triangular prism whose three cap-0 vertices are pushed past the ideal
// point (angle sums 0.3 + 0.3 + 1/6 of pi); the cap-1 vertices stay finite
// and carry the gauge.
inline andreev::Realization half_hyperideal_prism() {
  using namespace andreev;
  auto seed = SeedSpec::natal(BaseKind::Prism, 5);
  auto prism = build_prism(5, seed.polygon_angle, seed.cap_angle);
  auto target = extract_angles(prism);
  for (int side : prism.complex.neighbors(0)) target.set(Edge(0, side), 0.3 * pi);
  SolverOptions opts;
  opts.require_compact = false;
  opts.auto_gauge = false;
  const auto& ring = prism.complex.neighbors(1);
  opts.gauge = {1, ring[0], ring[1]};
  return homotopy_deform(prism, target, opts, nullptr, false);
}

// The ten moves that build the dodecahedron from D12, in the printed order
// and the figure's 1-based labels.
inline const std::vector<std::pair<int, int>>& reference_dodecahedron_moves() {
  static const std::vector<std::pair<int, int>> m = {{8, 11}, {4, 11}, {1, 2}, {9, 11}, {2, 4},
                                                     {1, 6},  {7, 11}, {6, 9}, {1, 5},  {1, 4}};
  return m;
}

// A labelling of build_base_complex(SplitPrism, 12) under which the printed
// moves are legal and end at the dodecahedron.
inline int reference_d12_label(int label) {
  static const int map[13] = {-1, 1, 6, 3, 5, 11, 7, 8, 4, 2, 9, 0, 10};
  return map[label];
}

inline double plain_inner(const andreev::LorentzVector& u, const andreev::LorentzVector& v) {
  return -u.x0 * v.x0 + u.x1 * v.x1 + u.x2 * v.x2 + u.x3 * v.x3;
}

}  // namespace oracle
