#include <doctest.h>

#include "andreev/andreev_conditions.hpp"
#include "andreev/construct.hpp"
#include "andreev/error.hpp"
#include "andreev/orbifolds.hpp"
#include "test_support.hpp"

using namespace andreev;
using oracle::example16;
using oracle::example16_angles;
using oracle::pi;

TEST_CASE("check_conditions examples") {
  for (const auto& c : {cube_complex(), dodecahedron_complex(), lobell_complex(7)})
    CHECK(check_conditions(c, AngleAssignment::uniform(c, 2 * pi / 5)).passes);

  auto cube = cube_complex();
  auto right = check_conditions(cube, AngleAssignment::uniform(cube, pi / 2));
  CHECK_FALSE(right.passes);
  CHECK(right.failed(4));
  int fours = 0;
  for (const auto& f : right.failures) fours += f.condition == 4;
  CHECK(fours == 3);

  // a vertex at (pi/3, pi/3, pi/3) fails condition (2) exactly there
  auto a = AngleAssignment::uniform(cube, 2 * pi / 5);
  const auto& t = cube.triangles()[0].f;
  for (auto e : {Edge(t[0], t[1]), Edge(t[1], t[2]), Edge(t[0], t[2])}) a.set(e, pi / 3);
  auto r = check_conditions(cube, a);
  CHECK(r.failed(2));
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].witness == std::vector<int>{t[0], t[1], t[2]});

  AngleAssignment partial;
  CHECK_THROWS_AS(check_conditions(cube, partial), Error);

  auto p16 = example16();
  CHECK(check_conditions(p16, example16_angles(p16)).passes);
  CHECK(check_conditions(cube, lambert_angles(pi / 3, pi / 4, pi / 5)).passes);
}

TEST_CASE("strict boundaries flip exactly one condition") {
  // cube with one prismatic 4-circuit at sum exactly 2pi - tiny: nudging one edge by 1e-9 crosses
  auto cube = cube_complex();
  auto circ = find_prismatic_circuits(cube, 4).front();
  auto a = AngleAssignment::uniform(cube, 2 * pi / 5);
  for (const auto& e : circ.edges) a.set(e, pi / 2);
  CHECK(check_conditions(cube, a).failed(4));
  a.set(circ.edges[0], pi / 2 - 1e-9);
  auto r = check_conditions(cube, a);
  CHECK(r.passes);

  // condition (1) boundary: angle 1e-9 above vs. at zero
  auto b = AngleAssignment::uniform(cube, 2 * pi / 5);
  b.set(cube.edges()[0], 0.0);
  auto rb = check_conditions(cube, b);
  CHECK(rb.failed(1));
}

TEST_CASE("linear_path") {
  auto cube = cube_complex();
  auto from = AngleAssignment::uniform(cube, 2 * pi / 5);
  auto same = linear_path(cube, from, from, 5);
  CHECK(same.size() == 5);
  for (const auto& s : same) CHECK(s.distance(from) == 0);

  auto to = AngleAssignment::uniform(cube, 0.45 * pi);
  auto path = linear_path(cube, from, to, 100);
  CHECK(path.size() == 100);
  CHECK(path.front().distance(from) == 0);
  CHECK(path.back().distance(to) == 0);
  for (const auto& s : path) CHECK(check_conditions(cube, s).passes);
  CHECK_THROWS_AS(linear_path(cube, from, AngleAssignment::uniform(cube, pi / 2), 10), Error);

  // convexity on several complexes, random endpoints inside A_C
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.36 * pi, 0.45 * pi);
  for (const auto& c : {cube, dodecahedron_complex(), lobell_complex(6), lobell_complex(8),
                        build_base_complex(BaseKind::Prism, 9)}) {
    AngleAssignment x, y;
    for (const auto& e : c.edges()) {
      x.set(e, u(rng));
      y.set(e, u(rng));
    }
    if (!check_conditions(c, x).passes || !check_conditions(c, y).passes) continue;
    for (const auto& s : linear_path(c, x, y, 100)) CHECK(check_conditions(c, s).passes);
    CHECK(validate_path(c, {x, y}, 100) == -1);
  }
}

TEST_CASE("truncation_path on the pieces of the 16-face example") {
  auto p16 = example16();
  auto pieces = cut_along(p16, example16_angles(p16), classify(p16).cutting_circuits.front());
  const double delta = pi / 20;
  for (const auto& piece : pieces) {
    CAPTURE(piece.complex.face_count());
    REQUIRE(classify(piece.complex).kind == CombinatorialClass::Kind::Truncated);
    REQUIRE(check_conditions(piece.complex, piece.angles).passes);
    auto near = pull_toward_pi_over_3(piece.angles, 0.95 * delta);
    for (const auto& [e, v] : near.values()) CHECK(std::abs(v - pi / 3) <= delta);
    CHECK(check_conditions(piece.complex, near).passes);

    auto path = truncation_path(piece.complex, near, delta);
    REQUIRE_FALSE(path.vertices.empty());
    CHECK(path.collapsed.face_count() + static_cast<int>(path.vertices.size()) == piece.complex.face_count());
    CHECK(validate(path.collapsed).ok);
    CHECK(check_conditions(path.collapsed, path.beta).passes);
    // at the far end only condition (2) fails, and only at collapsed vertices
    std::set<Triangle> collapsed;
    for (const auto& v : path.vertices) collapsed.insert(v.vertex);
    auto end = check_conditions(path.collapsed, path.a_hat);
    CHECK_FALSE(end.passes);
    for (const auto& f : end.failures) {
      CHECK(f.condition == 2);
      CHECK(collapsed.count(Triangle(f.witness[0], f.witness[1], f.witness[2])) == 1);
    }
    for (const auto& v : path.vertices) {
      CHECK(v.crossing > 0);
      CHECK(v.crossing < 1);
      // the angle sum at the crossing is pi
      auto at = path.sample(v.crossing);
      const auto& f = v.vertex.f;
      double sum = at.at(Edge(f[0], f[1])) + at.at(Edge(f[1], f[2])) + at.at(Edge(f[0], f[2]));
      CHECK(sum == doctest::Approx(pi).epsilon(1e-12));
    }
    // beta = a_hat + 2 delta except on edges crossed by prismatic 3-circuits of C~
    std::set<Edge> held;
    for (const auto& c : find_prismatic_circuits(path.collapsed, 3))
      for (const auto& e : c.edges) held.insert(e);
    for (const auto& e : path.collapsed.edges())
      CHECK(path.beta.at(e) - path.a_hat.at(e) == doctest::Approx(held.count(e) ? 0.0 : 2 * delta));
    // samples before every crossing satisfy all five conditions
    double first = 1;
    for (const auto& v : path.vertices) first = std::min(first, v.crossing);
    for (int i = 0; i < 20; ++i) CHECK(check_conditions(path.collapsed, path.sample(first * i / 20.5)).passes);
  }
}

TEST_CASE("truncation_path errors") {
  auto cube = cube_complex();
  CHECK_THROWS_AS(truncation_path(cube, AngleAssignment::uniform(cube, 2 * pi / 5), pi / 20), Error);

  auto p16 = example16();
  auto piece = cut_along(p16, example16_angles(p16), classify(p16).cutting_circuits.front())[0];
  const double delta = pi / 20;
  // far from pi/3
  try {
    truncation_path(piece.complex, AngleAssignment::uniform(piece.complex, pi / 2), delta);
    FAIL("expected AngleTooFarFromPiOver3");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AngleTooFarFromPiOver3);
  }
  // every angle at pi/3 + 0.9 delta: collapsed vertex sums stay above pi
  try {
    truncation_path(piece.complex, AngleAssignment::uniform(piece.complex, pi / 3 + 0.9 * delta), delta);
    FAIL("expected VertexNeverCrossed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::VertexNeverCrossed);
  }
}
