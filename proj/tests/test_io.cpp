#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <unistd.h>
#include <sstream>

#include "andreev/construct.hpp"
#include "andreev/error.hpp"
#include "andreev/io.hpp"
#include "andreev/orbifolds.hpp"
#include "test_support.hpp"

using namespace andreev;
using oracle::pi;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InternalInvariantViolation;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const char* kCube = R"({
  "faces": 6,
  "triangles": [[0,2,4],[0,2,5],[0,3,4],[0,3,5],[1,2,4],[1,2,5],[1,3,4],[1,3,5]],
  "default_angle": "2/5 pi"
})";

std::string cube_with(const std::string& extra) {
  std::string s = kCube;
  s.insert(s.rfind('}'), "," + extra + "\n");
  return s;
}

const Realization& lambert345() {
  static const Realization r = construct(cube_complex(), lambert_angles(pi / 3, pi / 4, pi / 5));
  return r;
}

}  // namespace

TEST_CASE("parse_angle and format_angle") {
  auto a = parse_angle("2/4 pi");
  CHECK(a.kind == AngleSpec::Kind::RationalOfPi);
  CHECK(a.num == 1);
  CHECK(a.den == 2);
  CHECK(a.value() == pi / 2);
  CHECK(parse_angle("pi").value() == pi);
  CHECK(parse_angle("pi/3").value() == doctest::Approx(pi / 3));
  CHECK(parse_angle("2 pi/5").value() == doctest::Approx(2 * pi / 5));
  CHECK(parse_angle("1.25").value() == 1.25);
  CHECK(format_angle(parse_angle("3/5 pi")) == "3/5 pi");
  CHECK(format_angle(parse_angle("pi")) == "pi");
  for (const char* s : {"1/5 pi", "2/5 pi", "pi", "0.1234567890123"}) {
    auto x = parse_angle(s);
    CHECK(parse_angle(format_angle(x)) == x);
  }
  CHECK(code_of([] { parse_angle("half pi"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_angle("1/0 pi"); }) == ErrorCode::ParseError);
}

TEST_CASE("parse_input: the cube") {
  auto doc = parse_input(kCube);
  CHECK(doc.face_count == 6);
  CHECK(doc.dual_triangles.size() == 8);
  auto prob = to_problem(doc);
  CHECK(prob.complex.edge_count() == 12);
  CHECK(prob.angles.size() == 12);
  CHECK(canonical_code(prob.complex) == canonical_code(cube_complex()));
  for (const auto& [e, v] : prob.angles.values()) CHECK(v == doctest::Approx(2 * pi / 5).epsilon(1e-15));
}

TEST_CASE("parse_input: errors") {
  // malformed JSON reports the position of the offending character
  auto msg = message_of([] { parse_input("{\n  \"faces\": 6,\n  oops\n}"); });
  CHECK(msg.find("line 3, column 3") != std::string::npos);
  CHECK(code_of([] { parse_input("{\n  \"faces\": 6,\n  oops\n}"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_input(cube_with("\"colour\": 1")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_input(cube_with("\"options\": {\"samples\": 1}")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_input(cube_with("\"angles\": [[0,2,\"1/2 pi\"],[2,0,\"1/3 pi\"]]")); }) ==
        ErrorCode::SemanticError);
  CHECK(code_of([] { parse_input(cube_with("\"angles\": [[0,1,\"1/2 pi\"]]")); }) == ErrorCode::SemanticError);
  CHECK(code_of([] { parse_input(cube_with("\"options\": {\"gauge\": [0,1,2]}")); }) == ErrorCode::SemanticError);
  CHECK(code_of([] {
          parse_input(R"({"faces": 6, "triangles": [[0,2,4],[0,2,5],[0,3,4],[0,3,5],[1,2,4],[1,2,5],[1,3,4],[1,3,9]]})");
        }) == ErrorCode::SemanticError);
  CHECK(code_of([] {
          parse_input(R"({"faces": 6, "triangles": [[0,2,4],[0,2,5],[0,3,4],[0,3,5],[1,2,4],[1,2,5],[1,3,4],[1,3,4]]})");
        }) == ErrorCode::SemanticError);
  auto missing = parse_input(R"({"faces": 6, "triangles": [[0,2,4],[0,2,5],[0,3,4],[0,3,5],[1,2,4],[1,2,5],[1,3,4],[1,3,5]],
                                 "angles": [[0,2,"1/2 pi"]]})");
  CHECK(code_of([&] { to_problem(missing); }) == ErrorCode::MissingEdgeAngle);
  CHECK(code_of([] { read_file("/nonexistent/input.json"); }) == ErrorCode::IoError);
}

TEST_CASE("parse_input: options reach the pipeline") {
  auto doc = parse_input(cube_with(
      R"("options": {"k": 40, "epsilon": "1/30 pi", "delta": 0.1, "seed": 9, "samples": 1000, "gauge": [0,2,4]})"));
  auto prob = to_problem(doc);
  CHECK(prob.options.solver.k == 40);
  CHECK(prob.options.epsilon == doctest::Approx(pi / 30));
  CHECK(prob.options.delta == 0.1);
  CHECK(prob.monte_carlo.seed == 9);
  CHECK(prob.monte_carlo.samples == 1000);
  CHECK(prob.options.solver.gauge.f1 == 0);
  CHECK(prob.options.solver.gauge.f2 == 2);
  CHECK(prob.options.solver.gauge.f3 == 4);
}

TEST_CASE("serialize_input round trip over the fixtures") {
  for (const char* name : {"cube_2pi5.json", "lambert_3_4_5.json", "compound16.json", "truncated15.json",
                           "r18_2pi5.json", "lobell_8.json"}) {
    CAPTURE(name);
    auto doc = parse_input(read_file(oracle::data(name)));
    auto text = serialize_input(doc);
    CHECK(parse_input(text) == doc);
    CHECK(serialize_input(parse_input(text)) == text);
  }
  auto one_based = parse_input(read_file(oracle::data("compound16.json")));
  CHECK(one_based.index_base == 1);
  auto prob = to_problem(one_based);
  CHECK(prob.complex.face_count() == 16);
  CHECK(check_conditions(prob.complex, prob.angles).passes);
  // the fixture is the 16-face example in 0-based labels
  CHECK(canonical_code(prob.complex) == canonical_code(oracle::example16()));
  CHECK(prob.angles.distance(oracle::example16_angles(oracle::example16())) == 0);
}

TEST_CASE("write_off on the cube") {
  const auto& p = lambert345();
  auto text = write_off(p);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "8 6 12");
  auto mesh = read_off(text);
  CHECK(mesh.vertices.size() == 8);
  CHECK(mesh.faces.size() == 6);
  CHECK(mesh.edge_count == 12);
  for (int f = 0; f < 6; ++f) CHECK(mesh.colors[f] == f % 16);
  // every face ring is planar and outward: the Newell normal points away from the centroid
  std::array<double, 3> centroid{};
  for (const auto& v : mesh.vertices)
    for (int k = 0; k < 3; ++k) centroid[k] += v[k] / 8;
  for (const auto& ring : mesh.faces) {
    REQUIRE(ring.size() == 4);
    std::array<double, 3> nrm{}, mid{};
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const auto& a = mesh.vertices[ring[i]];
      const auto& b = mesh.vertices[ring[(i + 1) % ring.size()]];
      nrm[0] += (a[1] - b[1]) * (a[2] + b[2]);
      nrm[1] += (a[2] - b[2]) * (a[0] + b[0]);
      nrm[2] += (a[0] - b[0]) * (a[1] + b[1]);
      for (int k = 0; k < 3; ++k) mid[k] += a[k] / ring.size();
    }
    double dot = 0;
    for (int k = 0; k < 3; ++k) dot += nrm[k] * (mid[k] - centroid[k]);
    CHECK(dot > 0);
  }
}

TEST_CASE("OFF round trip") {
  const auto& p = lambert345();
  auto q = realization_from_off(read_off(write_off(p)));
  REQUIRE(q.face_count() == 6);
  auto iso = isomorphism(q.complex, p.complex);
  REQUIRE(iso.has_value());
  auto want = extract_angles(p);
  auto got = extract_angles(q);
  for (const auto& e : q.complex.edges())
    CHECK(got.at(e) == doctest::Approx(want.at(Edge((*iso)[e.a], (*iso)[e.b]))).epsilon(1e-5));
  // same OFF text again after a second pass
  CHECK(read_off(write_off(q)).faces.size() == 6);
  auto twice = read_off(write_off(q));
  auto once = read_off(write_off(p));
  for (std::size_t v = 0; v < once.vertices.size(); ++v) {
    double best = 1e9;
    for (const auto& w : twice.vertices) {
      double d = 0;
      for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(w[k] - once.vertices[v][k]));
      best = std::min(best, d);
    }
    CHECK(best <= 1e-6);
  }
  CHECK(code_of([] { read_off("OFF\n3 1 3\n0 0 0\n1 0 0\n"); }) == ErrorCode::ParseError);
}

TEST_CASE("generators file") {
  auto g = reflection_generators(lambert345());
  auto text = write_generators(g);
  auto back = read_generators(text);
  REQUIRE(back.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(back[i].distance(g.matrices[i]) <= 1e-12);
  CHECK(write_generators(GeneratorSet{back, g.complex, g.angles}) == text);
  CHECK(code_of([&] { read_generators(text + "\n1.0\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { read_generators(text.substr(0, text.size() / 2)); }) == ErrorCode::ParseError);

  auto cube = cube_complex();
  auto p = construct(cube, AngleAssignment::uniform(cube, 2 * pi / 5));
  CHECK(code_of([&] { write_generators(reflection_generators(p)); }) == ErrorCode::NotSubmultiple);
}

TEST_CASE("state file and atomic writes") {
  const auto& p = lambert345();
  auto q = read_state(write_state(p));
  CHECK(canonical_code(q.complex) == canonical_code(p.complex));
  for (int f = 0; f < 6; ++f)
    for (int k = 0; k < 4; ++k) CHECK(q.normals[f][k] == p.normals[f][k]);
  CHECK(code_of([] { read_state("{\"faces\": 6"); }) == ErrorCode::ParseError);

  auto dir = std::filesystem::temp_directory_path() / ("andreev_io_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  auto path = (dir / "out.txt").string();
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  CHECK(read_file(path) == "second\n");
  CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
  CHECK(code_of([&] { write_file_atomic((dir / "missing" / "x").string(), "x"); }) == ErrorCode::IoError);
  std::filesystem::remove_all(dir);
}
