#include "andreev/andreev_c.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>

#include "andreev/error.hpp"
#include "andreev/io.hpp"

struct andreev_problem {
  andreev::Problem problem;
  std::string text;  // last report handed out
};

struct andreev_realization {
  andreev::Realization r;
};

namespace {

thread_local std::string last_error;

andreev_status to_status(andreev::ErrorCode c) { return static_cast<andreev_status>(static_cast<int>(c) + 1); }

// Runs f, translating exceptions into status codes and the thread-local message.
template <class F>
andreev_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return ANDREEV_OK;
  } catch (const andreev::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return ANDREEV_E_UNKNOWN;
  } catch (...) {
    last_error = "unknown exception";
    return ANDREEV_E_UNKNOWN;
  }
}

andreev_status invalid(const char* what) {
  last_error = std::string("InvalidArgument: ") + what;
  return ANDREEV_E_INVALID_ARGUMENT;
}

std::string render(const andreev::PipelineReport& rep) {
  std::ostringstream os;
  os << "classification: " << rep.classification << "\n";
  for (std::size_t i = 0; i < rep.stages.size(); ++i) {
    os << "stage " << rep.stages[i];
    if (i < rep.residuals.size()) os << "  residual " << rep.residuals[i];
    os << "\n";
  }
  if (!rep.truncated_faces.empty()) {
    os << "truncated faces:";
    for (int f : rep.truncated_faces) os << ' ' << f;
    os << "\n";
  }
  for (const auto& m : rep.move_log) os << "move " << m << "\n";
  for (const auto& p : rep.pieces) os << "piece " << p << "\n";
  return os.str();
}

}  // namespace

extern "C" {

const char* andreev_last_error(void) { return last_error.c_str(); }

const char* andreev_status_name(andreev_status s) {
  if (s == ANDREEV_OK) return "Ok";
  if (s == ANDREEV_E_INVALID_ARGUMENT) return "InvalidArgument";
  if (s > ANDREEV_OK && s < ANDREEV_E_INVALID_ARGUMENT)
    return andreev::error_name(static_cast<andreev::ErrorCode>(static_cast<int>(s) - 1));
  return "Unknown";
}

int andreev_status_is_input_error(andreev_status s) {
  if (s == ANDREEV_E_INVALID_ARGUMENT) return 1;
  if (s > ANDREEV_OK && s < ANDREEV_E_INVALID_ARGUMENT)
    return andreev::is_input_error(static_cast<andreev::ErrorCode>(static_cast<int>(s) - 1)) ? 1 : 0;
  return 0;
}

andreev_status andreev_parse_angle(const char* text, double* radians) {
  if (!text || !radians) return invalid("null argument");
  return guarded([&] { *radians = andreev::parse_angle(text).value(); });
}

andreev_status andreev_problem_parse(const char* text, andreev_problem** out) {
  if (!text || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    auto p = std::make_unique<andreev_problem>();
    p->problem = andreev::to_problem(andreev::parse_input(text));
    *out = p.release();
  });
}

andreev_status andreev_problem_load(const char* path, andreev_problem** out) {
  if (!path || !out) return invalid("null argument");
  *out = nullptr;
  std::string text;
  andreev_status s = guarded([&] { text = andreev::read_file(path); });
  if (s != ANDREEV_OK) return s;
  s = andreev_problem_parse(text.c_str(), out);
  if (s != ANDREEV_OK) last_error = std::string(path) + ": " + last_error;
  return s;
}

void andreev_problem_free(andreev_problem* p) { delete p; }

int andreev_problem_face_count(const andreev_problem* p) { return p ? p->problem.complex.face_count() : -1; }
int andreev_problem_edge_count(const andreev_problem* p) { return p ? p->problem.complex.edge_count() : -1; }

andreev_status andreev_problem_set_k(andreev_problem* p, int k) {
  if (!p) return invalid("null problem");
  if (k < 2) return invalid("k must be at least 2");
  p->problem.options.solver.k = k;
  return ANDREEV_OK;
}

andreev_status andreev_problem_set_epsilon(andreev_problem* p, double epsilon) {
  if (!p) return invalid("null problem");
  if (!(epsilon > 0 && epsilon < std::numbers::pi / 2)) return invalid("epsilon must lie in (0, pi/2)");
  p->problem.options.epsilon = epsilon;
  return ANDREEV_OK;
}

andreev_status andreev_problem_set_delta(andreev_problem* p, double delta) {
  if (!p) return invalid("null problem");
  if (!(delta > 0 && delta < std::numbers::pi / 6)) return invalid("delta must lie in (0, pi/6)");
  p->problem.options.delta = delta;
  return ANDREEV_OK;
}

andreev_status andreev_problem_set_seed(andreev_problem* p, uint64_t seed) {
  if (!p) return invalid("null problem");
  p->problem.monte_carlo.seed = seed;
  return ANDREEV_OK;
}

andreev_status andreev_problem_set_samples(andreev_problem* p, long long samples) {
  if (!p) return invalid("null problem");
  if (samples < 2) return invalid("samples must be at least 2");
  p->problem.monte_carlo.samples = samples;
  return ANDREEV_OK;
}

andreev_status andreev_problem_check(andreev_problem* p, int* passes, const char** report) {
  if (!p || !passes) return invalid("null argument");
  return guarded([&] {
    auto r = andreev::check_conditions(p->problem.complex, p->problem.angles);
    auto cls = andreev::classify(p->problem.complex);
    p->text = std::string("class: ") + andreev::kind_name(cls.kind) + "\n" + r.summary();
    if (p->text.back() != '\n') p->text += '\n';
    *passes = r.passes ? 1 : 0;
    if (report) *report = p->text.c_str();
  });
}

andreev_status andreev_build(andreev_problem* p, andreev_realization** out, const char** report) {
  if (!p || !out) return invalid("null argument");
  *out = nullptr;
  andreev::PipelineReport rep;
  andreev_status s = guarded([&] {
    auto r = std::make_unique<andreev_realization>();
    r->r = andreev::construct(p->problem.complex, p->problem.angles, p->problem.options, &rep);
    *out = r.release();
  });
  p->text = render(rep);
  if (report) *report = p->text.c_str();
  return s;
}

void andreev_realization_free(andreev_realization* r) { delete r; }

int andreev_realization_face_count(const andreev_realization* r) { return r ? r->r.face_count() : -1; }

andreev_status andreev_realization_normal(const andreev_realization* r, int face, double out[4]) {
  if (!r || !out) return invalid("null argument");
  if (face < 0 || face >= r->r.face_count()) return invalid("face index out of range");
  const auto& v = r->r.normals[face];
  out[0] = v.x0;
  out[1] = v.x1;
  out[2] = v.x2;
  out[3] = v.x3;
  return ANDREEV_OK;
}

andreev_status andreev_realization_load(const char* path, andreev_realization** out) {
  if (!path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    std::string text = andreev::read_file(path);
    auto r = std::make_unique<andreev_realization>();
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
      r->r = andreev::read_state(text);
    else
      r->r = andreev::realization_from_off(andreev::read_off(text));
    *out = r.release();
  });
}

andreev_status andreev_write_off(const andreev_realization* r, const char* path) {
  if (!r || !path) return invalid("null argument");
  return guarded([&] { andreev::write_file_atomic(path, andreev::write_off(r->r)); });
}

andreev_status andreev_write_generators(const andreev_realization* r, const char* path) {
  if (!r || !path) return invalid("null argument");
  return guarded(
      [&] { andreev::write_file_atomic(path, andreev::write_generators(andreev::reflection_generators(r->r))); });
}

andreev_status andreev_write_state(const andreev_realization* r, const char* path) {
  if (!r || !path) return invalid("null argument");
  return guarded([&] { andreev::write_file_atomic(path, andreev::write_state(r->r)); });
}

andreev_status andreev_deform(const andreev_realization* r, andreev_problem* p, andreev_realization** out) {
  if (!r || !p || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    using namespace andreev;
    const auto& pr = p->problem;
    auto map = isomorphism(pr.complex, r->r.complex);
    if (!map) throw Error(ErrorCode::SemanticError, "the angle document describes a different polyhedron");
    std::vector<LorentzVector> normals(pr.complex.face_count());
    for (int f = 0; f < pr.complex.face_count(); ++f) normals[f] = r->r.normals[(*map)[f]];
    Realization start(pr.complex, std::move(normals));
    auto cond = check_conditions(pr.complex, pr.angles);
    if (!cond.passes) throw Error(ErrorCode::ConditionsFailed, cond.summary());
    auto res = std::make_unique<andreev_realization>();
    // an OFF source carries 6 printed decimals, so its right angles read as
    // pi/2 +- 1e-6
    auto so = pr.options.solver;
    so.start_snap_tol = std::max(so.start_snap_tol, 1e-5);
    res->r = homotopy_deform(start, pr.angles, so);
    auto v = verify_realization(res->r, pr.angles, pr.options.solver);
    if (!v.ok) throw Error(ErrorCode::VerificationFailed, v.issues.empty() ? "deformed polyhedron" : v.issues.front());
    *out = res.release();
  });
}

andreev_status andreev_volume_lambert(double p, double q, double r, andreev_volume* out) {
  if (!out) return invalid("null argument");
  return guarded([&] {
    auto v = andreev::lambert_volume(std::numbers::pi / p, std::numbers::pi / q, std::numbers::pi / r);
    *out = {v.value, v.std_error, v.samples};
  });
}

andreev_status andreev_volume_lobell(int n, andreev_volume* out) {
  if (!out) return invalid("null argument");
  return guarded([&] {
    auto v = andreev::lobell_volume(n);
    *out = {v.value, v.std_error, v.samples};
  });
}

andreev_status andreev_volume_montecarlo(const andreev_realization* r, const andreev_problem* p,
                                         andreev_volume* out) {
  if (!r || !p || !out) return invalid("null argument");
  return guarded([&] {
    auto v = andreev::monte_carlo_volume(r->r, p->problem.monte_carlo);
    *out = {v.value, v.std_error, v.samples};
  });
}

}  // extern "C"
