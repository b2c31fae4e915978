// Command-line front end; talks to the library through the C API only.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <string>

#include "andreev/andreev_c.h"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;
constexpr int kNumericalError = 3;

struct ProblemDeleter {
  void operator()(andreev_problem* p) const { andreev_problem_free(p); }
};
struct RealizationDeleter {
  void operator()(andreev_realization* r) const { andreev_realization_free(r); }
};
using ProblemPtr = std::unique_ptr<andreev_problem, ProblemDeleter>;
using RealizationPtr = std::unique_ptr<andreev_realization, RealizationDeleter>;

// Thrown after the message has been printed; carries the exit code.
struct Exit {
  int code;
};

void check(andreev_status s) {
  if (s == ANDREEV_OK) return;
  std::fprintf(stderr, "error: %s\n", andreev_last_error());
  throw Exit{andreev_status_is_input_error(s) ? kInputError : kNumericalError};
}

ProblemPtr load_problem(const std::string& path) {
  andreev_problem* p = nullptr;
  check(andreev_problem_load(path.c_str(), &p));
  return ProblemPtr(p);
}

double angle(const std::string& text) {
  double v = 0;
  check(andreev_parse_angle(text.c_str(), &v));
  return v;
}

struct PipelineFlags {
  std::optional<int> k;
  std::optional<std::string> epsilon, delta;
  std::optional<uint64_t> seed;
  std::optional<long long> samples;

  void add(CLI::App* app, bool monte_carlo) {
    app->add_option("--k", k, "homotopy steps per leg")->check(CLI::Range(2, 1000000));
    app->add_option("--epsilon", epsilon, "squeeze angle for Whitehead moves (e.g. pi/45)");
    app->add_option("--delta", delta, "truncation margin (e.g. pi/20)");
    app->add_option("--seed", seed, "Monte Carlo seed");
    if (monte_carlo) app->add_option("--samples", samples, "Monte Carlo sample count")->check(CLI::Range(2LL, 1LL << 40));
  }
  void apply(andreev_problem* p) const {
    if (k) check(andreev_problem_set_k(p, *k));
    if (epsilon) check(andreev_problem_set_epsilon(p, angle(*epsilon)));
    if (delta) check(andreev_problem_set_delta(p, angle(*delta)));
    if (seed) check(andreev_problem_set_seed(p, *seed));
    if (samples) check(andreev_problem_set_samples(p, *samples));
  }
};

RealizationPtr build(andreev_problem* p, const std::optional<std::string>& report_path) {
  andreev_realization* r = nullptr;
  const char* report = nullptr;
  andreev_status s = andreev_build(p, &r, &report);
  if (report_path) {
    // the report is written even on failure: it records how far the pipeline got
    std::string path = *report_path + ".tmp";
    {
      std::ofstream out(path, std::ios::trunc);
      out << (report ? report : "");
      if (s != ANDREEV_OK) out << "failed: " << andreev_last_error() << "\n";
    }
    std::rename(path.c_str(), report_path->c_str());
  }
  check(s);
  return RealizationPtr(r);
}

void print_volume(const andreev_volume& v) {
  if (v.samples > 0)
    std::printf("%.10f +- %.10f (%lld samples)\n", v.value, v.std_error, v.samples);
  else
    std::printf("%.10f\n", v.value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct compact hyperbolic polyhedra with prescribed non-obtuse dihedral angles"};
  app.require_subcommand(1);

  std::string input;
  auto* check_cmd = app.add_subcommand("check", "report the Andreev conditions for an input document");
  check_cmd->add_option("input", input, "input document")->required();

  std::string off;
  std::optional<std::string> generators, report, state;
  PipelineFlags build_flags;
  auto* build_cmd = app.add_subcommand("build", "construct the polyhedron and write it as OFF");
  build_cmd->add_option("input", input, "input document")->required();
  build_cmd->add_option("--off", off, "OFF output path")->required();
  build_cmd->add_option("--generators", generators, "reflection generators output path");
  build_cmd->add_option("--report", report, "pipeline report output path");
  build_cmd->add_option("--state", state, "full-precision state output path");
  build_flags.add(build_cmd, false);

  std::string source, angles;
  PipelineFlags deform_flags;
  auto* deform_cmd = app.add_subcommand("deform", "deform an existing polyhedron to new angles");
  deform_cmd->add_option("source", source, "OFF or state file")->required();
  deform_cmd->add_option("--angles", angles, "input document with the target angles")->required();
  deform_cmd->add_option("--off", off, "OFF output path")->required();
  deform_cmd->add_option("--state", state, "full-precision state output path");
  deform_flags.add(deform_cmd, false);

  auto* volume_cmd = app.add_subcommand("volume", "hyperbolic volumes");
  volume_cmd->require_subcommand(1);
  double lp = 0, lq = 0, lr = 0;
  auto* lambert_cmd = volume_cmd->add_subcommand("lambert", "Lambert cube with angles pi/p, pi/q, pi/r");
  lambert_cmd->add_option("p", lp)->required();
  lambert_cmd->add_option("q", lq)->required();
  lambert_cmd->add_option("r", lr)->required();
  int lobell_n = 0;
  auto* lobell_cmd = volume_cmd->add_subcommand("lobell", "right-angled Lobell polyhedron R_n");
  lobell_cmd->add_option("n", lobell_n)->required();
  PipelineFlags mc_flags;
  auto* mc_cmd = volume_cmd->add_subcommand("montecarlo", "Monte Carlo volume of a constructed polyhedron");
  mc_cmd->add_option("input", input, "input document")->required();
  mc_flags.add(mc_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*check_cmd) {
      auto p = load_problem(input);
      int passes = 0;
      const char* text = nullptr;
      check(andreev_problem_check(p.get(), &passes, &text));
      std::fputs(text, stdout);
      return passes ? kOk : kCheckFailed;
    }
    if (*build_cmd) {
      auto p = load_problem(input);
      build_flags.apply(p.get());
      auto r = build(p.get(), report);
      // generators first: a NotSubmultiple failure leaves no outputs behind
      if (generators) check(andreev_write_generators(r.get(), generators->c_str()));
      check(andreev_write_off(r.get(), off.c_str()));
      if (state) check(andreev_write_state(r.get(), state->c_str()));
      return kOk;
    }
    if (*deform_cmd) {
      andreev_realization* raw = nullptr;
      check(andreev_realization_load(source.c_str(), &raw));
      RealizationPtr start(raw);
      auto p = load_problem(angles);
      deform_flags.apply(p.get());
      andreev_realization* out = nullptr;
      check(andreev_deform(start.get(), p.get(), &out));
      RealizationPtr r(out);
      check(andreev_write_off(r.get(), off.c_str()));
      if (state) check(andreev_write_state(r.get(), state->c_str()));
      return kOk;
    }
    andreev_volume v{};
    if (*lambert_cmd) {
      check(andreev_volume_lambert(lp, lq, lr, &v));
    } else if (*lobell_cmd) {
      check(andreev_volume_lobell(lobell_n, &v));
    } else {
      auto p = load_problem(input);
      mc_flags.apply(p.get());
      auto r = build(p.get(), std::nullopt);
      check(andreev_volume_montecarlo(r.get(), p.get(), &v));
    }
    print_volume(v);
    return kOk;
  } catch (const Exit& e) {
    return e.code;
  }
}
