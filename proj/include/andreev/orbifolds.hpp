#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "andreev/andreev_conditions.hpp"
#include "andreev/combinatorics.hpp"
#include "andreev/lorentz.hpp"
#include "andreev/solver.hpp"

namespace andreev {

// Lobachevsky function, -int_0^x log|2 sin t| dt.
double lobachevsky(double x);

struct VolumeResult {
  double value = 0;
  double std_error = 0;  // zero for closed forms
  long long samples = 0;
  std::string method;
};

// Lambert cube with skew edge angles alpha, beta, gamma in (0, pi/2).
VolumeResult lambert_volume(double alpha, double beta, double gamma);
// Right-angled Lobell polyhedron R_n, n >= 5.
VolumeResult lobell_volume(int n);

// Angles on cube_complex(): the skew edges {Y+,Z+}, {X+,Z-}, {X-,Y-} get
// alpha, beta, gamma and every other edge pi/2 (faces X+ X- Y+ Y- Z+ Z- = 0..5).
AngleAssignment lambert_angles(double alpha, double beta, double gamma);

struct GeneratorSet {
  std::vector<LorentzMatrix> matrices;  // one per face, face order
  AbstractPolyhedron complex;
  AngleAssignment angles;  // measured dihedral angles of the source
};

GeneratorSet reflection_generators(const Realization& p);

struct MonteCarloOptions {
  long long samples = 10'000'000;
  std::uint64_t seed = 1;
  int shards = 16;   // fixed sharding: the estimate depends on seed and samples only
  int threads = 0;   // 0: hardware concurrency
};

// Throws NonCompact if a vertex is not finite.
VolumeResult monte_carlo_volume(const Realization& p, const MonteCarloOptions& opts = {});

}  // namespace andreev
