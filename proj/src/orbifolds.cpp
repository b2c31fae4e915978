#include "andreev/orbifolds.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "andreev/error.hpp"

namespace andreev {

namespace {

constexpr double kPi = std::numbers::pi;

// c_k = |B_2k| / (2k (2k+1)!) = 2 zeta(2k) / ((2 pi)^2k 2k (2k+1))
struct ClausenCoefficients {
  std::array<double, 40> c{};
  ClausenCoefficients() {
    for (int k = 1; k <= static_cast<int>(c.size()); ++k) {
      const double s = 2.0 * k;
      // zeta(s) by direct sum plus an Euler-Maclaurin tail
      const int n = 64;
      double z = 0;
      for (int j = n - 1; j >= 1; --j) z += std::pow(j, -s);
      z += std::pow(n, 1 - s) / (s - 1) + 0.5 * std::pow(n, -s) + s / 12.0 * std::pow(n, -s - 1) -
           s * (s + 1) * (s + 2) / 720.0 * std::pow(n, -s - 3);
      c[k - 1] = 2 * z / (std::pow(2 * kPi, s) * s * (s + 1));
    }
  }
};

// Cl2(t) for |t| <= pi: t - t log|t| + sum_k c_k t^(2k+1)
double clausen(double t) {
  static const ClausenCoefficients coeffs;
  if (t == 0) return 0;
  double out = t - t * std::log(std::abs(t));
  const double t2 = t * t;
  double pw = t * t2;
  for (double ck : coeffs.c) {
    double term = ck * pw;
    out += term;
    if (std::abs(term) < 1e-18 * std::abs(out)) break;
    pw *= t2;
  }
  return out;
}

double delta(double eta, double xi) { return lobachevsky(eta + xi) - lobachevsky(eta - xi); }

}  // namespace

double lobachevsky(double x) {
  // Lambda(x) = Cl2(2x) / 2, with 2x reduced to [-pi, pi]
  double t = std::remainder(2 * x, 2 * kPi);
  return 0.5 * clausen(t);
}

VolumeResult lambert_volume(double alpha, double beta, double gamma) {
  for (double a : {alpha, beta, gamma})
    if (!(a > 0 && a < kPi / 2)) throw Error(ErrorCode::BadAngleRange, "Lambert cube angles must lie in (0, pi/2)");
  const double l = std::tan(alpha), m = std::tan(beta), n = std::tan(gamma);
  const double p = (l * l + m * m + n * n + 1) / 2;
  const double theta = std::atan(std::sqrt(p + std::sqrt(p * p + l * l * m * m * n * n)));
  VolumeResult r;
  r.value = 0.25 * (delta(alpha, theta) + delta(beta, theta) + delta(gamma, theta) - 2 * delta(kPi / 2, theta) -
                    delta(0, theta));
  r.method = "lambert closed form";
  return r;
}

VolumeResult lobell_volume(int n) {
  if (n < 5) throw Error(ErrorCode::BadN, "Lobell polyhedron needs n >= 5");
  const double q = kPi / n;
  const double theta = kPi / 2 - std::acos(1 / (2 * std::cos(q)));
  VolumeResult r;
  r.value = n / 2.0 *
            (2 * lobachevsky(theta) + lobachevsky(theta + q) + lobachevsky(theta - q) -
             lobachevsky(2 * theta + kPi / 2));
  r.method = "lobell closed form";
  return r;
}

AngleAssignment lambert_angles(double alpha, double beta, double gamma) {
  auto a = AngleAssignment::uniform(cube_complex(), kPi / 2);
  a.set(Edge(2, 4), alpha);
  a.set(Edge(0, 5), beta);
  a.set(Edge(1, 3), gamma);
  return a;
}

GeneratorSet reflection_generators(const Realization& p) {
  GeneratorSet g;
  g.complex = p.complex;
  g.angles = extract_angles(p);
  for (const auto& v : p.normals) g.matrices.push_back(reflection_matrix(v));
  return g;
}

VolumeResult monte_carlo_volume(const Realization& p, const MonteCarloOptions& opts) {
  if (opts.samples < 2) throw Error(ErrorCode::SemanticError, "need at least two samples");
  if (!p.compact()) throw Error(ErrorCode::NonCompact, "Monte Carlo volume needs a compact realization");
  // recenter at the vertex centroid: the box gets tighter and the weight tamer
  LorentzVector centroid;
  for (const auto& v : p.vertices) centroid = centroid + v.vec;
  LorentzMatrix b = boost_to_origin(normalize_timelike(centroid));
  std::vector<LorentzVector> normals = apply_isometry(b, p.normals);
  std::array<double, 3> lo{1, 1, 1}, hi{-1, -1, -1};
  for (const auto& v : p.vertices) {
    auto k = to_projective(b * v.vec);
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], k[i]);
      hi[i] = std::max(hi[i], k[i]);
    }
  }
  const double box = (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);

  const int shards = std::max(1, opts.shards);
  std::vector<double> sum(shards, 0), sum2(shards, 0);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int s = next++; s < shards; s = next++) {
      long long count = opts.samples / shards + (s < opts.samples % shards ? 1 : 0);
      std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                        static_cast<std::uint32_t>(s)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> ux(lo[0], hi[0]), uy(lo[1], hi[1]), uz(lo[2], hi[2]);
      double s1 = 0, s2 = 0;
      for (long long i = 0; i < count; ++i) {
        double x = ux(rng), y = uy(rng), z = uz(rng);
        bool inside = true;
        // Klein point (1,x,y,z) lies in H_v iff -v0 + v1 x + v2 y + v3 z <= 0
        for (const auto& v : normals)
          if (-v.x0 + v.x1 * x + v.x2 * y + v.x3 * z > 0) {
            inside = false;
            break;
          }
        if (!inside) continue;
        double r2 = x * x + y * y + z * z;
        double w = 1 / ((1 - r2) * (1 - r2));
        s1 += w;
        s2 += w * w;
      }
      sum[s] = s1;
      sum2[s] = s2;
    }
  };
  int threads = opts.threads > 0 ? opts.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, shards);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  double s1 = 0, s2 = 0;
  for (int s = 0; s < shards; ++s) {
    s1 += sum[s];
    s2 += sum2[s];
  }
  const double n = static_cast<double>(opts.samples);
  const double mean = s1 / n;
  const double var = std::max(0.0, (s2 / n - mean * mean) * n / (n - 1));
  VolumeResult r;
  r.value = box * mean;
  r.std_error = box * std::sqrt(var / n);
  r.samples = opts.samples;
  r.method = "monte carlo";
  return r;
}

}  // namespace andreev
