#pragma once

#include <array>
#include <optional>

namespace andreev {

inline constexpr double kLightlikeTol = 1e-8;

struct LorentzVector {
  double x0 = 0, x1 = 0, x2 = 0, x3 = 0;

  constexpr double& operator[](int i) { return i == 0 ? x0 : i == 1 ? x1 : i == 2 ? x2 : x3; }
  constexpr double operator[](int i) const { return i == 0 ? x0 : i == 1 ? x1 : i == 2 ? x2 : x3; }

  friend constexpr LorentzVector operator+(LorentzVector a, LorentzVector b) {
    return {a.x0 + b.x0, a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
  }
  friend constexpr LorentzVector operator-(LorentzVector a, LorentzVector b) {
    return {a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
  }
  friend constexpr LorentzVector operator-(LorentzVector a) { return {-a.x0, -a.x1, -a.x2, -a.x3}; }
  friend constexpr LorentzVector operator*(double s, LorentzVector a) {
    return {s * a.x0, s * a.x1, s * a.x2, s * a.x3};
  }
  bool finite() const;
};

// Row-major 4x4.
struct LorentzMatrix {
  std::array<double, 16> m{};

  static LorentzMatrix identity();
  double& operator()(int r, int c) { return m[4 * r + c]; }
  double operator()(int r, int c) const { return m[4 * r + c]; }
  LorentzVector operator*(const LorentzVector& v) const;
  LorentzMatrix operator*(const LorentzMatrix& o) const;
  LorentzMatrix transpose() const;
  // max |M^T J M - J|
  double form_defect() const;
  double distance(const LorentzMatrix& o) const;  // max abs entry difference
};

enum class VertexKind { Finite, Ideal, Hyperideal };

struct VertexClass {
  VertexKind kind = VertexKind::Finite;
  // Finite: the point; Ideal: a lightlike direction with x0 > 0;
  // Hyperideal: unit spacelike normal of the polar plane, outward.
  LorentzVector vec;
};

double minkowski_inner(const LorentzVector& u, const LorentzVector& v);

// arccos(-<v,w>); throws NonIntersecting if <v,w>^2 >= 1.
double dihedral_angle(const LorentzVector& v, const LorentzVector& w);

// Orthogonal complement of span{v1,v2,v3}. For hyperideal results the sign
// is chosen so that <interior, n> < 0 when an interior point is supplied.
VertexClass triple_intersection(const LorentzVector& v1, const LorentzVector& v2,
                                const LorentzVector& v3,
                                const std::optional<LorentzVector>& interior = std::nullopt,
                                double lightlike_tol = kLightlikeTol);

LorentzMatrix reflection_matrix(const LorentzVector& v);

// A vector z with <z,a> = <z,b> = <z,c> = 0 (cofactors of the 3x4 system
// with J folded in); zero when a, b, c are dependent.
LorentzVector minkowski_cross(const LorentzVector& a, const LorentzVector& b, const LorentzVector& c);

std::array<double, 3> to_projective(const LorentzVector& p);

// Helpers used across modules.
LorentzVector normalize_spacelike(const LorentzVector& v);
LorentzVector normalize_timelike(const LorentzVector& v);  // also flips to x0 > 0
// Isometry taking the timelike unit p to the basepoint (1,0,0,0).
LorentzMatrix boost_to_origin(const LorentzVector& p);
// Orthonormal frame whose columns are (t, s1, s2, s3) in the Minkowski form.
// Returns the matrix F with F e_i = column i.
LorentzMatrix frame_matrix(const LorentzVector& t, const LorentzVector& s1,
                           const LorentzVector& s2, const LorentzVector& s3);
// Inverse of a Lorentz frame matrix: J F^T J.
LorentzMatrix lorentz_inverse(const LorentzMatrix& f);

}  // namespace andreev
