#include "andreev/lorentz.hpp"

#include <algorithm>
#include <cmath>

#include "andreev/error.hpp"

namespace andreev {

namespace {

double det3(double a, double b, double c, double d, double e, double f, double g, double h,
            double i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

double euclid_norm(const LorentzVector& v) {
  return std::sqrt(v.x0 * v.x0 + v.x1 * v.x1 + v.x2 * v.x2 + v.x3 * v.x3);
}

}  // namespace

bool LorentzVector::finite() const {
  return std::isfinite(x0) && std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3);
}

LorentzMatrix LorentzMatrix::identity() {
  LorentzMatrix r;
  for (int i = 0; i < 4; ++i) r(i, i) = 1.0;
  return r;
}

LorentzVector LorentzMatrix::operator*(const LorentzVector& v) const {
  LorentzVector r;
  for (int i = 0; i < 4; ++i) {
    double s = 0;
    for (int j = 0; j < 4; ++j) s += (*this)(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

LorentzMatrix LorentzMatrix::operator*(const LorentzMatrix& o) const {
  LorentzMatrix r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0;
      for (int k = 0; k < 4; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

LorentzMatrix LorentzMatrix::transpose() const {
  LorentzMatrix r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = (*this)(j, i);
  return r;
}

double LorentzMatrix::form_defect() const {
  // columns must be Minkowski-orthonormal
  double worst = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      LorentzVector ca{(*this)(0, a), (*this)(1, a), (*this)(2, a), (*this)(3, a)};
      LorentzVector cb{(*this)(0, b), (*this)(1, b), (*this)(2, b), (*this)(3, b)};
      double want = a != b ? 0.0 : (a == 0 ? -1.0 : 1.0);
      worst = std::max(worst, std::abs(minkowski_inner(ca, cb) - want));
    }
  return worst;
}

double LorentzMatrix::distance(const LorentzMatrix& o) const {
  double worst = 0;
  for (int i = 0; i < 16; ++i) worst = std::max(worst, std::abs(m[i] - o.m[i]));
  return worst;
}

double minkowski_inner(const LorentzVector& u, const LorentzVector& v) {
  return -u.x0 * v.x0 + u.x1 * v.x1 + u.x2 * v.x2 + u.x3 * v.x3;
}

double dihedral_angle(const LorentzVector& v, const LorentzVector& w) {
  double c = minkowski_inner(v, w);
  if (!(c * c < 1.0)) throw Error(ErrorCode::NonIntersecting, "planes do not meet (<v,w>^2 >= 1)");
  return std::acos(-c);
}

VertexClass triple_intersection(const LorentzVector& v1, const LorentzVector& v2,
                                const LorentzVector& v3,
                                const std::optional<LorentzVector>& interior,
                                double lightlike_tol) {
  LorentzVector z = minkowski_cross(v1, v2, v3);
  double scale = euclid_norm(v1) * euclid_norm(v2) * euclid_norm(v3);
  double zn = euclid_norm(z);
  if (!(zn > 1e-12 * scale)) throw Error(ErrorCode::DegenerateTriple, "normals are linearly dependent");
  z = (1.0 / zn) * z;
  double s = minkowski_inner(z, z);
  VertexClass out;
  if (s < -lightlike_tol) {
    out.kind = VertexKind::Finite;
    out.vec = normalize_timelike(z);
  } else if (s > lightlike_tol) {
    out.kind = VertexKind::Hyperideal;
    LorentzVector n = normalize_spacelike(z);
    if (interior) {
      if (minkowski_inner(*interior, n) > 0) n = -n;
    } else if (n.x0 < 0) {
      n = -n;
    }
    out.vec = n;
  } else {
    out.kind = VertexKind::Ideal;
    out.vec = z.x0 < 0 ? -z : z;
  }
  return out;
}

LorentzVector minkowski_cross(const LorentzVector& v1, const LorentzVector& v2, const LorentzVector& v3) {
  // rows a_i = J v_i; z spans the kernel of A, i.e. <z, v_i> = 0
  double a[3][4];
  const LorentzVector* vs[3] = {&v1, &v2, &v3};
  for (int i = 0; i < 3; ++i) {
    a[i][0] = -vs[i]->x0;
    a[i][1] = vs[i]->x1;
    a[i][2] = vs[i]->x2;
    a[i][3] = vs[i]->x3;
  }
  LorentzVector z;
  for (int k = 0; k < 4; ++k) {
    int c[3], n = 0;
    for (int j = 0; j < 4; ++j)
      if (j != k) c[n++] = j;
    double d = det3(a[0][c[0]], a[0][c[1]], a[0][c[2]], a[1][c[0]], a[1][c[1]], a[1][c[2]],
                    a[2][c[0]], a[2][c[1]], a[2][c[2]]);
    z[k] = (k % 2 == 0) ? d : -d;
  }
  return z;
}

LorentzMatrix reflection_matrix(const LorentzVector& v) {
  double s = minkowski_inner(v, v);
  if (!(std::abs(s - 1.0) <= 1e-8)) throw Error(ErrorCode::NotSpacelike, "reflection needs a unit spacelike normal");
  // M x = x - 2 <x,v> v ; <x,v> = sum_j x_j (Jv)_j
  LorentzVector jv{-v.x0, v.x1, v.x2, v.x3};
  LorentzMatrix m = LorentzMatrix::identity();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) -= 2.0 * v[i] * jv[j];
  return m;
}

std::array<double, 3> to_projective(const LorentzVector& p) {
  return {p.x1 / p.x0, p.x2 / p.x0, p.x3 / p.x0};
}

LorentzVector normalize_spacelike(const LorentzVector& v) {
  double s = minkowski_inner(v, v);
  if (!(s > 0)) throw Error(ErrorCode::NotSpacelike, "vector is not spacelike");
  return (1.0 / std::sqrt(s)) * v;
}

LorentzVector normalize_timelike(const LorentzVector& v) {
  double s = minkowski_inner(v, v);
  if (!(s < 0)) throw Error(ErrorCode::NotSpacelike, "vector is not timelike");
  LorentzVector r = (1.0 / std::sqrt(-s)) * v;
  return r.x0 < 0 ? -r : r;
}

LorentzMatrix boost_to_origin(const LorentzVector& p) {
  double g = p.x0;
  double q[3] = {p.x1, p.x2, p.x3};
  LorentzMatrix b;
  b(0, 0) = g;
  for (int i = 0; i < 3; ++i) {
    b(0, i + 1) = -q[i];
    b(i + 1, 0) = -q[i];
    for (int j = 0; j < 3; ++j) b(i + 1, j + 1) = (i == j ? 1.0 : 0.0) + q[i] * q[j] / (1.0 + g);
  }
  return b;
}

LorentzMatrix frame_matrix(const LorentzVector& t, const LorentzVector& s1,
                           const LorentzVector& s2, const LorentzVector& s3) {
  LorentzMatrix f;
  const LorentzVector* cols[4] = {&t, &s1, &s2, &s3};
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) f(r, c) = (*cols[c])[r];
  return f;
}

LorentzMatrix lorentz_inverse(const LorentzMatrix& f) {
  LorentzMatrix r = f.transpose();
  // J F^T J: negate row 0 and column 0 (the corner twice)
  for (int i = 0; i < 4; ++i) {
    r(0, i) = -r(0, i);
    r(i, 0) = -r(i, 0);
  }
  return r;
}

}  // namespace andreev
