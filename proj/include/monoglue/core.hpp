#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

// Small fixed-size linear algebra and su(2) field values used everywhere.
//
// su(2) sections are stored as 3-vectors over an orthonormal basis {T_a}.
// The bracket is [u,v] = kappa * (u x v); kappa is a per-state convention:
//   kappa = 1  : profile normalization where the unit hedgehog Higgs tends
//                to m - 1/r at infinity (native closed-form solutions),
//   kappa = 2  : normalization where the unit well carries m - 1/(2r) and
//                abelian flux quantum 2*pi (used by the glued pipeline).

namespace monoglue {

struct Vec3 {
  double v[3]{0, 0, 0};
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) { a[0] += b[0]; a[1] += b[1]; a[2] += b[2]; return a; }
inline Vec3& operator-=(Vec3& a, const Vec3& b) { a[0] -= b[0]; a[1] -= b[1]; a[2] -= b[2]; return a; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

using Su2 = Vec3;

inline Su2 bracket(const Su2& u, const Su2& v, double kappa) { return kappa * cross(u, v); }

// su(2)-valued 1-form: three coordinate components, each an su(2) value.
struct Su2Form {
  Su2 c[3];
  Su2& operator[](int i) { return c[i]; }
  const Su2& operator[](int i) const { return c[i]; }
};

inline Su2Form operator+(const Su2Form& a, const Su2Form& b) {
  Su2Form r; for (int i = 0; i < 3; ++i) r[i] = a[i] + b[i]; return r;
}
inline Su2Form operator-(const Su2Form& a, const Su2Form& b) {
  Su2Form r; for (int i = 0; i < 3; ++i) r[i] = a[i] - b[i]; return r;
}
inline Su2Form operator*(double s, const Su2Form& a) {
  Su2Form r; for (int i = 0; i < 3; ++i) r[i] = s * a[i]; return r;
}

// Section of (Lambda^1 + Lambda^0) x su(2): the linearization variables.
struct Section {
  Su2Form a;
  Su2 phi;
};

inline Section operator+(const Section& x, const Section& y) { return {x.a + y.a, x.phi + y.phi}; }
inline Section operator-(const Section& x, const Section& y) { return {x.a - y.a, x.phi - y.phi}; }
inline Section operator*(double s, const Section& x) { return {s * x.a, s * x.phi}; }

struct Mat3 {
  double m[3][3]{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  double* operator[](int i) { return m[i]; }
  const double* operator[](int i) const { return m[i]; }
  static Mat3 identity() {
    Mat3 I; I[0][0] = I[1][1] = I[2][2] = 1.0; return I;
  }
};

inline Vec3 mul(const Mat3& M, const Vec3& x) {
  Vec3 r;
  for (int i = 0; i < 3; ++i) r[i] = M[i][0] * x[0] + M[i][1] * x[1] + M[i][2] * x[2];
  return r;
}

inline Mat3 mul(const Mat3& A, const Mat3& B) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += A[i][k] * B[k][j];
      r[i][j] = s;
    }
  return r;
}

inline Mat3 transpose(const Mat3& A) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = A[j][i];
  return r;
}

inline double det(const Mat3& g) {
  return g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
       - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
       + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
}

inline Mat3 inverse(const Mat3& g) {
  double d = det(g);
  if (d == 0.0) throw std::runtime_error("singular 3x3 matrix");
  Mat3 r;
  r[0][0] = (g[1][1] * g[2][2] - g[1][2] * g[2][1]) / d;
  r[0][1] = (g[0][2] * g[2][1] - g[0][1] * g[2][2]) / d;
  r[0][2] = (g[0][1] * g[1][2] - g[0][2] * g[1][1]) / d;
  r[1][0] = (g[1][2] * g[2][0] - g[1][0] * g[2][2]) / d;
  r[1][1] = (g[0][0] * g[2][2] - g[0][2] * g[2][0]) / d;
  r[1][2] = (g[0][2] * g[1][0] - g[0][0] * g[1][2]) / d;
  r[2][0] = (g[1][0] * g[2][1] - g[1][1] * g[2][0]) / d;
  r[2][1] = (g[0][1] * g[2][0] - g[0][0] * g[2][1]) / d;
  r[2][2] = (g[0][0] * g[1][1] - g[0][1] * g[1][0]) / d;
  return r;
}

// Rotation about a fixed axis (Rodrigues).
inline Mat3 rotation(const Vec3& axis_unit, double angle) {
  const Vec3& n = axis_unit;
  double c = std::cos(angle), s = std::sin(angle);
  Mat3 R;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R[i][j] = (i == j ? c : 0.0) + (1 - c) * n[i] * n[j];
  R[0][1] -= s * n[2]; R[0][2] += s * n[1];
  R[1][0] += s * n[2]; R[1][2] -= s * n[0];
  R[2][0] -= s * n[1]; R[2][1] += s * n[0];
  return R;
}

// C^2 transition profile: 0 for t<=0, 1 for t>=1, quintic in between.
inline double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
inline double smoothstep5_d(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

// Least-squares fit y ~ a + b*x.
struct LineFit {
  double a = 0, b = 0, rms = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Richardson extrapolation to 0 of f sampled at geometrically shrinking
// arguments; assumes f(eps) = f0 + c1 eps + c2 eps^2 + ...
double richardson_to_zero(const std::vector<double>& eps, const std::vector<double>& val, int order);

// Adaptive Simpson quadrature.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-11);

// Deterministic RNG used for every randomized diagnostic.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  Vec3 unit_vec() {
    Vec3 v{normal(), normal(), normal()};
    double n = norm(v);
    return n > 0 ? (1.0 / n) * v : Vec3{1, 0, 0};
  }
 private:
  std::mt19937_64 eng_;
};

}  // namespace monoglue
