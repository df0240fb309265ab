#include "monoglue/pointops.hpp"

#include <cmath>

namespace monoglue {

namespace {

template <typename T, typename F>
T d4(const F& f, const Vec3& x, int i, double h) {
  Vec3 xp = x, xm = x, xpp = x, xmm = x;
  xp[i] += h; xm[i] -= h; xpp[i] += 2 * h; xmm[i] -= 2 * h;
  T a = f(xp), b = f(xm), c = f(xpp), d = f(xmm);
  return (1.0 / (12.0 * h)) * (8.0 * (a - b) - (c - d));
}

// hodge dual of an su2-valued 2-form given by F[i][j] (i<j used), at metric g
void star_two_form(const Mat3& g, const Su2 F12, const Su2 F13, const Su2 F23, Su2Form& out) {
  // dual vector components (b_23, b_31, b_12) per su2 slot
  double sq = std::sqrt(det(g));
  for (int a = 0; a < 3; ++a) {
    Vec3 b{F23[a], -F13[a], F12[a]};
    Vec3 dn = mul(g, b);
    out[0][a] = dn[0] / sq;
    out[1][a] = dn[1] / sq;
    out[2][a] = dn[2] / sq;
  }
}

}  // namespace

PointOps::PointOps(const ManifoldModel& model, PairEval base, double kappa, double step)
    : model_(&model), base_(std::move(base)), kappa_(kappa), h_(step) {}

Su2Form PointOps::curvature_star(const Vec3& x) const {
  auto Acomp = [&](const Vec3& y) {
    Su2Form A; Su2 P;
    base_(y, A, P);
    return A;
  };
  Su2Form dA[3];
  for (int i = 0; i < 3; ++i) dA[i] = d4<Su2Form>(Acomp, x, i, h_);
  Su2Form A; Su2 P;
  base_(x, A, P);
  Su2 F12 = dA[0][1] - dA[1][0] + bracket(A[0], A[1], kappa_);
  Su2 F13 = dA[0][2] - dA[2][0] + bracket(A[0], A[2], kappa_);
  Su2 F23 = dA[1][2] - dA[2][1] + bracket(A[1], A[2], kappa_);
  Su2Form out;
  star_two_form(model_->metric(x), F12, F13, F23, out);
  return out;
}

Su2Form PointOps::grad_phi(const Vec3& x) const {
  auto Pcomp = [&](const Vec3& y) {
    Su2Form A; Su2 P;
    base_(y, A, P);
    return P;
  };
  Su2Form A; Su2 P;
  base_(x, A, P);
  Su2Form out;
  for (int i = 0; i < 3; ++i) out[i] = d4<Su2>(Pcomp, x, i, h_) + bracket(A[i], P, kappa_);
  return out;
}

Su2Form PointOps::residual(const Vec3& x) const {
  return curvature_star(x) - grad_phi(x);
}

double PointOps::form_norm(const Su2Form& b, const Vec3& x) const {
  Mat3 gi = inverse(model_->metric(x));
  double acc = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += gi[i][j] * dot(b[i], b[j]);
  return std::sqrt(std::max(acc, 0.0));
}

double PointOps::section_norm(const Section& u, const Vec3& x) const {
  double a = form_norm(u.a, x);
  return std::sqrt(a * a + dot(u.phi, u.phi));
}

double PointOps::residual_norm(const Vec3& x) const { return form_norm(residual(x), x); }

double PointOps::energy_density(const Vec3& x) const {
  Su2Form sF = curvature_star(x);   // |F| = |*F|
  Su2Form gp = grad_phi(x);
  double f = form_norm(sF, x), g = form_norm(gp, x);
  return 0.5 * (f * f + g * g);
}

Su2Form PointOps::d2(const SectionEval& u, const Vec3& x) const {
  auto acomp = [&](const Vec3& y) { return u(y).a; };
  auto pcomp = [&](const Vec3& y) { return u(y).phi; };
  Su2Form da[3];
  for (int i = 0; i < 3; ++i) da[i] = d4<Su2Form>(acomp, x, i, h_);
  Su2Form A; Su2 P;
  base_(x, A, P);
  Section uv = u(x);
  Su2 F12 = da[0][1] - da[1][0] + bracket(A[0], uv.a[1], kappa_) - bracket(A[1], uv.a[0], kappa_);
  Su2 F13 = da[0][2] - da[2][0] + bracket(A[0], uv.a[2], kappa_) - bracket(A[2], uv.a[0], kappa_);
  Su2 F23 = da[1][2] - da[2][1] + bracket(A[1], uv.a[2], kappa_) - bracket(A[2], uv.a[1], kappa_);
  Su2Form out;
  star_two_form(model_->metric(x), F12, F13, F23, out);
  Su2Form dphi;
  for (int i = 0; i < 3; ++i) dphi[i] = d4<Su2>(pcomp, x, i, h_) + bracket(A[i], uv.phi, kappa_);
  for (int i = 0; i < 3; ++i) out[i] = out[i] - dphi[i] - bracket(uv.a[i], P, kappa_);
  return out;
}

namespace {
// covariant divergence of an su2-valued 1-form b: (1/sqg) d_i (sqg g^{ij} b_j) + kappa g^{ij}[A_i, b_j]
Su2 div_form(const ManifoldModel& model, const PairEval& base, double kappa, double h,
             const OneFormEval& b, const Vec3& x) {
  auto prod = [&](const Vec3& y) {
    Mat3 g = model.metric(y);
    Mat3 gi = inverse(g);
    double sq = std::sqrt(det(g));
    Su2Form bv = b(y);
    Su2Form out;
    for (int i = 0; i < 3; ++i) {
      Su2 acc{0, 0, 0};
      for (int j = 0; j < 3; ++j) acc += (sq * gi[i][j]) * bv[j];
      out[i] = acc;
    }
    return out;
  };
  Su2 acc{0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    Su2Form dpi = d4<Su2Form>(prod, x, i, h);
    acc += dpi[i];
  }
  Mat3 g = model.metric(x);
  double sq = std::sqrt(det(g));
  acc = (1.0 / sq) * acc;
  Mat3 gi = inverse(g);
  Su2Form A; Su2 P;
  base(x, A, P);
  Su2Form bv = b(x);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += gi[i][j] * bracket(A[i], bv[j], kappa);
  return acc;
}
}  // namespace

Section PointOps::d2_adj(const OneFormEval& b, const Vec3& x) const {
  // d2^* b = (*d_A b + [b, Phi], div_A b)
  Su2Form db[3];
  for (int i = 0; i < 3; ++i) db[i] = d4<Su2Form>(b, x, i, h_);
  Su2Form A; Su2 P;
  base_(x, A, P);
  Su2Form bv = b(x);
  Su2 F12 = db[0][1] - db[1][0] + bracket(A[0], bv[1], kappa_) - bracket(A[1], bv[0], kappa_);
  Su2 F13 = db[0][2] - db[2][0] + bracket(A[0], bv[2], kappa_) - bracket(A[2], bv[0], kappa_);
  Su2 F23 = db[1][2] - db[2][1] + bracket(A[1], bv[2], kappa_) - bracket(A[2], bv[1], kappa_);
  Section out;
  star_two_form(model_->metric(x), F12, F13, F23, out.a);
  for (int i = 0; i < 3; ++i) out.a[i] += bracket(bv[i], P, kappa_);
  out.phi = div_form(*model_, base_, kappa_, h_, b, x);
  return out;
}

Section PointOps::d1(const ScalarSu2Eval& xi, const Vec3& x) const {
  Su2Form A; Su2 P;
  base_(x, A, P);
  Section out;
  Su2 xv = xi(x);
  for (int i = 0; i < 3; ++i) out.a[i] = -1.0 * (d4<Su2>(xi, x, i, h_) + bracket(A[i], xv, kappa_));
  out.phi = -1.0 * bracket(P, xv, kappa_);
  return out;
}

Su2 PointOps::d1_adj(const SectionEval& u, const Vec3& x) const {
  // d1^*(a, phi) = div_A a + [Phi, phi]
  auto aform = [&](const Vec3& y) { return u(y).a; };
  Su2Form A; Su2 P;
  base_(x, A, P);
  Section uv = u(x);
  return div_form(*model_, base_, kappa_, h_, aform, x) + bracket(P, uv.phi, kappa_);
}

Section PointOps::D(const SectionEval& u, const Vec3& x) const {
  Section out;
  out.a = d2(u, x);
  out.phi = d1_adj(u, x);
  return out;
}

Section PointOps::Dstar(const SectionEval& u, const Vec3& x) const {
  // D^*(v1, v0) = (*d_A v1 + [v1, Phi] - nabla v0, div_A v1 - [Phi, v0])
  auto aform = [&](const Vec3& y) { return u(y).a; };
  auto pcomp = [&](const Vec3& y) { return u(y).phi; };
  Su2Form db[3];
  for (int i = 0; i < 3; ++i) db[i] = d4<Su2Form>(aform, x, i, h_);
  Su2Form A; Su2 P;
  base_(x, A, P);
  Section uv = u(x);
  Su2 F12 = db[0][1] - db[1][0] + bracket(A[0], uv.a[1], kappa_) - bracket(A[1], uv.a[0], kappa_);
  Su2 F13 = db[0][2] - db[2][0] + bracket(A[0], uv.a[2], kappa_) - bracket(A[2], uv.a[0], kappa_);
  Su2 F23 = db[1][2] - db[2][1] + bracket(A[1], uv.a[2], kappa_) - bracket(A[2], uv.a[1], kappa_);
  Section out;
  star_two_form(model_->metric(x), F12, F13, F23, out.a);
  for (int i = 0; i < 3; ++i) {
    Su2 dv0 = d4<Su2>(pcomp, x, i, h_) + bracket(A[i], uv.phi, kappa_);
    out.a[i] += bracket(uv.a[i], P, kappa_) - dv0;
  }
  out.phi = div_form(*model_, base_, kappa_, h_, aform, x) - bracket(P, uv.phi, kappa_);
  return out;
}

Section PointOps::DDstar(const SectionEval& u, const Vec3& x) const {
  auto mid = [&](const Vec3& y) { return Dstar(u, y); };
  return D(mid, x);
}

Section PointOps::DstarD(const SectionEval& u, const Vec3& x) const {
  auto mid = [&](const Vec3& y) { return D(u, y); };
  return Dstar(mid, x);
}

Section PointOps::rough_laplacian(const SectionEval& u, const Vec3& x) const {
  // T_{k;i} = (nabla_k a)_i,  S_k = (nabla_k phi); contract with -g^{jk} nabla_j
  GeomSample geo = sample_geometry(*model_, x);
  auto covd = [&](const Vec3& y) {
    // returns 3x3 su2 block (k,i) and the 1x3 su2 scalar-derivative row,
    // packed: rows 0..2 = T_k (as Su2Form over i), row 3 = S (as Su2Form slot 0..2? )
    GeomSample gy = sample_geometry(*model_, y);
    Su2Form A; Su2 P;
    base_(y, A, P);
    auto aform = [&](const Vec3& z) { return u(z).a; };
    auto pcomp = [&](const Vec3& z) { return u(z).phi; };
    Section uv = u(y);
    std::array<Su2Form, 4> out;
    for (int k = 0; k < 3; ++k) {
      Su2Form da = d4<Su2Form>(aform, y, k, h_);
      for (int i = 0; i < 3; ++i) {
        Su2 v = da[i] + bracket(A[k], uv.a[i], kappa_);
        for (int l = 0; l < 3; ++l) v -= gy.gamma[l][k][i] * uv.a[l];
        out[k][i] = v;
      }
    }
    for (int k = 0; k < 3; ++k) out[3][k] = d4<Su2>(pcomp, y, k, h_) + bracket(A[k], uv.phi, kappa_);
    return out;
  };
  std::array<Su2Form, 4> T = covd(x);
  std::array<Su2Form, 4> dT[3];
  for (int j = 0; j < 3; ++j) dT[j] = d4<std::array<Su2Form, 4>>(covd, x, j, h_);
  Su2Form A; Su2 P;
  base_(x, A, P);
  Section out;
  for (int i = 0; i < 3; ++i) out.a[i] = Su2{0, 0, 0};
  out.phi = Su2{0, 0, 0};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      double gjk = geo.g_inv[j][k];
      if (gjk == 0.0) continue;
      // 1-form slot
      for (int i = 0; i < 3; ++i) {
        Su2 v = dT[j][k][i] + bracket(A[j], T[k][i], kappa_);
        for (int l = 0; l < 3; ++l)
          v -= geo.gamma[l][j][k] * T[l][i] + geo.gamma[l][j][i] * T[k][l];
        out.a[i] -= gjk * v;
      }
      // 0-form slot
      Su2 s = dT[j][3][k] + bracket(A[j], T[3][k], kappa_);
      for (int l = 0; l < 3; ++l) s -= geo.gamma[l][j][k] * T[3][l];
      out.phi -= gjk * s;
    }
  return out;
}

namespace {
std::array<Su2Form, 4> operator-(const std::array<Su2Form, 4>& a, const std::array<Su2Form, 4>& b) {
  std::array<Su2Form, 4> r;
  for (int i = 0; i < 4; ++i) r[i] = a[i] - b[i];
  return r;
}
std::array<Su2Form, 4> operator*(double s, const std::array<Su2Form, 4>& a) {
  std::array<Su2Form, 4> r;
  for (int i = 0; i < 4; ++i) r[i] = s * a[i];
  return r;
}
}  // namespace

Section PointOps::bW(const Su2Form& b, const Section& u, const Vec3& x) const {
  // ( *[a ^ b] - [b, phi] , g^{ij} [b_i, a_j] )
  Mat3 g = model_->metric(x);
  Su2 W12 = bracket(u.a[0], b[1], kappa_) - bracket(u.a[1], b[0], kappa_);
  Su2 W13 = bracket(u.a[0], b[2], kappa_) - bracket(u.a[2], b[0], kappa_);
  Su2 W23 = bracket(u.a[1], b[2], kappa_) - bracket(u.a[2], b[1], kappa_);
  Section out;
  star_two_form(g, W12, W13, W23, out.a);
  for (int i = 0; i < 3; ++i) out.a[i] -= bracket(b[i], u.phi, kappa_);
  Mat3 gi = inverse(g);
  out.phi = Su2{0, 0, 0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.phi += gi[i][j] * bracket(b[i], u.a[j], kappa_);
  return out;
}

PointOps::WeitzResult PointOps::weitzenbock(const SectionEval& u, const Vec3& x) const {
  Section lhs1 = DDstar(u, x);
  Section rough = rough_laplacian(u, x);
  Su2Form A; Su2 P;
  base_(x, A, P);
  Section uv = u(x);
  Section mass;
  for (int i = 0; i < 3; ++i)
    mass.a[i] = -1.0 * bracket(bracket(uv.a[i], P, kappa_), P, kappa_);
  mass.phi = -1.0 * bracket(bracket(uv.phi, P, kappa_), P, kappa_);
  GeomSample geo = sample_geometry(*model_, x);
  Section ric;
  for (int i = 0; i < 3; ++i) {
    Su2 v{0, 0, 0};
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) v += (geo.ricci[i][j] * geo.g_inv[j][k]) * uv.a[k];
    ric.a[i] = v;
  }
  ric.phi = Su2{0, 0, 0};
  Su2Form e0 = residual(x);
  Section rhs1 = rough + mass + ric + bW(e0, uv, x);
  Section diff1 = lhs1 - rhs1;
  Section lhs2 = DstarD(u, x);
  Su2Form dP = grad_phi(x);
  Section rhs2 = lhs1 + 2.0 * bW(dP, uv, x);
  Section diff2 = lhs2 - rhs2;
  WeitzResult res;
  res.resid_first = section_norm(diff1, x);
  res.resid_second = section_norm(diff2, x);
  res.scale = section_norm(lhs1, x) + section_norm(rough, x) + 1e-300;
  return res;
}

PairEval gauge_transform(PairEval base, double kappa, const Vec3& axis,
                         std::function<double(const Vec3&)> angle,
                         std::function<Vec3(const Vec3&)> grad_angle) {
  Vec3 n = (1.0 / norm(axis)) * axis;
  return [base = std::move(base), kappa, n, angle = std::move(angle),
          grad = std::move(grad_angle)](const Vec3& x, Su2Form& A, Su2& Phi) {
    Su2Form A0; Su2 P0;
    base(x, A0, P0);
    Mat3 R = rotation(n, angle(x));
    Vec3 da = grad(x);
    Phi = mul(R, P0);
    for (int i = 0; i < 3; ++i) A[i] = mul(R, A0[i]) - (da[i] / kappa) * n;
  };
}

SectionEval gauge_transform_section(SectionEval u, const Vec3& axis,
                                    std::function<double(const Vec3&)> angle) {
  Vec3 n = (1.0 / norm(axis)) * axis;
  return [u = std::move(u), n, angle = std::move(angle)](const Vec3& x) {
    Section s = u(x);
    Mat3 R = rotation(n, angle(x));
    Section out;
    for (int i = 0; i < 3; ++i) out.a[i] = mul(R, s.a[i]);
    out.phi = mul(R, s.phi);
    return out;
  };
}

}  // namespace monoglue
