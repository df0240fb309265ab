#include "monoglue/radial.hpp"

#include <algorithm>
#include <cmath>

namespace monoglue {

RadialBackground RadialBackground::glued(const ManifoldModel& model, const GlueParams& params,
                                         const DiracData& dirac) {
  if (!model.spherically_symmetric())
    throw std::invalid_argument("radial backend needs a spherically symmetric model");
  if (params.charges.points.size() != 1 || norm(params.charges.points[0]) != 0.0)
    throw std::invalid_argument("radial backend glues a single well at the apex");
  if (!params.prepared) throw std::logic_error("GlueParams::prepare was not called");
  params.validate();
  if (!dirac.radial) throw std::invalid_argument("radial gluing needs the radial abelian solve");
  RadialBackground bg;
  bg.kind_ = RadialKind::Glued;
  bg.model_ = model;
  bg.dirac_ = dirac.radial;
  bg.kappa_ = 2.0;
  bg.lambda_ = params.lambda[0];
  bg.m0_ = params.m0;
  bg.eps_in_ = params.eps_in[0];
  bg.eps_out_ = params.eps_out[0];
  return bg;
}

RadialBackground RadialBackground::exact_bps(double lambda, double kappa) {
  RadialBackground bg;
  bg.kind_ = RadialKind::ExactBps;
  bg.model_ = ManifoldModel::euclidean();
  bg.kappa_ = kappa;
  bg.lambda_ = lambda;
  bg.m0_ = lambda;
  bg.eps_in_ = 1.0 / std::sqrt(lambda);
  bg.eps_out_ = 2.0 / std::sqrt(lambda);
  return bg;
}

RadialBackground RadialBackground::dirac_pair(const ManifoldModel& model, double mass) {
  RadialBackground bg;
  bg.kind_ = RadialKind::DiracPair;
  bg.model_ = model;
  bg.dirac_ = std::make_shared<RadialHarmonic>(model, 1, mass);
  bg.kappa_ = 2.0;
  bg.lambda_ = mass;
  bg.m0_ = mass;
  bg.eps_in_ = 1.0 / std::sqrt(mass);
  bg.eps_out_ = 2.0 / std::sqrt(mass);
  return bg;
}

double RadialBackground::R_of_s(double s) const {
  if (!dirac_) return s;
  return dirac_->R_of_s(s);
}
double RadialBackground::dR_of_s(double s) const {
  if (!dirac_) return 1.0;
  return dirac_->dR_of_s(s);
}
double RadialBackground::s_of_r(double r) const { return dirac_ ? dirac_->s_of_r(r) : r; }
double RadialBackground::r_of_s(double s) const { return dirac_ ? dirac_->r_of_s(s) : s; }

void RadialBackground::profiles(double s, double& h, double& dh, double& w, double& dw) const {
  switch (kind_) {
    case RadialKind::ExactBps: {
      BpsProfiles p = bps_profiles(lambda_, s, kappa_);
      h = p.h; dh = p.dh; w = p.w; dw = p.dw;
      return;
    }
    case RadialKind::DiracPair: {
      double r = dirac_->r_of_s(s);
      double R = dirac_->R_of_s(s);
      h = dirac_->phi_r(r);
      dh = 0.5 * dirac_->charge() / (R * R);  // d phi/ds = (k/2)/R^2
      w = 0.0; dw = 0.0;
      return;
    }
    case RadialKind::Glued: {
      double r = dirac_->r_of_s(s);
      double R = dirac_->R_of_s(s);
      double phi = dirac_->phi_r(r);
      double dphi = 0.5 / (R * R);
      BpsProfiles p = bps_profiles(lambda_, s, kappa_);
      double chi = cutoff_chi(s, eps_in_, eps_out_);
      double dchi = cutoff_chi_d(s, eps_in_, eps_out_);
      h = (1.0 - chi) * phi + chi * p.h;
      dh = -dchi * phi + (1.0 - chi) * dphi + dchi * p.h + chi * p.dh;
      w = chi * p.w;
      dw = dchi * p.w + chi * p.dw;
      return;
    }
  }
  throw std::logic_error("unknown radial kind");
}

void RadialBackground::error_profiles(double s, double& e1, double& e2) const {
  double h, dh, w, dw;
  profiles(s, h, dh, w, dw);
  double R = R_of_s(s);
  e1 = dh - (1.0 - w * w) / (kappa_ * R * R);
  e2 = (dw + kappa_ * h * w) / (kappa_ * R);
}

RadialGrid RadialGrid::make(double s_min, double s_max, int n) {
  RadialGrid g;
  g.s.resize(n);
  double u0 = std::log(s_min), u1 = std::log(s_max);
  g.du = (u1 - u0) / (n - 1);
  for (int i = 0; i < n; ++i) g.s[i] = std::exp(u0 + i * g.du);
  return g;
}

void Csr::mul(const double* x, double* y) const {
  for (int r = 0; r < rows; ++r) {
    double acc = 0;
    for (int k = ptr[r]; k < ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
    y[r] = acc;
  }
}

void Csr::mul_t(const double* x, double* y) const {
  std::fill(y, y + cols, 0.0);
  for (int r = 0; r < rows; ++r)
    for (int k = ptr[r]; k < ptr[r + 1]; ++k) y[col[k]] += val[k] * x[r];
}

double WeightedNormSpec::weight(int j, double s, double rho) const {
  double far_exp = j - beta - 1.5;
  double w_ball = std::pow(m0, j - 2.0);
  if (s <= eps_out) return w_ball;
  if (s <= 1.0) {
    // log-linear between (eps_out, m0^{j-2}) and (1, 1)
    double a = std::log(s / eps_out) / std::log(1.0 / eps_out);
    return std::exp((1.0 - a) * std::log(w_ball));
  }
  if (rho <= core_radius) return 1.0;
  if (rho <= 2.0 * core_radius) {
    double a = std::log(rho / core_radius) / std::log(2.0);
    return std::exp(a * far_exp * std::log(2.0 * core_radius));
  }
  return std::pow(rho, far_exp);
}

RadialOperator::RadialOperator(std::shared_ptr<const RadialBackground> bg, RadialGrid grid,
                               double beta)
    : bg_(std::move(bg)), grid_(std::move(grid)) {
  spec_.beta = beta;
  spec_.m0 = bg_->m0();
  spec_.eps_out = bg_->eps_out();
  spec_.core_radius = std::max(2.0, bg_->model().compact_core_radius);
  build();
}

namespace {
// 4th-order differentiation stencil rows in the log variable
void d_stencil(int j, int n, int* cols, double* wts) {
  static const double c_int[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  static const double c_l0[5] = {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12};
  static const double c_l1[5] = {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12};
  if (j >= 2 && j <= n - 3) {
    for (int m = 0; m < 5; ++m) { cols[m] = j - 2 + m; wts[m] = c_int[m]; }
  } else if (j == 0) {
    for (int m = 0; m < 5; ++m) { cols[m] = m; wts[m] = c_l0[m]; }
  } else if (j == 1) {
    for (int m = 0; m < 5; ++m) { cols[m] = m; wts[m] = c_l1[m]; }
  } else if (j == n - 1) {
    for (int m = 0; m < 5; ++m) { cols[m] = n - 1 - m; wts[m] = -c_l0[m]; }
  } else {  // j == n-2
    for (int m = 0; m < 5; ++m) { cols[m] = n - 1 - m; wts[m] = -c_l1[m]; }
  }
}
}  // namespace

void RadialOperator::build() {
  int n = grid_.n();
  h_.resize(n); w_.resize(n); R_.resize(n); dR_.resize(n); rho_.resize(n);
  for (int j = 0; j < n; ++j) {
    double h, dh, w, dw;
    bg_->profiles(grid_.s[j], h, dh, w, dw);
    h_[j] = h; w_[j] = w;
    R_[j] = bg_->R_of_s(grid_.s[j]);
    dR_[j] = bg_->dR_of_s(grid_.s[j]);
    double r = bg_->r_of_s(grid_.s[j]);
    rho_[j] = std::sqrt(1.0 + r * r);
  }
  quad_.resize(n);
  for (int j = 0; j < n; ++j) {
    double frac = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    quad_[j] = 4.0 * M_PI * R_[j] * R_[j] * grid_.s[j] * grid_.du * frac;
  }
  // assemble d2 in CSR: rows [g1 | gq | gt], cols [p | q | t | f]
  double kap = bg_->kappa();
  d2_.rows = 3 * n;
  d2_.cols = 4 * n;
  d2_.ptr.assign(3 * n + 1, 0);
  std::vector<std::pair<int, double>> row;
  d2_.col.clear();
  d2_.val.clear();
  auto push_row = [&](int r, std::vector<std::pair<int, double>>& entries) {
    std::sort(entries.begin(), entries.end());
    for (auto& e : entries) { d2_.col.push_back(e.first); d2_.val.push_back(e.second); }
    d2_.ptr[r + 1] = int(d2_.col.size());
    entries.clear();
  };
  int cols5[5];
  double wts5[5];
  for (int j = 0; j < n; ++j) {  // g1 = -f' + (2w/R) t
    d_stencil(j, n, cols5, wts5);
    for (int m = 0; m < 5; ++m)
      row.push_back({3 * n + cols5[m], -wts5[m] / (grid_.du * grid_.s[j])});
    row.push_back({2 * n + j, 2.0 * w_[j] / R_[j]});
    push_row(j, row);
  }
  for (int j = 0; j < n; ++j) {  // gq = t' + (kappa h + R'/R) t - (w/R) f
    d_stencil(j, n, cols5, wts5);
    for (int m = 0; m < 5; ++m)
      row.push_back({2 * n + cols5[m], wts5[m] / (grid_.du * grid_.s[j])});
    row.push_back({2 * n + j, kap * h_[j] + dR_[j] / R_[j]});
    row.push_back({3 * n + j, -w_[j] / R_[j]});
    push_row(n + j, row);
  }
  for (int j = 0; j < n; ++j) {  // gt = -q' - (kappa h + R'/R) q + (w/R) p
    d_stencil(j, n, cols5, wts5);
    for (int m = 0; m < 5; ++m)
      row.push_back({n + cols5[m], -wts5[m] / (grid_.du * grid_.s[j])});
    row.push_back({n + j, -(kap * h_[j] + dR_[j] / R_[j])});
    row.push_back({j, w_[j] / R_[j]});
    push_row(2 * n + j, row);
  }
  // merge duplicate column entries produced above (t appears twice in gq, etc.)
  // (sorting per row makes duplicates adjacent)
  {
    Csr c;
    c.rows = d2_.rows; c.cols = d2_.cols;
    c.ptr.assign(d2_.rows + 1, 0);
    for (int r = 0; r < d2_.rows; ++r) {
      int last_col = -1;
      for (int k = d2_.ptr[r]; k < d2_.ptr[r + 1]; ++k) {
        if (d2_.col[k] == last_col) c.val.back() += d2_.val[k];
        else { c.col.push_back(d2_.col[k]); c.val.push_back(d2_.val[k]); last_col = d2_.col[k]; }
      }
      c.ptr[r + 1] = int(c.col.size());
    }
    d2_ = std::move(c);
  }
  // weighted quadrature diagonals
  double kap2 = kap;
  (void)kap2;
  mv_.resize(4 * n);
  mw_.resize(3 * n);
  WeightedNormSpec sw = spec_;
  sw.beta = spec_.beta - 1.0;
  for (int j = 0; j < n; ++j) {
    double s = grid_.s[j];
    double w0 = spec_.weight(0, s, rho_[j]);
    bool inside = s <= 1.0;
    double wp = inside ? w0 * w0 : w0 * w0;         // parallel always weighted
    double wq = inside ? w0 * w0 : 1.0;             // transverse unweighted outside
    mv_[j] = quad_[j] * wp;                          // p
    mv_[n + j] = 2.0 * quad_[j] * wq;                // q
    mv_[2 * n + j] = 2.0 * quad_[j] * wq;            // t
    mv_[3 * n + j] = quad_[j] * wp;                  // f
    double v0 = sw.weight(0, s, rho_[j]);
    double vp = v0 * v0;
    double vq = inside ? v0 * v0 : 1.0;
    mw_[j] = quad_[j] * vp;                          // g1
    mw_[n + j] = 2.0 * quad_[j] * vq;                // gq
    mw_[2 * n + j] = 2.0 * quad_[j] * vq;            // gt
  }
}

RadialOneForm RadialOperator::d2(const RadialSection& u) const {
  int n = grid_.n();
  std::vector<double> x(4 * n), y(3 * n);
  std::copy(u.p.begin(), u.p.end(), x.begin());
  std::copy(u.q.begin(), u.q.end(), x.begin() + n);
  std::copy(u.t.begin(), u.t.end(), x.begin() + 2 * n);
  std::copy(u.f.begin(), u.f.end(), x.begin() + 3 * n);
  d2_.mul(x.data(), y.data());
  RadialOneForm g;
  g.g1.assign(y.begin(), y.begin() + n);
  g.gq.assign(y.begin() + n, y.begin() + 2 * n);
  g.gt.assign(y.begin() + 2 * n, y.begin() + 3 * n);
  return g;
}

RadialSection RadialOperator::d2_adjoint(const RadialOneForm& g) const {
  int n = grid_.n();
  std::vector<double> x(3 * n), y(4 * n);
  for (int j = 0; j < n; ++j) {
    x[j] = g.g1[j] * mw_[j];
    x[n + j] = g.gq[j] * mw_[n + j];
    x[2 * n + j] = g.gt[j] * mw_[2 * n + j];
  }
  d2_.mul_t(x.data(), y.data());
  RadialSection u;
  u.resize(n);
  for (int j = 0; j < n; ++j) {
    u.p[j] = y[j] / mv_[j];
    u.q[j] = y[n + j] / mv_[n + j];
    u.t[j] = y[2 * n + j] / mv_[2 * n + j];
    u.f[j] = y[3 * n + j] / mv_[3 * n + j];
  }
  return u;
}

RadialSection RadialOperator::d1(const std::vector<double>& xi) const {
  int n = grid_.n();
  RadialSection u;
  u.resize(n);
  int cols5[5];
  double wts5[5];
  for (int j = 0; j < n; ++j) {
    d_stencil(j, n, cols5, wts5);
    double d = 0;
    for (int m = 0; m < 5; ++m) d += wts5[m] * xi[cols5[m]];
    u.p[j] = -d / (grid_.du * grid_.s[j]);
    u.q[j] = -w_[j] / R_[j] * xi[j];
  }
  return u;
}

RadialOneForm RadialOperator::error_term() const {
  int n = grid_.n();
  RadialOneForm e;
  e.resize(n);
  for (int j = 0; j < n; ++j) {
    double e1, e2;
    bg_->error_profiles(grid_.s[j], e1, e2);
    e.g1[j] = e1;
    e.gq[j] = e2;
  }
  return e;
}

RadialOneForm RadialOperator::nonlinear(const RadialSection& u, const RadialSection& v) const {
  int n = grid_.n();
  double k = bg_->kappa();
  RadialOneForm g;
  g.resize(n);
  for (int j = 0; j < n; ++j) {
    g.g1[j] = k * (u.q[j] * v.q[j] + u.t[j] * v.t[j]);
    g.gq[j] = 0.5 * k * (u.p[j] * v.q[j] + u.q[j] * v.p[j] - u.f[j] * v.t[j] - u.t[j] * v.f[j]);
    g.gt[j] = 0.5 * k * (u.q[j] * v.f[j] + u.f[j] * v.q[j] + u.p[j] * v.t[j] + u.t[j] * v.p[j]);
  }
  return g;
}

namespace {
std::vector<double> apply_d_log(const std::vector<double>& v, const RadialGrid& grid) {
  int n = int(v.size());
  std::vector<double> out(n);
  int cols5[5];
  double wts5[5];
  for (int j = 0; j < n; ++j) {
    d_stencil(j, n, cols5, wts5);
    double d = 0;
    for (int m = 0; m < 5; ++m) d += wts5[m] * v[cols5[m]];
    out[j] = d / (grid.du * grid.s[j]);
  }
  return out;
}
}  // namespace

double RadialOperator::norm_section(const RadialSection& u, int n_order) const {
  int n = grid_.n();
  double kap = bg_->kappa();
  std::vector<double> dp, dq, dt, df;
  if (n_order >= 1) {
    dp = apply_d_log(u.p, grid_);
    dq = apply_d_log(u.q, grid_);
    dt = apply_d_log(u.t, grid_);
    df = apply_d_log(u.f, grid_);
  }
  double acc = 0;
  for (int j = 0; j < n; ++j) {
    double s = grid_.s[j];
    bool inside = s <= 1.0;
    double w0 = spec_.weight(0, s, rho_[j]);
    double base;
    if (inside) {
      base = w0 * w0 * (u.p[j] * u.p[j] + 2 * u.q[j] * u.q[j] + 2 * u.t[j] * u.t[j] +
                        u.f[j] * u.f[j]);
    } else {
      base = w0 * w0 * (u.p[j] * u.p[j] + u.f[j] * u.f[j]) +
             2 * (u.q[j] * u.q[j] + u.t[j] * u.t[j]);
    }
    double extra = 0;
    if (n_order >= 1) {
      double w1 = spec_.weight(1, s, rho_[j]);
      double R = R_[j], dR = dR_[j], w = w_[j];
      double gpar = dp[j] * dp[j] + 2 * u.p[j] * u.p[j] * (w * w + dR * dR) / (R * R) +
                    df[j] * df[j] + 2 * u.f[j] * u.f[j] * w * w / (R * R);
      double gperp = 2 * dq[j] * dq[j] + 2 * dt[j] * dt[j] +
                     2 * (u.q[j] * u.q[j] + u.t[j] * u.t[j]) * (w * w + dR * dR) / (R * R);
      if (inside) {
        double cross = -8.0 * u.p[j] * u.q[j] * w * dR / (R * R);
        extra = w1 * w1 * (gpar + gperp + cross);
      } else {
        double ad = kap * kap * h_[j] * h_[j] * 2 * (u.q[j] * u.q[j] + u.t[j] * u.t[j]);
        extra = w1 * w1 * gpar + gperp + ad;
      }
    }
    acc += quad_[j] * (base + extra);
  }
  return std::sqrt(acc);
}

double RadialOperator::norm_oneform(const RadialOneForm& g, int n_order, double beta_shift) const {
  int n = grid_.n();
  WeightedNormSpec sp = spec_;
  sp.beta = spec_.beta + beta_shift;
  std::vector<double> d1v, dqv, dtv;
  if (n_order >= 1) {
    d1v = apply_d_log(g.g1, grid_);
    dqv = apply_d_log(g.gq, grid_);
    dtv = apply_d_log(g.gt, grid_);
  }
  double kap = bg_->kappa();
  double acc = 0;
  for (int j = 0; j < n; ++j) {
    double s = grid_.s[j];
    bool inside = s <= 1.0;
    double w0 = sp.weight(0, s, rho_[j]);
    double base;
    if (inside)
      base = w0 * w0 * (g.g1[j] * g.g1[j] + 2 * g.gq[j] * g.gq[j] + 2 * g.gt[j] * g.gt[j]);
    else
      base = w0 * w0 * g.g1[j] * g.g1[j] + 2 * (g.gq[j] * g.gq[j] + g.gt[j] * g.gt[j]);
    double extra = 0;
    if (n_order >= 1) {
      double w1 = sp.weight(1, s, rho_[j]);
      double R = R_[j], dR = dR_[j], w = w_[j];
      double gpar = d1v[j] * d1v[j] + 2 * g.g1[j] * g.g1[j] * (w * w + dR * dR) / (R * R);
      double gperp = 2 * dqv[j] * dqv[j] + 2 * dtv[j] * dtv[j] +
                     2 * (g.gq[j] * g.gq[j] + g.gt[j] * g.gt[j]) * (w * w + dR * dR) / (R * R);
      if (inside) extra = w1 * w1 * (gpar + gperp);
      else
        extra = w1 * w1 * gpar + gperp +
                kap * kap * h_[j] * h_[j] * 2 * (g.gq[j] * g.gq[j] + g.gt[j] * g.gt[j]);
    }
    acc += quad_[j] * (base + extra);
  }
  return std::sqrt(acc);
}

RadialOperator::QResult RadialOperator::right_inverse(const RadialOneForm& g, double rtol,
                                                      int max_iter) const {
  int n = grid_.n();
  int m = 3 * n;
  std::vector<double> gg(m), xi(m, 0.0), r(m), z(m), p(m), Ap(m);
  for (int j = 0; j < n; ++j) {
    gg[j] = g.g1[j];
    gg[n + j] = g.gq[j];
    gg[2 * n + j] = g.gt[j];
  }
  // A xi = d2 Mv^-1 d2^T Mw xi
  std::vector<double> tmp_w(m), tmp_v(4 * n);
  auto applyA = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (int i = 0; i < m; ++i) tmp_w[i] = x[i] * mw_[i];
    d2_.mul_t(tmp_w.data(), tmp_v.data());
    for (int i = 0; i < 4 * n; ++i) tmp_v[i] /= mv_[i];
    d2_.mul(tmp_v.data(), y.data());
  };
  // Jacobi diagonal of A in the Mw inner product
  std::vector<double> diag(m, 0.0);
  for (int rr = 0; rr < m; ++rr) {
    double acc = 0;
    for (int k = d2_.ptr[rr]; k < d2_.ptr[rr + 1]; ++k)
      acc += d2_.val[k] * d2_.val[k] / mv_[d2_.col[k]];
    diag[rr] = acc * mw_[rr] + 1e-300;
  }
  auto ipW = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0;
    for (int i = 0; i < m; ++i) acc += a[i] * mw_[i] * b[i];
    return acc;
  };
  double gnorm = std::sqrt(ipW(gg, gg)) + 1e-300;
  r = gg;
  for (int i = 0; i < m; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = ipW(r, z);
  int it = 0;
  for (; it < max_iter; ++it) {
    double rnorm = std::sqrt(ipW(r, r));
    if (rnorm <= rtol * gnorm) break;
    applyA(p, Ap);
    double pAp = ipW(p, Ap);
    if (pAp <= 0) break;
    double alpha = rz / pAp;
    for (int i = 0; i < m; ++i) {
      xi[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    for (int i = 0; i < m; ++i) z[i] = r[i] / diag[i];
    double rz2 = ipW(r, z);
    double beta = rz2 / rz;
    rz = rz2;
    for (int i = 0; i < m; ++i) p[i] = z[i] + beta * p[i];
  }
  QResult res;
  RadialOneForm xi_form;
  xi_form.g1.assign(xi.begin(), xi.begin() + n);
  xi_form.gq.assign(xi.begin() + n, xi.begin() + 2 * n);
  xi_form.gt.assign(xi.begin() + 2 * n, xi.begin() + 3 * n);
  res.u = d2_adjoint(xi_form);
  RadialOneForm check = d2(res.u);
  double num = 0;
  for (int j = 0; j < n; ++j) {
    double a = check.g1[j] - g.g1[j], b = check.gq[j] - g.gq[j], cdiff = check.gt[j] - g.gt[j];
    num += a * mw_[j] * a + b * mw_[n + j] * b + cdiff * mw_[2 * n + j] * cdiff;
  }
  res.rel_residual = std::sqrt(num) / gnorm;
  res.iterations = it;
  res.norm_h1 = norm_section(res.u, 1);
  res.norm_source = norm_oneform(g, 0);
  return res;
}

void RadialOperator::residual_channels(const RadialSection& u, RadialOneForm& e) const {
  e = error_term();
  RadialOneForm lin = d2(u);
  RadialOneForm quad = nonlinear(u, u);
  int n = grid_.n();
  for (int j = 0; j < n; ++j) {
    e.g1[j] += lin.g1[j] + quad.g1[j];
    e.gq[j] += lin.gq[j] + quad.gq[j];
    e.gt[j] += lin.gt[j] + quad.gt[j];
  }
}

double RadialOperator::sup_residual(const RadialOneForm& e) const {
  double sup = 0;
  for (int j = 0; j < grid_.n(); ++j) {
    double v = std::sqrt(e.g1[j] * e.g1[j] + 2 * e.gq[j] * e.gq[j] + 2 * e.gt[j] * e.gt[j]);
    sup = std::max(sup, v);
  }
  return sup;
}

}  // namespace monoglue
