#include "monoglue/poisson.hpp"

#include <algorithm>
#include <cmath>

namespace monoglue {

SphericalPoisson::SphericalPoisson(Params params, std::function<double(const Vec3&)> conformal,
                                   std::function<double(const Vec3&)> source,
                                   std::function<double(const Vec3&)> dirichlet_outer)
    : p_(params), conf_(std::move(conformal)), src_(std::move(source)), bc_(std::move(dirichlet_outer)) {
  q_.resize(p_.n_r + 1);
  double q0 = std::log(p_.r_min), q1 = std::log(p_.r_max);
  for (int i = 0; i <= p_.n_r; ++i) q_[i] = q0 + (q1 - q0) * i / p_.n_r;
  th_.resize(p_.n_theta);
  for (int j = 0; j < p_.n_theta; ++j) th_[j] = M_PI * (j + 0.5) / p_.n_theta;
  ps_.resize(p_.n_psi);
  for (int k = 0; k < p_.n_psi; ++k) ps_[k] = 2.0 * M_PI * k / p_.n_psi;
  assemble();
}

size_t SphericalPoisson::idx(int i, int j, int k) const {
  return (size_t(i) * p_.n_theta + j) * p_.n_psi + k;
}

Vec3 SphericalPoisson::node_point(int i, int j, int k) const {
  double r = std::exp(q_[i]);
  double st = std::sin(th_[j]), ct = std::cos(th_[j]);
  return {r * st * std::cos(ps_[k]), r * st * std::sin(ps_[k]), r * ct};
}

void SphericalPoisson::assemble() {
  // Dirichlet energy in coordinates (q = log r, th, ps):
  //   a(u,u) = int c (r u_q'^2/r^2 ... ) -> with dV = c^3 r^3 sin th dq dth dps
  //   and |grad u|^2 = u_q^2/r^2 + u_th^2/r^2 + u_ps^2/(r^2 sin^2 th),
  //   integrand c * [u_q^2 + u_th^2 + u_ps^2/sin^2 th] * r sin th.
  // Face conductances are midpoints of (c r sin th) with the right 1/dx^2.
  int NR = p_.n_r, NT = p_.n_theta, NP = p_.n_psi;
  double dq = q_[1] - q_[0], dt = M_PI / NT, dp = 2.0 * M_PI / NP;
  size_t n = size_t(NR + 1) * NT * NP;
  u_.assign(n, 0.0);
  rhs_.assign(n, 0.0);
  vol_.assign(n, 0.0);
  diag_.assign(n, 0.0);
  t_r_.assign(size_t(NR) * NT * NP, 0.0);
  t_th_.assign(size_t(NR + 1) * (NT + 1) * NP, 0.0);
  t_ps_.assign(size_t(NR + 1) * NT * NP, 0.0);

  auto cfun = [&](double q, double th, double ps) {
    double r = std::exp(q);
    double st = std::sin(th);
    Vec3 x{r * st * std::cos(ps), r * st * std::sin(ps), r * std::cos(th)};
    return conf_(x);
  };

  // radial faces between (i,i+1)
  for (int i = 0; i < NR; ++i)
    for (int j = 0; j < NT; ++j)
      for (int k = 0; k < NP; ++k) {
        double qm = 0.5 * (q_[i] + q_[i + 1]);
        double c = cfun(qm, th_[j], ps_[k]);
        double w = c * std::exp(qm) * std::sin(th_[j]) * dt * dp / dq;
        t_r_[(size_t(i) * NT + j) * NP + k] = w;
      }
  // theta faces between (j-1, j); j = 0 and NT are the poles (zero area)
  for (int i = 0; i <= NR; ++i)
    for (int j = 1; j < NT; ++j)
      for (int k = 0; k < NP; ++k) {
        double tm = 0.5 * (th_[j - 1] + th_[j]);
        double c = cfun(q_[i], tm, ps_[k]);
        double w = c * std::exp(q_[i]) * std::sin(tm) * dq * dp / dt;
        t_th_[(size_t(i) * (NT + 1) + j) * NP + k] = w;
      }
  // psi faces between (k, k+1 mod NP)
  for (int i = 0; i <= NR; ++i)
    for (int j = 0; j < NT; ++j)
      for (int k = 0; k < NP; ++k) {
        double pm = ps_[k] + 0.5 * dp;
        double c = cfun(q_[i], th_[j], pm);
        double w = c * std::exp(q_[i]) / std::sin(th_[j]) * dq * dt / dp;
        t_ps_[(size_t(i) * NT + j) * NP + k] = w;
      }
  // node volumes and sources
  for (int i = 0; i <= NR; ++i)
    for (int j = 0; j < NT; ++j)
      for (int k = 0; k < NP; ++k) {
        Vec3 x = node_point(i, j, k);
        double r = std::exp(q_[i]);
        double c = conf_(x);
        double frac = (i == 0 || i == NR) ? 0.5 : 1.0;
        double dv = c * c * c * r * r * r * std::sin(th_[j]) * dq * dt * dp * frac;
        vol_[idx(i, j, k)] = dv;
        rhs_[idx(i, j, k)] = -dv * src_(x);  // a(u,v) = -int S v
      }
  // Dirichlet values at i = NR
  for (int j = 0; j < NT; ++j)
    for (int k = 0; k < NP; ++k) u_[idx(NR, j, k)] = bc_(node_point(NR, j, k));
  // diagonal for Jacobi
  std::vector<double> e(n, 0.0), d(n, 0.0);
  for (size_t m = 0; m < n; ++m) e[m] = 1.0;
  // compute diag by assembling row sums of |stencil| cheaply: apply to unit
  // vector is wrong for off-diagonals, so accumulate explicitly:
  for (int i = 0; i < NR; ++i)
    for (int j = 0; j < NT; ++j)
      for (int k = 0; k < NP; ++k) {
        double w = t_r_[(size_t(i) * NT + j) * NP + k];
        d[idx(i, j, k)] += w;
        d[idx(i + 1, j, k)] += w;
      }
  for (int i = 0; i <= NR; ++i)
    for (int j = 1; j < NT; ++j)
      for (int k = 0; k < NP; ++k) {
        double w = t_th_[(size_t(i) * (NT + 1) + j) * NP + k];
        d[idx(i, j, k)] += w;
        d[idx(i, j - 1, k)] += w;
      }
  for (int i = 0; i <= NR; ++i)
    for (int j = 0; j < NT; ++j)
      for (int k = 0; k < NP; ++k) {
        double w = t_ps_[(size_t(i) * NT + j) * NP + k];
        d[idx(i, j, k)] += w;
        d[idx(i, j, (k + 1) % NP)] += w;
      }
  diag_ = d;
}

void SphericalPoisson::apply(const std::vector<double>& x, std::vector<double>& y) const {
  int NR = p_.n_r, NT = p_.n_theta, NP = p_.n_psi;
  std::fill(y.begin(), y.end(), 0.0);
  for (int i = 0; i < NR; ++i)
    for (int j = 0; j < NT; ++j)
      for (int k = 0; k < NP; ++k) {
        double w = t_r_[(size_t(i) * NT + j) * NP + k];
        double dfl = w * (x[idx(i + 1, j, k)] - x[idx(i, j, k)]);
        y[idx(i, j, k)] += dfl;
        y[idx(i + 1, j, k)] -= dfl;
      }
  for (int i = 0; i <= NR; ++i)
    for (int j = 1; j < NT; ++j)
      for (int k = 0; k < NP; ++k) {
        double w = t_th_[(size_t(i) * (NT + 1) + j) * NP + k];
        double dfl = w * (x[idx(i, j, k)] - x[idx(i, j - 1, k)]);
        y[idx(i, j - 1, k)] += dfl;
        y[idx(i, j, k)] -= dfl;
      }
  for (int i = 0; i <= NR; ++i)
    for (int j = 0; j < NT; ++j)
      for (int k = 0; k < NP; ++k) {
        double w = t_ps_[(size_t(i) * NT + j) * NP + k];
        int k2 = (k + 1) % NP;
        double dfl = w * (x[idx(i, j, k2)] - x[idx(i, j, k)]);
        y[idx(i, j, k)] += dfl;
        y[idx(i, j, k2)] -= dfl;
      }
  // y = -A x where A is the (negative-definite) divergence form; flip sign
  for (auto& v : y) v = -v;
}

void SphericalPoisson::solve() {
  int NR = p_.n_r, NT = p_.n_theta, NP = p_.n_psi;
  size_t n = u_.size();
  auto dirichlet = [&](size_t m) { return m >= idx(NR, 0, 0); };
  // residual b - A u with u holding boundary values
  std::vector<double> r(n), z(n), pdir(n), Ap(n);
  apply(u_, Ap);
  double bnorm = 0;
  for (size_t m = 0; m < n; ++m) {
    r[m] = dirichlet(m) ? 0.0 : rhs_[m] - Ap[m];
    bnorm += r[m] * r[m] + rhs_[m] * rhs_[m];
  }
  bnorm = std::sqrt(bnorm) + 1e-300;
  auto precond = [&](const std::vector<double>& a, std::vector<double>& b) {
    for (size_t m = 0; m < n; ++m) b[m] = dirichlet(m) ? 0.0 : a[m] / std::max(diag_[m], 1e-300);
  };
  precond(r, z);
  pdir = z;
  double rz = 0;
  for (size_t m = 0; m < n; ++m) rz += r[m] * z[m];
  int it = 0;
  double rn = 0;
  for (; it < p_.cg_max_iter; ++it) {
    rn = 0;
    for (size_t m = 0; m < n; ++m) rn += r[m] * r[m];
    rn = std::sqrt(rn);
    if (rn <= p_.cg_rtol * bnorm) break;
    apply(pdir, Ap);
    for (size_t m = 0; m < n; ++m)
      if (dirichlet(m)) Ap[m] = 0.0;
    double pAp = 0;
    for (size_t m = 0; m < n; ++m) pAp += pdir[m] * Ap[m];
    if (pAp <= 0) break;
    double alpha = rz / pAp;
    for (size_t m = 0; m < n; ++m) {
      if (!dirichlet(m)) u_[m] += alpha * pdir[m];
      r[m] -= alpha * Ap[m];
    }
    precond(r, z);
    double rz2 = 0;
    for (size_t m = 0; m < n; ++m) rz2 += r[m] * z[m];
    double beta = rz2 / rz;
    rz = rz2;
    for (size_t m = 0; m < n; ++m) pdir[m] = z[m] + beta * pdir[m];
  }
  iters_ = it;
  residual_ = rn / bnorm;
  if (rn > 100 * p_.cg_rtol * bnorm)
    throw std::runtime_error("poisson CG did not converge: relative residual " +
                             std::to_string(rn / bnorm));
}

double SphericalPoisson::eval(const Vec3& x) const {
  int NR = p_.n_r, NT = p_.n_theta, NP = p_.n_psi;
  double r = std::max(norm(x), 1e-300);
  double q = std::log(r);
  double ct = std::clamp(x[2] / r, -1.0, 1.0);
  double th = std::acos(ct);
  double ps = std::atan2(x[1], x[0]);
  if (ps < 0) ps += 2.0 * M_PI;
  double dq = q_[1] - q_[0], dt = M_PI / NT, dp = 2.0 * M_PI / NP;
  double fi = std::clamp((q - q_[0]) / dq, 0.0, double(NR) - 1e-12);
  double fj = std::clamp((th - th_[0]) / dt, 0.0, double(NT - 1) - 1e-12);
  double fk = ps / dp;
  int i = int(fi), j = int(fj), k = int(fk) % NP;
  double ai = fi - i, aj = fj - j, ak = fk - int(fk);
  double v = 0;
  for (int di = 0; di < 2; ++di)
    for (int dj = 0; dj < 2; ++dj)
      for (int dk = 0; dk < 2; ++dk) {
        double wgt = (di ? ai : 1 - ai) * (dj ? aj : 1 - aj) * (dk ? ak : 1 - ak);
        v += wgt * u_[idx(i + di, std::min(j + dj, NT - 1), (k + dk) % NP)];
      }
  return v;
}

Vec3 SphericalPoisson::grad(const Vec3& x) const {
  double h = 1e-4 * (1.0 + norm(x));
  Vec3 g;
  for (int i = 0; i < 3; ++i) {
    Vec3 xp = x, xm = x;
    xp[i] += h; xm[i] -= h;
    g[i] = (eval(xp) - eval(xm)) / (2 * h);
  }
  return g;
}

RadialHarmonic::RadialHarmonic(const ManifoldModel& model, int total_charge, double mass)
    : model_(model), k_(total_charge), mass_(mass) {
  if (!model.spherically_symmetric())
    throw std::invalid_argument("RadialHarmonic requires a spherically symmetric model");
  // tabulate s(r) = int_0^r c and tail(r) = int_r^inf (1 - 1/c)/t^2 on log grid
  int n = 2400;
  lr_.resize(n);
  double l0 = std::log(1e-6), l1 = std::log(5e4);
  for (int i = 0; i < n; ++i) lr_[i] = l0 + (l1 - l0) * i / (n - 1);
  s_tab_.resize(n);
  tail_tab_.resize(n);
  auto c = [&](double r) { return model_.conformal_factor(r); };
  double r_prev = 0.0, acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = std::exp(lr_[i]);
    acc += integrate([&](double t) { return c(t); }, r_prev, r, 1e-12);
    s_tab_[i] = acc;
    r_prev = r;
  }
  // tail: integrate inward from the far cutoff
  double far = std::exp(l1);
  double run = integrate([&](double t) { return (1.0 - 1.0 / c(t)) / (t * t); }, far, 1e7, 1e-14);
  tail_tab_[n - 1] = run;
  for (int i = n - 2; i >= 0; --i) {
    double ra = std::exp(lr_[i]), rb = std::exp(lr_[i + 1]);
    run += integrate([&](double t) { return (1.0 - 1.0 / c(t)) / (t * t); }, ra, rb, 1e-14);
    tail_tab_[i] = run;
  }
}

double RadialHarmonic::interp(const std::vector<double>& tab, double r) const {
  double l = std::log(std::max(r, 1e-300));
  if (l >= lr_.back()) return tab.back();
  if (l <= lr_.front()) {
    // below the table: s ~ c(0) r; tail ~ tail(r0) + (1 - 1/c(0))(1/r - 1/r0)
    double r0 = std::exp(lr_.front());
    if (&tab == &s_tab_) return model_.conformal_factor(0.0) * r;
    return tab.front() + (1.0 - 1.0 / model_.conformal_factor(0.0)) * (1.0 / r - 1.0 / r0);
  }
  double f = (l - lr_.front()) / (lr_[1] - lr_[0]);
  int i = std::min(int(f), int(lr_.size()) - 2);
  double a = f - i;
  return (1 - a) * tab[i] + a * tab[i + 1];
}

double RadialHarmonic::s_of_r(double r) const {
  return interp(s_tab_, r);
}

double RadialHarmonic::r_of_s(double s) const {
  // monotone inverse by bisection on the table
  double lo = 0.0, hi = std::exp(lr_.back());
  if (s <= 0) return 0.0;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (s_of_r(mid) < s) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double RadialHarmonic::R_of_s(double s) const {
  double r = r_of_s(s);
  return model_.conformal_factor(r) * r;
}

double RadialHarmonic::dR_of_s(double s) const {
  double h = 1e-5 * (1.0 + s);
  if (s < 2 * h) return (R_of_s(s + h) - R_of_s(std::max(s - h, 0.0))) / (h + std::min(s, h));
  return (8 * (R_of_s(s + h) - R_of_s(s - h)) - (R_of_s(s + 2 * h) - R_of_s(s - 2 * h))) / (12 * h);
}

double RadialHarmonic::phi_r(double r) const {
  // phi = m - (k/2) int_r^inf dt/(c t^2) = m - (k/2)(1/r - tail(r))
  if (r <= 0) throw std::domain_error("phi_r: r must be positive");
  return mass_ - 0.5 * k_ * (1.0 / r - interp(tail_tab_, r));
}

double RadialHarmonic::dphi_r(double r) const {
  return 0.5 * k_ / (model_.conformal_factor(r) * r * r);
}

}  // namespace monoglue
