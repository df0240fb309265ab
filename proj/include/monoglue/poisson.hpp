#pragma once

#include <functional>
#include <vector>

#include "monoglue/core.hpp"
#include "monoglue/geometry.hpp"

namespace monoglue {

// Conservative 7-point scheme for div(c grad u) = c^3 * S on a spherical
// shell grid (geometric radial spacing, staggered latitudes, periodic
// azimuth), Dirichlet at the outer radius, natural inner boundary.
// Restricted to conformally flat metrics g = c(x)^2 g_E.
class SphericalPoisson {
 public:
  struct Params {
    double r_min = 0.1;
    double r_max = 150.0;
    int n_r = 360;
    int n_theta = 48;
    int n_psi = 16;
    double cg_rtol = 1e-12;
    int cg_max_iter = 20000;
  };

  SphericalPoisson(Params params, std::function<double(const Vec3&)> conformal,
                   std::function<double(const Vec3&)> source,
                   std::function<double(const Vec3&)> dirichlet_outer);

  void solve();
  double eval(const Vec3& x) const;        // trilinear in (log r, theta, psi)
  Vec3 grad(const Vec3& x) const;          // gradient of the numeric part
  double achieved_residual() const { return residual_; }
  int iterations() const { return iters_; }
  const Params& params() const { return p_; }

 private:
  Params p_;
  std::function<double(const Vec3&)> conf_, src_, bc_;
  std::vector<double> q_;                   // log r node coordinates
  std::vector<double> th_, ps_;
  std::vector<double> u_;                   // solution nodes
  std::vector<double> diag_, rhs_, vol_;
  std::vector<double> t_r_, t_th_, t_ps_;   // face conductances
  double residual_ = 0.0;
  int iters_ = 0;

  size_t idx(int i, int j, int k) const;
  Vec3 node_point(int i, int j, int k) const;
  void assemble();
  void apply(const std::vector<double>& x, std::vector<double>& y) const;
};

// Spherically symmetric harmonic well: c r^2 phi' = k/2 away from the
// origin, phi -> mass at infinity.
class RadialHarmonic {
 public:
  RadialHarmonic(const ManifoldModel& model, int total_charge, double mass);

  double phi_r(double r) const;       // value at coordinate radius r
  double dphi_r(double r) const;      // d phi / dr
  double s_of_r(double r) const;      // geodesic radius
  double r_of_s(double s) const;
  double R_of_s(double s) const;      // warping radius: R = c(r) r
  double dR_of_s(double s) const;
  double mass() const { return mass_; }
  int charge() const { return k_; }

 private:
  ManifoldModel model_;
  int k_;
  double mass_;
  // cached cumulative integrals on a log grid
  std::vector<double> lr_, s_tab_, tail_tab_;
  double interp(const std::vector<double>& tab, double r) const;
};

}  // namespace monoglue
