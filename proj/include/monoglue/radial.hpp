#pragma once

#include <memory>

#include "monoglue/bps.hpp"
#include "monoglue/gluing.hpp"
#include "monoglue/poisson.hpp"

namespace monoglue {

// Equivariant (hedgehog) backend: a single unit well at the apex of a
// spherically symmetric model. All fields reduce to radial profiles of the
// geodesic radius s on the warped product ds^2 + R(s)^2 dOmega^2:
//   Phi = -h(s) n,  A = hedgehog(w(s));  the Bogomolny system is
//   h' = (1 - w^2)/(kappa R^2),  w' = -kappa h w.
// Sections carry four profiles (p, q, t, f); linearized image three
// (g1, gq, gt):
//   g1 = -f' + (2 w/R) t
//   gq =  t' + (kappa h + R'/R) t - (w/R) f
//   gt = -[q' + (kappa h + R'/R) q - (w/R) p]

enum class RadialKind { Glued, ExactBps, DiracPair };

class RadialBackground {
 public:
  static RadialBackground glued(const ManifoldModel& model, const GlueParams& params,
                                const DiracData& dirac);
  static RadialBackground exact_bps(double lambda, double kappa);
  static RadialBackground dirac_pair(const ManifoldModel& model, double mass);

  RadialKind kind() const { return kind_; }
  double kappa() const { return kappa_; }
  double lambda() const { return lambda_; }
  double m0() const { return m0_; }
  double eps_in() const { return eps_in_; }
  double eps_out() const { return eps_out_; }
  const ManifoldModel& model() const { return model_; }
  const std::shared_ptr<RadialHarmonic>& dirac() const { return dirac_; }

  double R_of_s(double s) const;
  double dR_of_s(double s) const;
  double s_of_r(double r) const;
  double r_of_s(double s) const;

  void profiles(double s, double& h, double& dh, double& w, double& dw) const;
  // the linearization error e0 in the (g1, gq(sym), 0) channels
  void error_profiles(double s, double& e1, double& e2) const;

 private:
  RadialKind kind_ = RadialKind::ExactBps;
  ManifoldModel model_ = ManifoldModel::euclidean();
  std::shared_ptr<RadialHarmonic> dirac_;
  double kappa_ = 2.0;
  double lambda_ = 1.0, m0_ = 1.0, eps_in_ = 1.0, eps_out_ = 2.0;
};

struct RadialGrid {
  std::vector<double> s;   // log-uniform nodes
  double du = 0.0;
  static RadialGrid make(double s_min, double s_max, int n);
  int n() const { return int(s.size()); }
};

struct RadialSection {
  std::vector<double> p, q, t, f;
  void resize(int n) { p.assign(n, 0); q.assign(n, 0); t.assign(n, 0); f.assign(n, 0); }
};

struct RadialOneForm {
  std::vector<double> g1, gq, gt;
  void resize(int n) { g1.assign(n, 0); gq.assign(n, 0); gt.assign(n, 0); }
};

// small CSR matrix for the 1D discrete operators
struct Csr {
  int rows = 0, cols = 0;
  std::vector<int> ptr, col;
  std::vector<double> val;
  void mul(const double* x, double* y) const;
  void mul_t(const double* x, double* y) const;
};

struct WeightedNormSpec {
  double beta = -0.5;
  double m0 = 1.0;
  double eps_out = 1.0;
  double core_radius = 2.0;
  double weight(int j, double s, double rho) const;  // W_j
};

class RadialOperator {
 public:
  RadialOperator(std::shared_ptr<const RadialBackground> bg, RadialGrid grid, double beta);

  const RadialGrid& grid() const { return grid_; }
  const RadialBackground& background() const { return *bg_; }
  const WeightedNormSpec& norm_spec() const { return spec_; }

  RadialOneForm d2(const RadialSection& u) const;
  RadialSection d2_adjoint(const RadialOneForm& g) const;  // weighted transpose
  RadialSection d1(const std::vector<double>& xi) const;
  RadialOneForm error_term() const;
  RadialOneForm nonlinear(const RadialSection& u, const RadialSection& v) const;

  double norm_section(const RadialSection& u, int n) const;   // H_{n,beta}
  double norm_oneform(const RadialOneForm& g, int n, double beta_shift = -1.0) const;

  struct QResult {
    RadialSection u;
    double rel_residual = 0.0;
    int iterations = 0;
    double norm_h1 = 0.0;       // H_{1,beta} of u
    double norm_source = 0.0;   // H_{0,beta-1} of g
  };
  QResult right_inverse(const RadialOneForm& g, double rtol = 1e-10, int max_iter = 20000) const;

  // pointwise residual channels of the corrected state bg + u
  void residual_channels(const RadialSection& u, RadialOneForm& e) const;
  double sup_residual(const RadialOneForm& e) const;  // max_j |e(s_j)|_g

  // background profile tables on the grid
  const std::vector<double>& h() const { return h_; }
  const std::vector<double>& w() const { return w_; }
  const std::vector<double>& R() const { return R_; }

 private:
  std::shared_ptr<const RadialBackground> bg_;
  RadialGrid grid_;
  WeightedNormSpec spec_;
  std::vector<double> h_, w_, R_, dR_, rho_;
  Csr d2_;                       // 3n x 4n
  std::vector<double> mv_, mw_;  // diagonal weighted quadrature forms
  std::vector<double> quad_;     // raw 4 pi R^2 ds weights
  void build();
};

}  // namespace monoglue
