#pragma once

#include <optional>
#include <string>
#include <vector>

#include "monoglue/core.hpp"

namespace monoglue {

enum class ManifoldKind { Euclidean3, ConePerturbation };
enum class LinkName { RoundS2, Custom };

// Laplace spectrum of the link surface, with multiplicities.
struct LinkSpec {
  LinkName name = LinkName::RoundS2;
  double volume = 4.0 * M_PI;
  struct Eigen { double value; int multiplicity; };
  std::vector<Eigen> spectrum;

  static LinkSpec round_s2(int l_max = 12);
  static LinkSpec custom(double volume, std::vector<Eigen> spectrum);
  void validate() const;
};

enum class PerturbationType { None, Conformal, Anisotropic };

// Decaying symmetric 2-tensor added to the exact cone metric.
struct Perturbation {
  PerturbationType type = PerturbationType::None;
  double amplitude = 0.0;
  double rate = -1.0;  // decay exponent, < 0
  Mat3 eval(const Vec3& x) const;
  bool spherically_symmetric() const { return type != PerturbationType::Anisotropic; }
};

struct ManifoldModel {
  ManifoldKind kind = ManifoldKind::Euclidean3;
  double rate = -1.0;  // nu < 0
  LinkSpec link = LinkSpec::round_s2();
  Perturbation perturbation;
  double compact_core_radius = 2.0;
  double chart_min_radius = 0.0;  // > 0 only for links with no smooth filling

  static ManifoldModel euclidean();
  static ManifoldModel cone_perturbation(double nu, double amplitude,
                                         PerturbationType type = PerturbationType::Conformal);

  void validate() const;
  bool in_chart(const Vec3& x) const;

  Mat3 metric(const Vec3& x) const;
  // Smoothed radius function; equals the radial distance on the end.
  double rho(const Vec3& x) const { return std::sqrt(1.0 + dot(x, x)); }
  // Conformal factor for spherically symmetric models: g = c(r)^2 g_E.
  double conformal_factor(double r) const;
  bool spherically_symmetric() const;
};

struct GeomSample {
  Vec3 x;
  Mat3 g;
  Mat3 g_inv;
  double gamma[3][3][3];  // Gamma^k_ij
  Mat3 ricci;
  double sqrt_det = 1.0;
  double rho = 1.0;
};

GeomSample sample_geometry(const ManifoldModel& model, const Vec3& x);

// Hodge star on k-form components at a point. Components are packed as
//   k=0: {f};  k=1: {a_1,a_2,a_3};  k=2: {b_23,b_31,b_12};  k=3: {c_123}.
std::vector<double> hodge_star(const ManifoldModel& model, const Vec3& x,
                               const std::vector<double>& comps, int degree);
std::vector<double> hodge_star(const Mat3& g, const std::vector<double>& comps, int degree);

// Weights beta in the window with (beta+1)(beta+2) in the link spectrum.
std::vector<double> critical_rates(const LinkSpec& link, double beta_lo, double beta_hi);

}  // namespace monoglue
