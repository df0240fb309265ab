#pragma once

#include <memory>
#include <optional>

#include "monoglue/core.hpp"
#include "monoglue/geometry.hpp"

namespace monoglue {

// Singular abelian solution with point sources. Conventions: the potential
// behaves as -k_i/(2 r) near a charge-k_i point, every unit of charge carries
// flux 2*pi through a small sphere, and the end behavior is
// m - k^O (2 pi / Vol(Sigma)) / rho.

struct PointCharges {
  std::vector<Vec3> points;
  std::vector<int> charges;
  double mass = 0.0;

  int total_charge() const;
  double min_pairwise_distance() const;
  void validate() const;
};

enum class DiracMethod { Auto, ClosedForm, Radial, Variational };

struct DiracOptions {
  DiracMethod method = DiracMethod::Auto;
  double source_radius = 0.25;   // smoothing radius of the bump sources
  double outer_radius = 150.0;   // Dirichlet truncation radius
  int n_r = 360;                 // variational grid
  int n_theta = 48;
  int n_psi = 16;
  double cg_rtol = 1e-12;
  int cg_max_iter = 20000;
};

class SphericalPoisson;  // variational backend
class RadialHarmonic;    // spherically symmetric backend

struct FlatTwist {
  std::function<Vec3(const Vec3&)> one_form;  // coordinate components
  bool zero = true;
};

struct DiracData {
  ManifoldModel model;
  PointCharges charges;
  DiracMethod method = DiracMethod::ClosedForm;
  std::vector<double> c;                    // per-point constants (charge-1 wells)
  std::vector<Vec3> string_axes;            // per-well patch axis
  double source_radius = 0.25;              // bump radius used by the variational path
  FlatTwist twist;
  std::shared_ptr<SphericalPoisson> numeric;
  std::shared_ptr<RadialHarmonic> radial;

  double phi(const Vec3& x) const;
  Vec3 grad_phi(const Vec3& x) const;       // coordinate components of d phi
  // curvature F_D = * d phi as dual (vector) components
  Vec3 F_dual(const Vec3& x) const;
  // geodesic distance to well i, accurate to O(r^3) near the point
  double well_distance(const Vec3& x, int i) const;
  double solver_residual = 0.0;
};

DiracData solve_dirac_potential(const ManifoldModel& model, const PointCharges& charges,
                                const DiracOptions& opts = {});

double extract_point_constant(const DiracData& dirac, int i);

double flux(const DiracData& dirac, const Vec3& center, double radius,
            int n_theta = 32, int n_psi = 64);

enum class Patch { North, South };

// Total two-patch U(1) potential (coordinate components) at x; the su(2)
// embedding pairs it with the fixed reducible direction.
Vec3 dirac_connection(const DiracData& dirac, Patch patch, const Vec3& x);

DiracData apply_flat_twist(const DiracData& dirac, const std::function<Vec3(const Vec3&)>& twist,
                           int validation_samples = 64, double tol = 1e-6, unsigned seed = 1234);

struct MinimumHiggsReport {
  double epsilon = 0.0;
  double min_value = 0.0;
  Vec3 argmin{0, 0, 0};
  bool pass = false;
};

MinimumHiggsReport minimum_higgs_check(const DiracData& dirac, double m0);

// Exact potential of the normalized quintic bump of radius eps: equals
// -1/(2 r) outside the bump, smooth inside; psi(r), psi'(r).
double bump_potential(double r, double eps);
double bump_potential_d(double r, double eps);
double bump_density(double r, double eps);  // source density: Delta psi = 2 pi * density

}  // namespace monoglue
