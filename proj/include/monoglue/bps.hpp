#pragma once

#include "monoglue/core.hpp"

namespace monoglue {

// Closed-form spherically symmetric charge-1 solution on flat R^3 and its
// mass rescalings. Two profile normalizations are carried side by side:
// kappa = 1 has |Phi| = lambda coth(lambda r) - 1/r, kappa = 2 the half-tail
// variant lambda coth(2 lambda r) - 1/(2 r) used by the glued pipeline.

enum class BpsGauge { Hedgehog, AbelianOutside };

struct BpsField {
  double lambda = 1.0;
  Vec3 center{0, 0, 0};
  double phase = 0.0;
  BpsGauge gauge = BpsGauge::Hedgehog;
  double kappa = 1.0;
};

struct BpsProfiles {
  double h;    // |Phi|(r)
  double w;    // shape function, 1 at r=0, -> 0 at infinity
  double dh;   // h'
  double dw;   // w'
};

// Profile functions of the mass-lambda solution in the given convention.
BpsProfiles bps_profiles(double lambda, double r, double kappa);

// Field values at a point (connection in coordinate components).
void bps_eval(const BpsField& field, const Vec3& x, Su2Form& A, Su2& Phi);

// Radius where the unit-mass Higgs reaches 1/2 (kappa = 1 profile).
double bps_radius_R();

struct DecaySample { double r; double phi_gap; double a_gap; };
struct DecayReport {
  std::vector<DecaySample> samples;
  double fit_slope = 0.0;      // log|phi gap| vs r
  double fit_intercept = 0.0;
  bool fit_ok = false;
};

// Pointwise gap to the matching unit-charge mass-lambda abelian field, with
// a log-linear decay fit over the given radii.
DecayReport bps_dirac_gap(const BpsField& field, const std::vector<double>& radii);

BpsField apply_phase(const BpsField& field, double theta);

// Energy density (radial profile form) of the mass-lambda solution;
// integrates to 4 pi lambda over R^3 in the kappa=1 convention.
double bps_energy_density(double lambda, double r, double kappa);
double bps_energy_in_ball(double lambda, double r_out, double kappa);

}  // namespace monoglue
