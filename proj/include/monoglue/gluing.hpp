#pragma once

#include "monoglue/abelian.hpp"

namespace monoglue {

// Parameters of the glued configuration: charge-1 wells, average mass,
// framing phases summing to zero, and the derived radii.
struct GlueParams {
  PointCharges charges;          // all charges must be 1
  double m0 = 0.0;               // average mass
  std::vector<double> phases;    // theta_i, sum == 0 mod 2 pi
  std::function<Vec3(const Vec3&)> flat_twist;  // optional closed 1-form

  // derived by prepare():
  std::vector<double> c;         // point constants from the abelian solve
  std::vector<double> lambda;    // m0 + c_i
  std::vector<double> eps_in;    // lambda^{-1/2}
  std::vector<double> eps_out;   // 2 lambda^{-1/2}
  bool prepared = false;

  // inequality report (the admissible-mass conditions, recorded not guessed)
  struct MassChecks {
    double min_distance = 0.0;
    double required_distance = 0.0;   // 4/sqrt(m0)
    bool separation_ok = false;
    bool lambda_positive = false;
    bool eps_fits = false;            // eps_out < dist/2
    bool m0_dominates_c = false;      // m0 > 1 + 2 sup|c_i|
    bool ricci_bound = false;         // m0 > 2 sqrt(sup |Ric|)
  } checks;

  void prepare(const DiracData& dirac);
  void validate() const;  // throws when the hard invariants fail
};

struct CutoffValues {
  std::vector<double> chi_in;    // per well
  std::vector<Vec3> dchi_in;     // gradients (coordinate components)
  double chi_out = 1.0;
  Vec3 dchi_out{0, 0, 0};
};

// quintic transition: chi_in = 1 inside eps_in, 0 outside eps_out
double cutoff_chi(double r, double eps_in, double eps_out);
double cutoff_chi_d(double r, double eps_in, double eps_out);

CutoffValues cutoff_profile(const GlueParams& params, const Vec3& x);

// sup of |grad chi| over the transition annuli
double cutoff_gradient_bound(const GlueParams& params);

}  // namespace monoglue
