#include "monoglue/gluing.hpp"

#include <cmath>

namespace monoglue {

void GlueParams::prepare(const DiracData& dirac) {
  charges.validate();
  for (int k : charges.charges)
    if (k != 1) throw std::invalid_argument("gluing needs charge-1 wells");
  if (phases.empty()) phases.assign(charges.points.size(), 0.0);
  if (phases.size() != charges.points.size())
    throw std::invalid_argument("one phase per well required");
  c = dirac.c;
  size_t k = charges.points.size();
  lambda.resize(k);
  eps_in.resize(k);
  eps_out.resize(k);
  double sup_c = 0;
  for (size_t i = 0; i < k; ++i) {
    lambda[i] = m0 + c[i];
    sup_c = std::max(sup_c, std::abs(c[i]));
    if (lambda[i] > 0) {
      eps_in[i] = 1.0 / std::sqrt(lambda[i]);
      eps_out[i] = 2.0 * eps_in[i];
    }
  }
  checks.min_distance = k > 1 ? charges.min_pairwise_distance()
                              : std::numeric_limits<double>::infinity();
  checks.required_distance = 4.0 / std::sqrt(std::max(m0, 1e-300));
  checks.separation_ok = checks.min_distance > checks.required_distance;
  checks.lambda_positive = true;
  for (double l : lambda) checks.lambda_positive = checks.lambda_positive && l > 0;
  checks.eps_fits = true;
  if (k > 1)
    for (double e : eps_out) checks.eps_fits = checks.eps_fits && e < 0.5 * checks.min_distance;
  checks.m0_dominates_c = m0 > 1.0 + 2.0 * sup_c;
  // sup |Ric| over sampled points (zero on flat space)
  double sup_ric = 0;
  if (dirac.model.kind == ManifoldKind::ConePerturbation) {
    for (double r : {0.3, 1.0, 2.0, 5.0, 12.0}) {
      GeomSample g = sample_geometry(dirac.model, Vec3{r * 0.57, r * 0.57, r * 0.59});
      double m = 0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) m = std::max(m, std::abs(g.ricci[a][b]));
      sup_ric = std::max(sup_ric, m);
    }
  }
  checks.ricci_bound = m0 > 2.0 * std::sqrt(sup_ric);
  prepared = true;
}

void GlueParams::validate() const {
  if (!prepared) throw std::logic_error("GlueParams::prepare was not called");
  if (m0 <= 0) throw std::invalid_argument("average mass must be positive");
  double sum = 0;
  for (double t : phases) sum += t;
  double wrapped = std::remainder(sum, 2.0 * M_PI);
  if (std::abs(wrapped) > 1e-9)
    throw std::invalid_argument("framing phases must sum to 0 mod 2 pi");
  if (!checks.separation_ok)
    throw std::invalid_argument("wells closer than 4/sqrt(m0)");
  if (!checks.lambda_positive)
    throw std::invalid_argument("nonpositive well mass lambda_i = m0 + c_i");
  if (!checks.eps_fits)
    throw std::invalid_argument("outer gluing radius exceeds half the well separation");
}

double cutoff_chi(double r, double eps_in, double eps_out) {
  return 1.0 - smoothstep5((r - eps_in) / (eps_out - eps_in));
}

double cutoff_chi_d(double r, double eps_in, double eps_out) {
  return -smoothstep5_d((r - eps_in) / (eps_out - eps_in)) / (eps_out - eps_in);
}

CutoffValues cutoff_profile(const GlueParams& params, const Vec3& x) {
  if (!params.prepared) throw std::logic_error("GlueParams::prepare was not called");
  CutoffValues v;
  size_t k = params.charges.points.size();
  v.chi_in.resize(k);
  v.dchi_in.resize(k);
  double sum = 0;
  Vec3 dsum{0, 0, 0};
  for (size_t i = 0; i < k; ++i) {
    Vec3 d = x - params.charges.points[i];
    double r = norm(d);
    v.chi_in[i] = cutoff_chi(r, params.eps_in[i], params.eps_out[i]);
    v.dchi_in[i] = r > 0 ? (cutoff_chi_d(r, params.eps_in[i], params.eps_out[i]) / r) * d
                         : Vec3{0, 0, 0};
    sum += v.chi_in[i];
    dsum += v.dchi_in[i];
  }
  v.chi_out = 1.0 - sum;
  v.dchi_out = -1.0 * dsum;
  return v;
}

double cutoff_gradient_bound(const GlueParams& params) {
  double b = 0;
  for (size_t i = 0; i < params.charges.points.size(); ++i)
    b = std::max(b, 1.875 / (params.eps_out[i] - params.eps_in[i]));
  return b;
}

}  // namespace monoglue
