#include "monoglue/abelian.hpp"

#include <algorithm>
#include <cmath>

#include "monoglue/poisson.hpp"

namespace monoglue {

int PointCharges::total_charge() const {
  int k = 0;
  for (int c : charges) k += c;
  return k;
}

double PointCharges::min_pairwise_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j) d = std::min(d, norm(points[i] - points[j]));
  return d;
}

void PointCharges::validate() const {
  if (points.size() != charges.size()) throw std::invalid_argument("points/charges size mismatch");
  for (int c : charges)
    if (c < 1) throw std::invalid_argument("charges must be positive integers");
  if (points.size() > 1 && min_pairwise_distance() <= 0)
    throw std::invalid_argument("coincident points are not supported");
}

// ---------------------------------------------------------------------------
// normalized quintic-type bump: density b(r) = C (1 - (r/eps)^2)^3, and its
// exact potential with Delta psi = 2 pi b, psi = -1/(2r) outside the bump.

double bump_density(double r, double eps) {
  double u = r / eps;
  if (u >= 1.0) return 0.0;
  double c = 315.0 / (64.0 * M_PI * eps * eps * eps);
  double s = 1.0 - u * u;
  return c * s * s * s;
}

namespace {
double bump_cumulative(double u) {  // M(r)/1 : enclosed fraction at u = r/eps
  if (u >= 1.0) return 1.0;
  double u2 = u * u, u3 = u2 * u;
  return (315.0 / 16.0) * (u3 / 3.0 - 3.0 * u3 * u2 / 5.0 + 3.0 * u3 * u2 * u2 / 7.0 -
                           u3 * u3 * u3 / 9.0);
}
double bump_P(double u) {  // antiderivative of M(t)/(2 t^2) in u, 1/eps factored out
  double u2 = u * u;
  return (315.0 / 32.0) * (u2 / 6.0 - 3.0 * u2 * u2 / 20.0 + u2 * u2 * u2 / 14.0 -
                           u2 * u2 * u2 * u2 / 72.0);
}
}  // namespace

double bump_potential(double r, double eps) {
  if (r >= eps) return -0.5 / r;
  double u = r / eps;
  return -0.5 / eps - (bump_P(1.0) - bump_P(u)) / eps;
}

double bump_potential_d(double r, double eps) {
  if (r >= eps) return 0.5 / (r * r);
  if (r <= 0) return 0.0;
  return 0.5 * bump_cumulative(r / eps) / (r * r);
}

// ---------------------------------------------------------------------------

double DiracData::well_distance(const Vec3& x, int i) const {
  Vec3 v = x - charges.points[i];
  double r = norm(v);
  if (model.kind == ManifoldKind::Euclidean3) return r;
  if (radial && charges.points.size() == 1 && norm(charges.points[0]) == 0.0)
    return radial->s_of_r(r);
  // 3-point Gauss along the segment through the conformal factor
  static const double gx[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
  static const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  double acc = 0;
  for (int q = 0; q < 3; ++q) {
    Vec3 p = charges.points[i] + gx[q] * v;
    acc += gw[q] * model.conformal_factor(norm(p));
  }
  return acc * r;
}

double DiracData::phi(const Vec3& x) const {
  switch (method) {
    case DiracMethod::ClosedForm: {
      double v = charges.mass;
      for (size_t i = 0; i < charges.points.size(); ++i)
        v -= 0.5 * charges.charges[i] / std::max(norm(x - charges.points[i]), 1e-300);
      return v;
    }
    case DiracMethod::Radial:
      return radial->phi_r(std::max(norm(x), 1e-300));
    case DiracMethod::Variational: {
      double v = numeric->eval(x);
      for (size_t i = 0; i < charges.points.size(); ++i) {
        double cp = model.conformal_factor(norm(charges.points[i]));
        v += charges.charges[i] / cp *
             bump_potential(norm(x - charges.points[i]), source_radius);
      }
      return v;
    }
    default:
      throw std::logic_error("unresolved dirac method");
  }
}

Vec3 DiracData::grad_phi(const Vec3& x) const {
  switch (method) {
    case DiracMethod::ClosedForm: {
      Vec3 g{0, 0, 0};
      for (size_t i = 0; i < charges.points.size(); ++i) {
        Vec3 v = x - charges.points[i];
        double r = std::max(norm(v), 1e-300);
        g += (0.5 * charges.charges[i] / (r * r * r)) * v;
      }
      return g;
    }
    case DiracMethod::Radial: {
      double r = std::max(norm(x), 1e-300);
      return (radial->dphi_r(r) / r) * x;
    }
    case DiracMethod::Variational: {
      Vec3 g = numeric->grad(x);
      for (size_t i = 0; i < charges.points.size(); ++i) {
        Vec3 v = x - charges.points[i];
        double r = std::max(norm(v), 1e-300);
        double cp = model.conformal_factor(norm(charges.points[i]));
        g += (charges.charges[i] / cp * bump_potential_d(r, source_radius) / r) * v;
      }
      return g;
    }
    default:
      throw std::logic_error("unresolved dirac method");
  }
}

Vec3 DiracData::F_dual(const Vec3& x) const {
  // F = * d phi; dual components sqrt(g) g^{-1} grad phi
  Mat3 g = model.metric(x);
  Vec3 gp = grad_phi(x);
  Vec3 up = mul(inverse(g), gp);
  return std::sqrt(det(g)) * up;
}

DiracData solve_dirac_potential(const ManifoldModel& model, const PointCharges& charges,
                                const DiracOptions& opts) {
  model.validate();
  charges.validate();
  for (const Vec3& p : charges.points)
    if (!model.in_chart(p)) throw std::domain_error("charge point outside chart domain");
  if (model.kind == ManifoldKind::ConePerturbation && model.link.name != LinkName::RoundS2)
    throw std::invalid_argument("field solves require a round 2-sphere link (b^2(X) = 0)");

  DiracData d;
  d.model = model;
  d.charges = charges;
  d.string_axes.assign(charges.points.size(), Vec3{0, 0, 1});
  if (charges.points.size() > 1) {
    for (size_t i = 0; i < charges.points.size(); ++i) {
      Vec3 away{0, 0, 0};
      for (size_t j = 0; j < charges.points.size(); ++j)
        if (j != i) away += charges.points[i] - charges.points[j];
      double n = norm(away);
      if (n > 0) d.string_axes[i] = (1.0 / n) * away;
    }
  }

  DiracMethod method = opts.method;
  bool at_origin = charges.points.size() == 1 && norm(charges.points[0]) == 0.0;
  if (method == DiracMethod::Auto) {
    if (model.kind == ManifoldKind::Euclidean3) method = DiracMethod::ClosedForm;
    else if (model.spherically_symmetric() && at_origin) method = DiracMethod::Radial;
    else method = DiracMethod::Variational;
  }
  if (method == DiracMethod::ClosedForm && model.kind != ManifoldKind::Euclidean3)
    throw std::invalid_argument("closed form is exact on Euclidean3 only");
  if (method == DiracMethod::Radial && !(model.spherically_symmetric() && at_origin))
    throw std::invalid_argument("radial method needs one charge at the origin of a symmetric model");
  d.method = method;

  if (method == DiracMethod::Radial || method == DiracMethod::ClosedForm) {
    if (model.spherically_symmetric())
      d.radial = std::make_shared<RadialHarmonic>(model, charges.total_charge(), charges.mass);
  }
  if (method == DiracMethod::Variational) {
    if (!model.spherically_symmetric() && model.kind != ManifoldKind::Euclidean3)
      throw std::invalid_argument("variational solver supports conformal metrics only");
    double eps = opts.source_radius;
    double dmin = charges.points.size() > 1 ? charges.min_pairwise_distance()
                                            : std::numeric_limits<double>::infinity();
    eps = std::min(eps, 0.3 * dmin);
    d.source_radius = eps;
    auto conf = [model](const Vec3& x) { return model.conformal_factor(norm(x)); };
    // bump normalizations over the curved volume
    std::vector<double> zg(charges.points.size(), 1.0);
    for (size_t i = 0; i < charges.points.size(); ++i) {
      const Vec3 p = charges.points[i];
      zg[i] = 4.0 * M_PI *
              integrate(
                  [&](double r) {
                    // angular average of c^3 over the sphere |x-p| = r
                    double acc = 0;
                    int nq = 6;
                    for (int a = 0; a < nq; ++a)
                      for (int b = 0; b < 2 * nq; ++b) {
                        double th = M_PI * (a + 0.5) / nq, ps = M_PI * b / nq;
                        Vec3 x = p + Vec3{r * std::sin(th) * std::cos(ps),
                                          r * std::sin(th) * std::sin(ps), r * std::cos(th)};
                        double c = conf(x);
                        acc += c * c * c * std::sin(th);
                      }
                    acc *= (M_PI / nq) * (M_PI / nq) / (2.0 * M_PI) * 0.5 * 2.0;
                    return bump_density(r, eps) * r * r * acc;
                  },
                  0.0, eps, 1e-10);
    }
    auto source = [model, charges, eps, zg, conf](const Vec3& x) {
      // S = 2 pi sum_i k_i [ b_g - c^-2 b_E / c(p_i) ] - c^-2 grad(ln c) . grad(sum k psi)
      double c = conf(x);
      double S = 0;
      Vec3 gpsi{0, 0, 0};
      for (size_t i = 0; i < charges.points.size(); ++i) {
        Vec3 v = x - charges.points[i];
        double r = norm(v);
        double cp = model.conformal_factor(norm(charges.points[i]));
        double b = bump_density(r, eps);
        S += 2.0 * M_PI * charges.charges[i] * (b / zg[i] - b / (c * c * cp));
        if (r > 1e-14)
          gpsi += (charges.charges[i] / cp * bump_potential_d(r, eps) / r) * v;
      }
      // grad ln c (radial)
      double rr = norm(x);
      double h = 1e-5 * (1.0 + rr);
      double dlc = (std::log(model.conformal_factor(rr + h)) -
                    std::log(model.conformal_factor(std::max(rr - h, 0.0)))) /
                   (h + std::min(rr, h));
      Vec3 glc = rr > 1e-14 ? (dlc / rr) * x : Vec3{0, 0, 0};
      S -= dot(glc, gpsi) / (c * c);
      return S;
    };
    int k = charges.total_charge();
    double m = charges.mass;
    auto bc = [model, charges, k, m, eps](const Vec3& x) {
      double v = m - 2.0 * M_PI * k / (model.link.volume * norm(x));
      for (size_t i = 0; i < charges.points.size(); ++i) {
        double cp = model.conformal_factor(norm(charges.points[i]));
        v -= charges.charges[i] / cp * bump_potential(norm(x - charges.points[i]), eps);
      }
      return v;
    };
    SphericalPoisson::Params sp;
    sp.r_min = opts.outer_radius * 1e-12 + 0.0;  // set below
    double pmin = std::numeric_limits<double>::infinity();
    for (const auto& p : charges.points) pmin = std::min(pmin, norm(p));
    sp.r_min = at_origin || pmin < 1e-12 ? 0.02 : std::min(0.2 * pmin, 0.5);
    sp.r_max = opts.outer_radius;
    sp.n_r = opts.n_r;
    sp.n_theta = opts.n_theta;
    sp.n_psi = opts.n_psi;
    sp.cg_rtol = opts.cg_rtol;
    sp.cg_max_iter = opts.cg_max_iter;
    d.numeric = std::make_shared<SphericalPoisson>(sp, conf, source, bc);
    d.numeric->solve();
    d.solver_residual = d.numeric->achieved_residual();
  }
  // point constants
  d.c.resize(charges.points.size(), 0.0);
  for (size_t i = 0; i < charges.points.size(); ++i)
    if (charges.charges[i] == 1) d.c[i] = extract_point_constant(d, int(i));
  return d;
}

double extract_point_constant(const DiracData& dirac, int i) {
  const auto& ch = dirac.charges;
  if (ch.charges.at(i) != 1)
    throw std::invalid_argument("point constants are defined for charge-1 wells");
  double r0 = 0.25;
  if (ch.points.size() > 1) r0 = std::min(r0, 0.25 * ch.min_pairwise_distance());
  if (dirac.method == DiracMethod::Variational)
    r0 = std::max(r0, 1.2 * dirac.source_radius);  // stay outside the smoothed core
  const Vec3 p = ch.points[i];
  int nt = 12, np = 24;
  std::vector<double> eps_list, val_list;
  for (int lev = 0; lev < 4; ++lev) {
    double r = r0 / double(1 << lev);
    if (dirac.method == DiracMethod::Variational && r < 1.05 * dirac.source_radius) break;
    double acc = 0, wsum = 0;
    for (int a = 0; a < nt; ++a) {
      double th = M_PI * (a + 0.5) / nt;
      for (int b = 0; b < np; ++b) {
        double ps = 2.0 * M_PI * b / np;
        Vec3 x = p + Vec3{r * std::sin(th) * std::cos(ps), r * std::sin(th) * std::sin(ps),
                          r * std::cos(th)};
        double w = std::sin(th);
        acc += w * (dirac.phi(x) + 0.5 / dirac.well_distance(x, i));
        wsum += w;
      }
    }
    eps_list.push_back(r);
    val_list.push_back(acc / wsum);
  }
  if (eps_list.size() < 2) return val_list.empty() ? 0.0 : val_list[0] - ch.mass;
  double lim = richardson_to_zero(eps_list, val_list, int(eps_list.size()) - 1);
  return lim - ch.mass;
}

double flux(const DiracData& dirac, const Vec3& center, double radius, int n_theta, int n_psi) {
  for (size_t i = 0; i < dirac.charges.points.size(); ++i) {
    double dr = std::abs(norm(dirac.charges.points[i] - center) - radius);
    if (dr < 1e-9) throw std::domain_error("flux sphere passes through a singular point");
  }
  // Gauss-Legendre in cos(theta)
  std::vector<double> gx(n_theta), gw(n_theta);
  {
    // Newton iteration for Legendre nodes
    for (int k = 0; k < n_theta; ++k) {
      double x = std::cos(M_PI * (k + 0.75) / (n_theta + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = x;
        for (int l = 2; l <= n_theta; ++l) {
          double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
          p0 = p1; p1 = p2;
        }
        double dp = n_theta * (x * p1 - p0) / (x * x - 1);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      gx[k] = x;
      double p0 = 1, p1 = x;
      for (int l = 2; l <= n_theta; ++l) {
        double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
        p0 = p1; p1 = p2;
      }
      double dp = n_theta * (x * p1 - p0) / (x * x - 1);
      gw[k] = 2.0 / ((1 - x * x) * dp * dp);
    }
  }
  double acc = 0;
  for (int a = 0; a < n_theta; ++a) {
    double ct = gx[a], st = std::sqrt(1 - ct * ct);
    for (int b = 0; b < n_psi; ++b) {
      double ps = 2.0 * M_PI * b / n_psi;
      Vec3 nrm{st * std::cos(ps), st * std::sin(ps), ct};
      Vec3 x = center + radius * nrm;
      acc += gw[a] * dot(dirac.F_dual(x), nrm);
    }
  }
  return acc * radius * radius * (2.0 * M_PI / n_psi);
}

Vec3 dirac_connection(const DiracData& dirac, Patch patch, const Vec3& x) {
  if (dirac.model.kind == ManifoldKind::ConePerturbation) {
    bool at_origin = dirac.charges.points.size() == 1 && norm(dirac.charges.points[0]) == 0.0;
    if (!(dirac.model.spherically_symmetric() && at_origin))
      throw std::invalid_argument("two-patch potentials on curved models need a centered well");
  }
  double sgn = (patch == Patch::North) ? 1.0 : -1.0;
  Vec3 A{0, 0, 0};
  for (size_t i = 0; i < dirac.charges.points.size(); ++i) {
    Vec3 v = x - dirac.charges.points[i];
    double r = norm(v);
    if (r < 1e-300) throw std::domain_error("dirac_connection: at a singular point");
    const Vec3& ax = dirac.string_axes[i];
    double ct = dot(v, ax) / r;
    // local frame perpendicular to the axis
    Vec3 e1 = cross(ax, std::abs(ax[2]) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0});
    e1 = (1.0 / norm(e1)) * e1;
    Vec3 e2 = cross(ax, e1);
    double px = dot(v, e1), py = dot(v, e2);
    double rho2 = px * px + py * py;
    if (rho2 < 1e-28) {
      if (sgn * ct < 0) throw std::domain_error("dirac_connection: point on the excluded ray");
      continue;  // on the regular ray the potential vanishes
    }
    // d psi = (-py e1 + px e2)/rho^2 in coordinates
    Vec3 dpsi = (1.0 / rho2) * (cross(ax, v));
    A += (0.5 * dirac.charges.charges[i] * (sgn - ct)) * dpsi;
  }
  if (!dirac.twist.zero) A += dirac.twist.one_form(x);
  return A;
}

DiracData apply_flat_twist(const DiracData& dirac, const std::function<Vec3(const Vec3&)>& twist,
                           int validation_samples, double tol, unsigned seed) {
  // closedness check by sampled curl
  Rng rng(seed);
  double scale = 0;
  double worst = 0;
  for (int s = 0; s < validation_samples; ++s) {
    Vec3 x{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    double h = 1e-4;
    Vec3 curl;
    for (int i = 0; i < 3; ++i) {
      int j = (i + 1) % 3, k = (i + 2) % 3;
      Vec3 xp = x, xm = x;
      xp[j] += h; xm[j] -= h;
      double djk = (twist(xp)[k] - twist(xm)[k]) / (2 * h);
      xp = x; xm = x;
      xp[k] += h; xm[k] -= h;
      double dkj = (twist(xp)[j] - twist(xm)[j]) / (2 * h);
      curl[i] = djk - dkj;
    }
    worst = std::max(worst, norm(curl));
    scale = std::max(scale, norm(twist(x)));
  }
  if (worst > tol * std::max(1.0, scale))
    throw std::invalid_argument("flat twist is not closed: sampled |d alpha| = " +
                                std::to_string(worst));
  DiracData d = dirac;
  d.twist.one_form = twist;
  d.twist.zero = false;
  return d;
}

MinimumHiggsReport minimum_higgs_check(const DiracData& dirac, double m0) {
  if (m0 <= 0) throw std::invalid_argument("minimum_higgs_check: m0 must be positive");
  MinimumHiggsReport rep;
  rep.epsilon = std::sqrt(10.0 / (8.0 * m0));
  rep.min_value = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec3& x) {
    for (size_t i = 0; i < dirac.charges.points.size(); ++i)
      if (dirac.well_distance(x, i) < rep.epsilon) return;
    double v = dirac.phi(x);
    if (v < rep.min_value) { rep.min_value = v; rep.argmin = x; }
  };
  // boundary spheres (where the maximum principle puts the minimum), a few
  // larger shells, segments between wells, and far samples
  const int nt = 24, np = 48;
  for (size_t i = 0; i < dirac.charges.points.size(); ++i) {
    for (double f : {1.0001, 1.25, 1.7, 2.5, 4.0, 7.0}) {
      double r = rep.epsilon * f;
      for (int a = 0; a < nt; ++a)
        for (int b = 0; b < np; ++b) {
          double th = M_PI * (a + 0.5) / nt, ps = 2.0 * M_PI * b / np;
          consider(dirac.charges.points[i] +
                   Vec3{r * std::sin(th) * std::cos(ps), r * std::sin(th) * std::sin(ps),
                        r * std::cos(th)});
        }
    }
  }
  for (size_t i = 0; i < dirac.charges.points.size(); ++i)
    for (size_t j = i + 1; j < dirac.charges.points.size(); ++j)
      for (int s = 1; s < 40; ++s)
        consider(dirac.charges.points[i] +
                 (s / 40.0) * (dirac.charges.points[j] - dirac.charges.points[i]));
  for (double r : {2.0, 5.0, 12.0, 30.0})
    for (int a = 0; a < nt; ++a)
      for (int b = 0; b < np; ++b) {
        double th = M_PI * (a + 0.5) / nt, ps = 2.0 * M_PI * b / np;
        consider(Vec3{r * std::sin(th) * std::cos(ps), r * std::sin(th) * std::sin(ps),
                      r * std::cos(th)});
      }
  rep.pass = rep.min_value >= 0.5 * m0;
  return rep;
}

}  // namespace monoglue
