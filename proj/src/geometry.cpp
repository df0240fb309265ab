#include "monoglue/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace monoglue {

LinkSpec LinkSpec::round_s2(int l_max) {
  LinkSpec s;
  s.name = LinkName::RoundS2;
  s.volume = 4.0 * M_PI;
  for (int l = 0; l <= l_max; ++l) s.spectrum.push_back({double(l) * (l + 1), 2 * l + 1});
  return s;
}

LinkSpec LinkSpec::custom(double volume, std::vector<Eigen> spectrum) {
  LinkSpec s;
  s.name = LinkName::Custom;
  s.volume = volume;
  s.spectrum = std::move(spectrum);
  s.validate();
  return s;
}

void LinkSpec::validate() const {
  if (volume <= 0) throw std::invalid_argument("link volume must be positive");
  if (spectrum.empty()) throw std::invalid_argument("link spectrum is empty");
  if (spectrum.front().value != 0.0) throw std::invalid_argument("link spectrum must start at 0");
  for (size_t i = 0; i < spectrum.size(); ++i) {
    if (spectrum[i].value < 0) throw std::invalid_argument("negative link eigenvalue");
    if (spectrum[i].multiplicity < 1) throw std::invalid_argument("bad multiplicity");
    if (i > 0 && spectrum[i].value < spectrum[i - 1].value)
      throw std::invalid_argument("link spectrum must be nondecreasing");
  }
}

Mat3 Perturbation::eval(const Vec3& x) const {
  Mat3 h;
  if (type == PerturbationType::None || amplitude == 0.0) return h;
  double r2 = dot(x, x);
  double decay = std::pow(1.0 + r2, 0.5 * rate);  // ~ rho^rate, smooth at 0
  if (type == PerturbationType::Conformal) {
    double d = amplitude * decay;
    h[0][0] = h[1][1] = h[2][2] = d;
    return h;
  }
  // traceless xhat (x) xhat part, smoothly capped at the origin
  double r = std::sqrt(r2);
  double cap = r2 / (1.0 + r2);
  Vec3 xh = r > 0 ? (1.0 / r) * x : Vec3{0, 0, 1};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      h[i][j] = amplitude * decay * cap * (xh[i] * xh[j] - (i == j ? 1.0 / 3.0 : 0.0));
  return h;
}

ManifoldModel ManifoldModel::euclidean() {
  ManifoldModel m;
  m.kind = ManifoldKind::Euclidean3;
  m.rate = -1.0;
  return m;
}

ManifoldModel ManifoldModel::cone_perturbation(double nu, double amplitude, PerturbationType type) {
  ManifoldModel m;
  m.kind = ManifoldKind::ConePerturbation;
  m.rate = nu;
  m.perturbation.type = type;
  m.perturbation.amplitude = amplitude;
  m.perturbation.rate = nu;
  return m;
}

void ManifoldModel::validate() const {
  if (rate >= 0) throw std::invalid_argument("AC rate must be negative");
  if (compact_core_radius <= 0) throw std::invalid_argument("compact_core_radius must be positive");
  link.validate();
  if (kind == ManifoldKind::ConePerturbation && link.name == LinkName::Custom &&
      chart_min_radius <= 0)
    throw std::invalid_argument("custom links have no smooth filling; set chart_min_radius > 0");
  // Custom links feed the rate computation only; field solves check for the
  // round sphere themselves (anything else could carry b^2(X) != 0).
}

bool ManifoldModel::in_chart(const Vec3& x) const {
  if (kind == ManifoldKind::Euclidean3) return true;
  return norm(x) >= chart_min_radius;
}

Mat3 ManifoldModel::metric(const Vec3& x) const {
  if (!in_chart(x)) throw std::domain_error("point outside chart domain");
  Mat3 g = Mat3::identity();
  if (kind == ManifoldKind::Euclidean3) return g;
  Mat3 h = perturbation.eval(x);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g[i][j] += h[i][j];
  return g;
}

double ManifoldModel::conformal_factor(double r) const {
  if (kind == ManifoldKind::Euclidean3 || perturbation.type == PerturbationType::None) return 1.0;
  if (perturbation.type != PerturbationType::Conformal)
    throw std::logic_error("conformal_factor: model is not spherically symmetric");
  double d = perturbation.amplitude * std::pow(1.0 + r * r, 0.5 * perturbation.rate);
  return std::sqrt(1.0 + d);
}

bool ManifoldModel::spherically_symmetric() const {
  return kind == ManifoldKind::Euclidean3 || perturbation.spherically_symmetric();
}

namespace {

// 4th-order central difference of a matrix-valued function along axis i.
template <typename F>
Mat3 d4(const F& f, const Vec3& x, int i, double h) {
  Vec3 xp = x, xm = x, xpp = x, xmm = x;
  xp[i] += h; xm[i] -= h; xpp[i] += 2 * h; xmm[i] -= 2 * h;
  Mat3 fp = f(xp), fm = f(xm), fpp = f(xpp), fmm = f(xmm), r;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      r[a][b] = (8.0 * (fp[a][b] - fm[a][b]) - (fpp[a][b] - fmm[a][b])) / (12.0 * h);
  return r;
}

void christoffel_at(const ManifoldModel& model, const Vec3& x, double h, double gamma[3][3][3]) {
  Mat3 g = model.metric(x);
  Mat3 gi = inverse(g);
  Mat3 dg[3];
  auto mf = [&](const Vec3& p) { return model.metric(p); };
  for (int i = 0; i < 3; ++i) dg[i] = d4(mf, x, i, h);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int l = 0; l < 3; ++l)
          s += gi[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
        gamma[k][i][j] = 0.5 * s;
      }
}

}  // namespace

GeomSample sample_geometry(const ManifoldModel& model, const Vec3& x) {
  GeomSample s;
  s.x = x;
  s.rho = model.rho(x);
  s.g = model.metric(x);
  s.g_inv = inverse(s.g);
  double d = det(s.g);
  if (d <= 0) throw std::runtime_error("metric not positive definite at sample point");
  s.sqrt_det = std::sqrt(d);
  if (model.kind == ManifoldKind::Euclidean3) {
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s.gamma[k][i][j] = 0.0;
    return s;  // ricci stays zero
  }
  double h = 1e-4 * (1.0 + s.rho);
  christoffel_at(model, x, h, s.gamma);
  // Ric_ij = d_k G^k_ij - d_i G^k_kj + G^k_kl G^l_ij - G^k_il G^l_kj
  double dgamma[3][3][3][3];  // d_m Gamma^k_ij
  for (int m = 0; m < 3; ++m) {
    Vec3 xp = x, xm = x, xpp = x, xmm = x;
    xp[m] += h; xm[m] -= h; xpp[m] += 2 * h; xmm[m] -= 2 * h;
    double gp[3][3][3], gm[3][3][3], gpp[3][3][3], gmm[3][3][3];
    christoffel_at(model, xp, h, gp);
    christoffel_at(model, xm, h, gm);
    christoffel_at(model, xpp, h, gpp);
    christoffel_at(model, xmm, h, gmm);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          dgamma[m][k][i][j] =
              (8.0 * (gp[k][i][j] - gm[k][i][j]) - (gpp[k][i][j] - gmm[k][i][j])) / (12.0 * h);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double r = 0;
      for (int k = 0; k < 3; ++k) {
        r += dgamma[k][k][i][j] - dgamma[i][k][k][j];
        for (int l = 0; l < 3; ++l)
          r += s.gamma[k][k][l] * s.gamma[l][i][j] - s.gamma[k][i][l] * s.gamma[l][k][j];
      }
      s.ricci[i][j] = r;
    }
  return s;
}

std::vector<double> hodge_star(const Mat3& g, const std::vector<double>& comps, int degree) {
  double d = det(g);
  if (d <= 0) throw std::runtime_error("hodge_star: degenerate metric");
  double sq = std::sqrt(d);
  switch (degree) {
    case 0:
      return {comps.at(0) * sq};
    case 1: {
      Mat3 gi = inverse(g);
      Vec3 a{comps.at(0), comps.at(1), comps.at(2)};
      Vec3 up = mul(gi, a);
      return {sq * up[0], sq * up[1], sq * up[2]};
    }
    case 2: {
      Vec3 b{comps.at(0), comps.at(1), comps.at(2)};  // dual components
      Vec3 dn = mul(g, b);
      return {dn[0] / sq, dn[1] / sq, dn[2] / sq};
    }
    case 3:
      return {comps.at(0) / sq};
    default:
      throw std::invalid_argument("hodge_star: degree must be 0..3");
  }
}

std::vector<double> hodge_star(const ManifoldModel& model, const Vec3& x,
                               const std::vector<double>& comps, int degree) {
  return hodge_star(model.metric(x), comps, degree);
}

std::vector<double> critical_rates(const LinkSpec& link, double beta_lo, double beta_hi) {
  link.validate();
  if (beta_lo > beta_hi) return {};
  std::vector<double> rates;
  for (const auto& e : link.spectrum) {
    double disc = 1.0 + 4.0 * e.value;
    // (beta+1)(beta+2) = mu  =>  beta = (-3 +- sqrt(1+4 mu))/2
    double root;
    long long is = llround(std::sqrt(disc));
    if (is * is == llround(disc) && std::abs(disc - double(is) * double(is)) < 1e-9) {
      root = double(is);  // exact for integer spectra (round sphere: 1+4l(l+1) = (2l+1)^2)
    } else {
      root = std::sqrt(disc);
    }
    for (double b : {(-3.0 + root) / 2.0, (-3.0 - root) / 2.0}) {
      if (b >= beta_lo - 1e-12 && b <= beta_hi + 1e-12) rates.push_back(b);
    }
  }
  std::sort(rates.begin(), rates.end());
  rates.erase(std::unique(rates.begin(), rates.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              rates.end());
  return rates;
}

}  // namespace monoglue
