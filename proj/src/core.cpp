#include "monoglue/core.hpp"

#include <algorithm>

namespace monoglue {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 samples");
  double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
  }
  double d = n * sxx - sx * sx;
  LineFit f;
  f.b = (n * sxy - sx * sy) / d;
  f.a = (sy - f.b * sx) / n;
  double ss = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (f.a + f.b * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

double richardson_to_zero(const std::vector<double>& eps, const std::vector<double>& val, int order) {
  // Neville tableau for polynomial extrapolation in eps to eps = 0.
  size_t n = std::min({eps.size(), val.size(), size_t(order + 1)});
  if (n == 0) throw std::invalid_argument("richardson_to_zero: empty input");
  std::vector<double> t(val.begin(), val.begin() + n);
  for (size_t level = 1; level < n; ++level) {
    for (size_t i = 0; i + level < n; ++i) {
      double x0 = eps[i], x1 = eps[i + level];
      t[i] = (x0 * t[i + 1] - x1 * t[i]) / (x0 - x1);
    }
  }
  return t[0];
}

namespace {
double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb,
               double fm, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, fa, b, fb, fm, whole, tol, 48);
}

}  // namespace monoglue
