#include "fracflow/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fracflow {

namespace {

GaussLegendre compute_gl(int n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration from the Chebyshev-like initial guess.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
  return it->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b, int order) {
  const auto& rule = gauss_legendre(order);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                            double fb, double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, fa, m, fm, flm);
  double right = simpson(m, fm, b, fb, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson(a, fa, b, fb, fm);
  return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

RadialRule make_radial_rule(double r0, double r1, int nodes_per_decade) {
  if (!(r0 > 0.0) || !(r1 > r0)) throw std::invalid_argument("make_radial_rule: need 0 < r0 < r1");
  if (nodes_per_decade < 4) nodes_per_decade = 4;

  const double s0 = std::log(r0), s1 = std::log(r1);
  const double decades = (s1 - s0) / std::log(10.0);
  // quarter-decade panels, GL order sized so a decade carries ~nodes_per_decade
  const int panels = std::max(1, static_cast<int>(std::ceil(4.0 * decades)));
  const int order = std::max(2, (nodes_per_decade + 3) / 4);
  const auto& gl = gauss_legendre(order);

  RadialRule rule;
  rule.r.reserve(static_cast<std::size_t>(panels) * order);
  rule.w.reserve(static_cast<std::size_t>(panels) * order);
  for (int p = 0; p < panels; ++p) {
    double sa = s0 + (s1 - s0) * p / panels;
    double sb = s0 + (s1 - s0) * (p + 1) / panels;
    double mid = 0.5 * (sa + sb), half = 0.5 * (sb - sa);
    for (int i = 0; i < order; ++i) {
      double s = mid + half * gl.nodes[i];
      double r = std::exp(s);
      rule.r.push_back(r);
      rule.w.push_back(gl.weights[i] * half * r);  // dr = r ds
    }
  }
  return rule;
}

}  // namespace fracflow
