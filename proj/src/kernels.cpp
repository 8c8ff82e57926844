#include "fracflow/kernels.hpp"

#include <cmath>

#include "fracflow/quadrature.hpp"

namespace fracflow {

namespace {

constexpr int kGlOrder = 16;

// one (1+t^2)^{-(N+alpha)/2} evaluation
inline double kernel_weight(double t, double expo) { return std::pow(1.0 + t * t, expo); }

// integral of the kernel weight over [0, P], P >= 0, dyadic panels past 1
double g_integral(double P, double expo) {
  if (P == 0.0) return 0.0;
  auto f = [expo](double t) { return kernel_weight(t, expo); };
  double a = 0.0, b = std::min(P, 1.0);
  double sum = gl_integrate(f, a, b, kGlOrder);
  while (b < P) {
    a = b;
    b = std::min(P, 2.0 * b);
    sum += gl_integrate(f, a, b, kGlOrder);
  }
  return sum;
}

}  // namespace

double cal_g(double p, const FractionalOrder& order) {
  double s = p < 0.0 ? -1.0 : 1.0;
  return -2.0 * s * g_integral(std::abs(p), order.kernel_exponent());
}

double cal_g_prime(double p, const FractionalOrder& order) {
  return -2.0 * kernel_weight(p, order.kernel_exponent());
}

double cal_g_second(double p, const FractionalOrder& order) {
  double na = order.ambient_dim + order.alpha;
  return 2.0 * na * p * std::pow(1.0 + p * p, -0.5 * na - 1.0);
}

double p_quotient(const GridFunction& u, const Point& x, const Point& y) {
  if (x[0] == y[0] && x[1] == y[1]) throw config_error("p_quotient: x == y");
  double dist = u.d() == 1 ? std::abs(y[0] - x[0]) : std::hypot(y[0] - x[0], y[1] - x[1]);
  return (u.value_at(y) - u.value_at(x)) / dist;
}

double kernel_K(const GridFunction& u, const Point& x, const Point& z,
                const FractionalOrder& order) {
  double r = u.d() == 1 ? std::abs(z[0]) : std::hypot(z[0], z[1]);
  if (r == 0.0) throw config_error("kernel_K: z == 0");
  Point xm{x[0] - z[0], x[1] - z[1]};
  Point xp{x[0] + z[0], x[1] + z[1]};
  double ux = u.value_at(x);
  double p1 = (u.value_at(xm) - ux) / r;
  double p2 = (u.value_at(xp) - ux) / r;
  return kernel_K_from_quotients(p1, p2, order);
}

double kernel_K_from_quotients(double p1, double p2, const FractionalOrder& order) {
  const double expo = order.kernel_exponent();
  auto integrand = [&](double t) {
    double q = t * p1 - (1.0 - t) * p2;
    return kernel_weight(q, expo);
  };
  if (std::max(std::abs(p1), std::abs(p2)) <= 10.0)
    return gl_integrate(integrand, 0.0, 1.0, kGlOrder);
  // steep quotients concentrate the integrand near the zero crossing
  return adaptive_simpson(integrand, 0.0, 1.0, 1e-13);
}

double extension_A(const GridFunction& u, const KernelPoint& kp, const FractionalOrder& order) {
  kp.validate(u.d());
  if (kp.r == 0.0) {
    GradientField gf = gradient(u);
    Point g{gf.comp[0].value_at(kp.x), u.d() == 2 ? gf.comp[1].value_at(kp.x) : 0.0};
    double gth = dot(g, kp.theta);
    return std::pow(1.0 + gth * gth, order.kernel_exponent());
  }
  Point z{kp.r * kp.theta[0], kp.r * kp.theta[1]};
  return kernel_K(u, kp.x, z, order);
}

std::string to_string(TailMode m) {
  switch (m) {
    case TailMode::None: return "none";
    case TailMode::SupBound: return "sup-bound";
    case TailMode::GradBound: return "grad-bound";
  }
  return "?";
}

TailMode tail_mode_from_string(const std::string& s) {
  if (s == "none") return TailMode::None;
  if (s == "sup" || s == "sup-bound") return TailMode::SupBound;
  if (s == "grad" || s == "grad-bound") return TailMode::GradBound;
  throw config_error("unknown tail mode: " + s);
}

double tail_bound(const FractionalOrder& order, double R, double sup_u_or_grad, TailMode mode) {
  if (!(R > 0.0)) throw config_error("tail_bound: R must be > 0");
  double sigma = sphere_measure(order.d());
  switch (mode) {
    case TailMode::None:
      return 0.0;
    case TailMode::SupBound:
      return 4.0 * sup_u_or_grad * sigma * std::pow(R, -1.0 - order.alpha) / (1.0 + order.alpha);
    case TailMode::GradBound:
      return 2.0 * sup_u_or_grad * sigma * std::pow(R, -order.alpha) / order.alpha;
  }
  return 0.0;
}

}  // namespace fracflow
