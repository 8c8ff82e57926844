#pragma once

#include "fracflow/common.hpp"
#include "fracflow/grid.hpp"

namespace fracflow {

/// G(p) = -integral_{-p}^{p} (1+t^2)^{-(N+alpha)/2} dt. Odd, bounded by the
/// full-line integral.
double cal_g(double p, const FractionalOrder& order);

/// G'(p) = -2 (1+p^2)^{-(N+alpha)/2}; even, G'(0) = -2.
double cal_g_prime(double p, const FractionalOrder& order);

/// G''(p) = 2 (N+alpha) p (1+p^2)^{-(N+alpha)/2 - 1}; odd.
double cal_g_second(double p, const FractionalOrder& order);

/// Difference quotient p_u(x,y) = (u(y)-u(x)) / |x-y|. Rejects x == y.
double p_quotient(const GridFunction& u, const Point& x, const Point& y);

/// Kernel weight K_u(x,z) = integral_0^1 (1 + (t p_u(x,x-z) - (1-t) p_u(x,x+z))^2)^{-(N+alpha)/2} dt.
/// Values lie in (0,1]; rejects z = 0.
double kernel_K(const GridFunction& u, const Point& x, const Point& z, const FractionalOrder& order);

/// Same weight from precomputed quotients p1 = p_u(x,x-z), p2 = p_u(x,x+z).
double kernel_K_from_quotients(double p1, double p2, const FractionalOrder& order);

/// Extension map A_u(x,r,theta) = K_u(x, r theta), continued to r = 0 by
/// (1 + (grad u(x).theta)^2)^{-(N+alpha)/2}.
double extension_A(const GridFunction& u, const KernelPoint& kp, const FractionalOrder& order);

enum class TailMode : std::uint8_t { None, SupBound, GradBound };

std::string to_string(TailMode m);
TailMode tail_mode_from_string(const std::string& s);

/// Closed-form truncation bound for the second-difference integral beyond
/// radius R:
///   sup  mode: 4 ||u||_inf  sigma_{d-1} R^{-1-alpha} / (1+alpha)
///   grad mode: 2 ||grad u||_inf sigma_{d-1} R^{-alpha} / alpha
double tail_bound(const FractionalOrder& order, double R, double sup_u_or_grad, TailMode mode);

namespace detail {

/// Difference quotient p_u(x, x + s*r*theta) evaluated against the sample
/// grid for r >= r_cross, and by the second-order Taylor model
/// s*grad.theta + (r/2) theta^T D2u theta below it, where sampled quotients
/// are interpolation noise. grad/hess are nodal derivative tables of u and
/// idx the flat node index of x.
struct PQuotientModel {
  const GridFunction* u = nullptr;
  const GradientField* grad = nullptr;
  const HessianField* hess = nullptr;
  double r_cross = 0.0;

  double at(std::size_t idx, const Point& x, double r, const Point& theta, double sign) const {
    if (r >= r_cross) {
      Point y{x[0] + sign * r * theta[0], x[1] + sign * r * theta[1]};
      return (u->value_at(y) - u->at_flat(idx)) / r;
    }
    double g = grad->comp[0].values()[idx] * theta[0];
    if (u->d() == 2) g += grad->comp[1].values()[idx] * theta[1];
    return sign * g + 0.5 * r * hess->quad_form(idx, theta);
  }
};

}  // namespace detail

}  // namespace fracflow
