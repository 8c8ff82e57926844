#pragma once

#include <functional>
#include <vector>

#include "fracflow/grid.hpp"
#include "fracflow/kernels.hpp"
#include "fracflow/quadrature.hpp"

namespace fracflow {

/// Discretization of the polar-form singular integrals.
struct QuadratureSpec {
  double r_inner = 0.0;   // near-field Taylor cutoff, units of h; 0 = auto (4 in 1-D, 6 in 2-D)
  double r_outer = 0.0;   // truncation radius; 0 = auto (64 * box diameter)
  int n_radial = 32;      // log-spaced radial nodes per decade
  int n_angular = 32;     // equispaced nodes on S^1 (d = 2)
  TailMode tail_mode = TailMode::GradBound;
  bool regularity_probe = true;  // second-difference slope test before evaluating

  void validate(int d) const;
  double resolve_r_inner(int d) const { return r_inner > 0.0 ? r_inner : (d == 1 ? 4.0 : 6.0); }
  double resolve_r_outer(const GridFunction& u) const;
};

struct CurvatureField {
  GridFunction values;
  double tail_estimate = 0.0;
  QuadratureSpec spec;
};

/// H(u) on every node: radial log-spaced quadrature of the symmetrized second
/// difference against the kernel weight, Taylor form below r_inner*h, tail
/// bound beyond r_outer. theta pairs are evaluated explicitly, so the
/// principal value cancels inside each pair.
CurvatureField evaluate_H(const GridFunction& u, const FractionalOrder& order,
                          const QuadratureSpec& spec, int threads = 0);

/// Weighted operator sqrt(1+|grad u|^2) * H(u).
CurvatureField evaluate_weighted_H(const GridFunction& u, const FractionalOrder& order,
                                   const QuadratureSpec& spec, int threads = 0);

/// Pointwise evaluation used by oracle cross-checks; x must be a node.
double evaluate_H_at_node(const GridFunction& u, std::size_t node, const FractionalOrder& order,
                          const QuadratureSpec& spec);

/// Coefficient closure mu(x, r, theta) for the generic even/odd integrators;
/// must be finite and evaluable for all r >= 0 (smooth down to r = 0).
using PolarCoefficient = std::function<double(const Point& x, double r, const Point& theta)>;

/// I_e v = int over S^{d-1} x (0,inf) of delta_e v * coeff * r^{-2-alpha},
/// delta_e v = (2v(x) - v(x+r th) - v(x-r th)) / 2.
GridFunction integrate_even(const GridFunction& v, const PolarCoefficient& coeff,
                            const FractionalOrder& order, const QuadratureSpec& spec,
                            int threads = 0);

/// I_o v with delta_o v = v(x) - v(x-r th). The coefficient must vanish at
/// r = 0 (checked on sample nodes; rejected otherwise) or the integral has no
/// principal-value meaning.
GridFunction integrate_odd(const GridFunction& v, const PolarCoefficient& coeff,
                           const FractionalOrder& order, const QuadratureSpec& spec,
                           int threads = 0, bool assert_vanishing_at_r0 = true);

namespace detail {

/// Half-sphere angular table; every entry stands for the {theta,-theta} pair.
struct AngularRule {
  std::vector<Point> theta;
  std::vector<double> weight;
};

AngularRule make_angular_rule(int d, int n_angular);

/// Shared node-derivative bundle for the Taylor near field.
struct NodeDerivs {
  GradientField grad;
  HessianField hess;
  double grad_dot(std::size_t idx, const Point& th, int d) const {
    double g = grad.comp[0].values()[idx] * th[0];
    if (d == 2) g += grad.comp[1].values()[idx] * th[1];
    return g;
  }
};

NodeDerivs make_node_derivs(const GridFunction& g);

/// Raises numerical_error when sampled second differences grow too fast under
/// lag refinement (profile below C^{1+alpha} at grid scale).
void regularity_slope_test(const GridFunction& u, const FractionalOrder& order);

}  // namespace detail

}  // namespace fracflow
