#pragma once

#include <functional>
#include <vector>

namespace fracflow {

/// Gauss-Legendre rule on [-1,1]; nodes/weights computed once per order and
/// cached (Newton on the Legendre recurrence, deterministic).
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int order);

/// Integrate f over [a,b] with a fixed-order Gauss-Legendre rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b, int order);

/// Adaptive Simpson with absolute tolerance; used by oracles and fallback
/// paths, never in the main polar engine.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 40);

/// Radial quadrature table for integrals from r0 to r1 of smooth-times-power
/// integrands: panels log-spaced, Gauss-Legendre in log r per panel. Weights
/// already include the dr = r d(log r) factor.
struct RadialRule {
  std::vector<double> r;
  std::vector<double> w;
};

/// nodes_per_decade controls resolution (>= 4); panels are quarter-decade.
RadialRule make_radial_rule(double r0, double r1, int nodes_per_decade);

}  // namespace fracflow
