#pragma once

#include <vector>

#include "fracflow/curvature.hpp"
#include "fracflow/grid.hpp"

namespace fracflow::oracle {

/// Brute-force evaluation with a certified error estimate; slow by design,
/// used only as ground truth in tests and calibration.
struct OracleResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::string method;
};

/// Subgraph E_u = {(x,y) : y < u(x)} with the evaluation point on its graph.
struct SubgraphSet {
  const GridFunction* u = nullptr;
  Point x{0.0, 0.0};
  double R_set = 8.0;

  void validate() const {
    if (!u) throw config_error("SubgraphSet: missing graph function");
    if (!(R_set > 0.0)) throw config_error("SubgraphSet: R_set must be > 0");
  }
};

struct SetOracleOptions {
  int max_depth = 14;     // cell subdivision cap
  int gl_order = 4;       // tensor Gauss-Legendre order per resolved cell
  double inner_radius = 0.0;  // 0 = auto (h/2)
};

/// Set-based principal value: integrate the indicator difference with the
/// tangent half space subtracted (its PV vanishes by antisymmetry), cells
/// resolved against graph and plane by recursive subdivision, plus certified
/// inner-ball and tail bounds.
OracleResult direct_H_set(const SubgraphSet& s, const FractionalOrder& order,
                          const SetOracleOptions& opt = {});

/// Graph-form PV integral of G(p_u) |x-y|^{-(N-1+alpha)}, symmetrized so the
/// paired integrand is absolutely convergent; adaptive radial quadrature.
OracleResult direct_H_graph(const GridFunction& u, const Point& x, const FractionalOrder& order,
                            double R, double rel_tol = 1e-9);

enum class LambdaPartition : std::uint8_t { A, B };

/// lambda(alpha) = int_R (2 - 2 cos z) |z|^{-2-alpha} dz, the amplitude of
/// DH(0)[cos] in d = 1: power series near zero, oscillatory panels in the
/// middle, repeated integration by parts for the certified tail. Two
/// partitions are provided as mutual checks.
OracleResult lambda_alpha(const FractionalOrder& order,
                          LambdaPartition partition = LambdaPartition::A);

struct FdLinearizationResult {
  std::vector<double> eps;
  std::vector<double> err;  // ||(H(u0+eps w)-H(u0))/eps - DH(u0)[w]||_inf
  double slope = 0.0;       // log-log least squares fit
  bool monotone = true;
};

/// Finite-difference check of the linearization; weighted = true compares
/// against the weighted operator pair instead.
FdLinearizationResult fd_linearization(const GridFunction& u0, const GridFunction& w,
                                       const FractionalOrder& order, const QuadratureSpec& spec,
                                       const std::vector<double>& eps_list, bool weighted = false,
                                       int threads = 0);

}  // namespace fracflow::oracle
