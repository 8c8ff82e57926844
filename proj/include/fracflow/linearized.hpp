#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fracflow/curvature.hpp"
#include "fracflow/grid.hpp"

namespace fracflow {

/// DH(u0)[w](x) = -PV int (w(x)-w(y)) |x-y|^{-N-alpha} G'(p_{u0}(x,y)) dy,
/// realized through the even/odd polar split so every integrand is absolutely
/// integrable.
GridFunction apply_DH(const GridFunction& u0, const GridFunction& w, const FractionalOrder& order,
                      const QuadratureSpec& spec, int threads = 0);

/// DH(u0)[w] of the weighted operator:
///   Q(u0) * DH(u0)[w] + H(u0) * (grad u0 . grad w) / Q(u0).
GridFunction apply_weighted_DH(const GridFunction& u0, const GridFunction& w,
                               const FractionalOrder& order, const QuadratureSpec& spec,
                               int threads = 0);

/// Averaging interval of the two-point operator B[w,v]. The default [0,1]
/// matches B[w,v]u = int_0^1 DH_w(rho w + (1-rho) v)[u] drho; the endpoints
/// are exposed because both conventions appear in the literature.
struct RhoInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Kernel coefficient mu(x,r,theta) > 0 and bounded drift V of B[w,v].
/// mu is exposed as a closure for inspection/tests; the drift is a grid
/// vector field. Intermediate curvature fields at the rho nodes are
/// precomputed at construction.
struct BOperator {
  PolarCoefficient mu;
  GradientField V;  // d components on the shared grid
  RhoInterval interval;
  std::string description;

  /// Action on sampled w: kernel part + V . grad.
  GridFunction apply(const GridFunction& u, int threads = 0) const;

  // internals shared with assemble_matrix
  struct Impl;
  std::shared_ptr<const Impl> impl;
};

BOperator build_B(const GridFunction& w, const GridFunction& v, const FractionalOrder& order,
                  const QuadratureSpec& spec, RhoInterval interval = {}, int threads = 0);

/// Dense discretization of B[w,v] (or of DH(u0) = B[u0,u0]) on the grid's
/// nodal hat basis under the grid extension policy; perturbations are
/// zero-extended for compact/affine far fields and wrapped for periodic.
class LinearOperatorMatrix {
 public:
  LinearOperatorMatrix() = default;

  int n() const { return n_; }
  const std::vector<double>& data() const { return a_; }  // row-major n x n
  double entry(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::string& description() const { return desc_; }

  std::vector<double> apply(const std::vector<double>& x) const;

  /// Solve (I + dt*L) y = rhs with a cached LU factorization per dt.
  std::vector<double> solve_shifted(double dt, const std::vector<double>& rhs) const;

  /// Estimated condition number of the last factorized shifted matrix.
  double last_condition_estimate() const;

  static LinearOperatorMatrix assemble(const BOperator& op, const GridFunction& grid_like,
                                       int cap = 16384, int threads = 0);

 private:
  int n_ = 0;
  std::vector<double> a_;
  std::string desc_;
  struct Factorization;
  mutable std::shared_ptr<Factorization> fact_;
};

/// Convenience: matrix of the frozen linearization L0 = DH_w(u0) = B[u0,u0].
LinearOperatorMatrix assemble_matrix(const GridFunction& u0, const FractionalOrder& order,
                                     const QuadratureSpec& spec, int cap = 16384, int threads = 0);

}  // namespace fracflow
