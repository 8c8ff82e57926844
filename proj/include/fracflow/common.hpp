#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracflow {

using Point = std::array<double, 2>;  // d=1 uses [x, 0]

/// Configuration / input validation failure (CLI exit code 2).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical abort: blow-up guards, singular solves, unresolved integrals
/// (CLI exit code 3).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Order of the nonlocal operator: alpha in (0,1), ambient dimension N = d+1.
struct FractionalOrder {
  double alpha = 0.5;
  int ambient_dim = 2;

  int d() const { return ambient_dim - 1; }
  /// Exponent -(N+alpha)/2 shared by the kernel weight family.
  double kernel_exponent() const { return -0.5 * (ambient_dim + alpha); }

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw config_error("FractionalOrder: alpha must lie in (0,1), got " + std::to_string(alpha));
    if (ambient_dim != 2 && ambient_dim != 3)
      throw config_error("FractionalOrder: ambient_dim must be 2 or 3");
  }
};

/// (x, r, theta) argument triple of the polar kernel maps. For d = 1 theta is
/// stored as [+-1, 0].
struct KernelPoint {
  Point x{0.0, 0.0};
  double r = 0.0;
  Point theta{1.0, 0.0};

  void validate(int d) const {
    if (r < 0.0) throw config_error("KernelPoint: r must be >= 0");
    double n2 = theta[0] * theta[0] + theta[1] * theta[1];
    if (std::abs(n2 - 1.0) > 1e-12) throw config_error("KernelPoint: |theta| must be 1");
    if (d == 1 && theta[1] != 0.0) throw config_error("KernelPoint: d=1 requires theta in {-1,+1}");
  }
};

/// Surface measure of S^{d-1}: 2 points for d=1, circle length for d=2.
inline double sphere_measure(int d) { return d == 1 ? 2.0 : 2.0 * M_PI; }

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Point& a) { return std::hypot(a[0], a[1]); }

}  // namespace fracflow
