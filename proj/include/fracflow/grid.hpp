#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fracflow/common.hpp"

namespace fracflow {

/// Far-field policy of a sampled graph function.
enum class Extension : std::uint8_t {
  Periodic,       // torus of period shape*h per axis
  CompactSupport, // zero outside the box
  AffineFarField, // a.x + b outside the box
};

std::string to_string(Extension e);
Extension extension_from_string(const std::string& s);

using ScalarField = std::function<double(const Point&)>;

/// Grid layout: d in {1,2}, one uniform spacing h for all axes.
struct GridSpec {
  int d = 1;
  double h = 1.0 / 64.0;
  Point origin{0.0, 0.0};
  std::array<int, 2> shape{65, 1};  // d=1 keeps shape[1] = 1
  Extension extension = Extension::CompactSupport;
  Point affine_a{0.0, 0.0};
  double affine_b = 0.0;

  void validate() const;
};

/// A sampled graph function u: R^d -> R with explicit far-field extension.
/// Values are immutable after construction; readers may share it across
/// threads. `analytic`, when set by sample(), is the exact field the samples
/// came from; only the slow oracle paths consult it.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridSpec spec, std::vector<double> values);

  const GridSpec& spec() const { return spec_; }
  int d() const { return spec_.d; }
  double h() const { return spec_.h; }
  Extension extension() const { return spec_.extension; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  int n(int axis) const { return spec_.shape[axis]; }

  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) * spec_.shape[1] + j;
  }
  double at(int i, int j = 0) const { return values_[index(i, j)]; }
  double at_flat(std::size_t idx) const { return values_[idx]; }
  Point node_coord(int i, int j = 0) const {
    return {spec_.origin[0] + i * spec_.h, spec_.origin[1] + j * spec_.h};
  }
  Point node_coord_flat(std::size_t idx) const {
    int i = static_cast<int>(idx) / spec_.shape[1];
    int j = static_cast<int>(idx) % spec_.shape[1];
    return node_coord(i, j);
  }

  /// Multilinear interpolation inside the box, extension policy outside.
  double value_at(const Point& x) const;

  /// Exact profile when available (set by sample()), interpolation otherwise.
  double exact_at(const Point& x) const { return analytic_ ? analytic_(x) : value_at(x); }
  bool has_analytic() const { return static_cast<bool>(analytic_); }

  /// Nodal value with out-of-range indices resolved through the extension
  /// (periodic wrap, zero, or the affine map). Backbone of the difference
  /// stencils.
  double ghost(int i, int j = 0) const;

  /// Interpolation stencil of x: up to 4 (flat index, weight) pairs for nodes
  /// inside the box. Weight falling on the extension is dropped for
  /// compact/affine policies (perturbations carry no far field).
  int scatter_weights(const Point& x, std::array<std::pair<std::size_t, double>, 4>& out) const;

  void set_analytic(ScalarField f) { analytic_ = std::move(f); }

  double box_diameter() const;

 private:
  GridSpec spec_;
  std::vector<double> values_;
  ScalarField analytic_;

  double interp_inside(double t0, double t1) const;
};

/// Holder exponent: gamma in (0,1) acts on the function itself, gamma in
/// (1,2) acts on gradient components as 1 + (gamma-1).
struct HolderExponent {
  double gamma = 0.5;
  void validate() const {
    if (!(gamma > 0.0 && gamma < 2.0) || gamma == 1.0)
      throw config_error("HolderExponent: gamma must lie in (0,2) \\ {1}");
  }
};

struct GradientField {
  std::vector<GridFunction> comp;  // d entries
};

/// Sample expr on the grid; node values are exact field evaluations.
/// Rejects non-finite samples and extension-incompatible boundary layers.
GridFunction sample(const ScalarField& expr, const GridSpec& spec);

double value_at(const GridFunction& g, const Point& x);

/// Second-order central differences; boundary nodes use ghost values from the
/// extension policy.
GradientField gradient(const GridFunction& g);

/// Directional second difference table: for d=1 the scalar u''; for d=2 the
/// (uxx, uyy, uxy) triple per node, for quadratic forms theta^T D2u theta.
struct HessianField {
  int d = 1;
  std::vector<double> xx, yy, xy;
  double quad_form(std::size_t idx, const Point& theta) const {
    if (d == 1) return xx[idx];
    return theta[0] * theta[0] * xx[idx] + theta[1] * theta[1] * yy[idx] +
           2.0 * theta[0] * theta[1] * xy[idx];
  }
};

HessianField hessian(const GridFunction& g);

double sup_norm(const GridFunction& g);

/// Max over lag-h node pairs per axis of |du|/h; discrete Lipschitz estimate.
double lip_norm(const GridFunction& g);

/// Lagged discrete Holder seminorm: max over node pairs with separation in
/// [h, max_lag*h]. For gamma > 1 it is applied to gradient components at
/// exponent gamma - 1.
double holder_seminorm(const GridFunction& g, HolderExponent gamma, int max_lag);

}  // namespace fracflow
