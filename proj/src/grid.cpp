#include "fracflow/grid.hpp"

#include <algorithm>
#include <cmath>

namespace fracflow {

std::string to_string(Extension e) {
  switch (e) {
    case Extension::Periodic: return "periodic";
    case Extension::CompactSupport: return "compact";
    case Extension::AffineFarField: return "affine";
  }
  return "?";
}

Extension extension_from_string(const std::string& s) {
  if (s == "periodic") return Extension::Periodic;
  if (s == "compact" || s == "compact-support") return Extension::CompactSupport;
  if (s == "affine" || s == "affine-far-field") return Extension::AffineFarField;
  throw config_error("unknown extension policy: " + s);
}

void GridSpec::validate() const {
  if (d != 1 && d != 2) throw config_error("GridSpec: d must be 1 or 2");
  if (!(h > 0.0)) throw config_error("GridSpec: h must be > 0");
  if (shape[0] < 3 || (d == 2 && shape[1] < 3))
    throw config_error("GridSpec: need at least 3 samples per axis");
  if (d == 1 && shape[1] != 1) throw config_error("GridSpec: d=1 requires shape[1] == 1");
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != static_cast<std::size_t>(spec_.shape[0]) * spec_.shape[1])
    throw config_error("GridFunction: value count does not match shape");
  for (double v : values_)
    if (!std::isfinite(v)) throw config_error("GridFunction: non-finite sample");
}

double GridFunction::box_diameter() const {
  double lx = (spec_.shape[0] - 1) * spec_.h;
  if (spec_.d == 1) return lx;
  double ly = (spec_.shape[1] - 1) * spec_.h;
  return std::hypot(lx, ly);
}

namespace {

// floor division wrap for periodic indexing
inline int wrap(int i, int n) {
  int m = i % n;
  return m < 0 ? m + n : m;
}

}  // namespace

double GridFunction::ghost(int i, int j) const {
  const int n0 = spec_.shape[0], n1 = spec_.shape[1];
  switch (spec_.extension) {
    case Extension::Periodic:
      return values_[index(wrap(i, n0), spec_.d == 2 ? wrap(j, n1) : 0)];
    case Extension::CompactSupport:
      if (i < 0 || i >= n0 || (spec_.d == 2 && (j < 0 || j >= n1))) return 0.0;
      return values_[index(i, j)];
    case Extension::AffineFarField:
      if (i < 0 || i >= n0 || (spec_.d == 2 && (j < 0 || j >= n1))) {
        Point x = node_coord(i, j);
        return spec_.affine_a[0] * x[0] + spec_.affine_a[1] * x[1] + spec_.affine_b;
      }
      return values_[index(i, j)];
  }
  return 0.0;
}

double GridFunction::value_at(const Point& x) const {
  const int n0 = spec_.shape[0], n1 = spec_.shape[1];
  const double h = spec_.h;

  if (spec_.extension == Extension::Periodic) {
    double t0 = (x[0] - spec_.origin[0]) / h;
    int i0 = static_cast<int>(std::floor(t0));
    double f0 = t0 - i0;
    int a = wrap(i0, n0), b = wrap(i0 + 1, n0);
    if (spec_.d == 1) return (1.0 - f0) * values_[a] + f0 * values_[b];
    double t1 = (x[1] - spec_.origin[1]) / h;
    int i1 = static_cast<int>(std::floor(t1));
    double f1 = t1 - i1;
    int c = wrap(i1, n1), e = wrap(i1 + 1, n1);
    double v00 = values_[index(a, c)], v01 = values_[index(a, e)];
    double v10 = values_[index(b, c)], v11 = values_[index(b, e)];
    return (1.0 - f0) * ((1.0 - f1) * v00 + f1 * v01) + f0 * ((1.0 - f1) * v10 + f1 * v11);
  }

  // bounded box policies
  double t0 = (x[0] - spec_.origin[0]) / h;
  bool outside = t0 < 0.0 || t0 > n0 - 1;
  double t1 = 0.0;
  if (spec_.d == 2) {
    t1 = (x[1] - spec_.origin[1]) / h;
    outside = outside || t1 < 0.0 || t1 > n1 - 1;
  }
  if (outside) {
    if (spec_.extension == Extension::CompactSupport) return 0.0;
    return spec_.affine_a[0] * x[0] + spec_.affine_a[1] * x[1] + spec_.affine_b;
  }
  return interp_inside(t0, t1);
}

double GridFunction::interp_inside(double t0, double t1) const {
  const int n0 = spec_.shape[0], n1 = spec_.shape[1];
  int i0 = std::min(static_cast<int>(t0), n0 - 2);
  double f0 = t0 - i0;
  if (spec_.d == 1) return (1.0 - f0) * values_[i0] + f0 * values_[i0 + 1];
  int i1 = std::min(static_cast<int>(t1), n1 - 2);
  double f1 = t1 - i1;
  double v00 = values_[index(i0, i1)], v01 = values_[index(i0, i1 + 1)];
  double v10 = values_[index(i0 + 1, i1)], v11 = values_[index(i0 + 1, i1 + 1)];
  return (1.0 - f0) * ((1.0 - f1) * v00 + f1 * v01) + f0 * ((1.0 - f1) * v10 + f1 * v11);
}

int GridFunction::scatter_weights(const Point& x,
                                  std::array<std::pair<std::size_t, double>, 4>& out) const {
  const int n0 = spec_.shape[0], n1 = spec_.shape[1];
  const double h = spec_.h;
  int count = 0;
  auto push = [&](int i, int j, double w) {
    if (w == 0.0) return;
    if (spec_.extension == Extension::Periodic) {
      out[count++] = {index(wrap(i, n0), spec_.d == 2 ? wrap(j, n1) : 0), w};
      return;
    }
    if (i < 0 || i >= n0 || (spec_.d == 2 && (j < 0 || j >= n1))) return;  // zero-extended
    out[count++] = {index(i, j), w};
  };

  double t0 = (x[0] - spec_.origin[0]) / h;
  if (spec_.extension != Extension::Periodic && (t0 < 0.0 || t0 > n0 - 1) && spec_.d == 1)
    return 0;
  int i0 = static_cast<int>(std::floor(t0));
  if (spec_.extension != Extension::Periodic) i0 = std::clamp(i0, 0, n0 - 2);
  double f0 = t0 - i0;
  if (spec_.d == 1) {
    push(i0, 0, 1.0 - f0);
    push(i0 + 1, 0, f0);
    return count;
  }
  double t1 = (x[1] - spec_.origin[1]) / h;
  if (spec_.extension != Extension::Periodic &&
      (t0 < 0.0 || t0 > n0 - 1 || t1 < 0.0 || t1 > n1 - 1))
    return 0;
  int i1 = static_cast<int>(std::floor(t1));
  if (spec_.extension != Extension::Periodic) i1 = std::clamp(i1, 0, n1 - 2);
  double f1 = t1 - i1;
  push(i0, i1, (1.0 - f0) * (1.0 - f1));
  push(i0, i1 + 1, (1.0 - f0) * f1);
  push(i0 + 1, i1, f0 * (1.0 - f1));
  push(i0 + 1, i1 + 1, f0 * f1);
  return count;
}

GridFunction sample(const ScalarField& expr, const GridSpec& spec) {
  spec.validate();
  std::vector<double> vals(static_cast<std::size_t>(spec.shape[0]) * spec.shape[1]);
  for (int i = 0; i < spec.shape[0]; ++i)
    for (int j = 0; j < spec.shape[1]; ++j) {
      Point x{spec.origin[0] + i * spec.h, spec.origin[1] + j * spec.h};
      double v = expr(x);
      if (!std::isfinite(v)) throw config_error("sample: non-finite field value");
      vals[static_cast<std::size_t>(i) * spec.shape[1] + j] = v;
    }
  GridFunction g(spec, std::move(vals));

  // boundary-layer invariants per extension policy
  auto boundary_check = [&](auto&& expect, double tol, const char* what) {
    const int n0 = spec.shape[0], n1 = spec.shape[1];
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n1; ++j) {
        bool edge = (i == 0 || i == n0 - 1) || (spec.d == 2 && (j == 0 || j == n1 - 1));
        if (!edge) continue;
        Point x{spec.origin[0] + i * spec.h, spec.origin[1] + j * spec.h};
        if (std::abs(g.at(i, j) - expect(x)) > tol)
          throw config_error(std::string("sample: boundary layer violates ") + what);
      }
  };
  if (spec.extension == Extension::CompactSupport)
    boundary_check([](const Point&) { return 0.0; }, 1e-12, "compact support");
  else if (spec.extension == Extension::AffineFarField)
    boundary_check(
        [&](const Point& x) {
          return spec.affine_a[0] * x[0] + spec.affine_a[1] * x[1] + spec.affine_b;
        },
        1e-8, "affine far field");

  g.set_analytic(expr);
  return g;
}

double value_at(const GridFunction& g, const Point& x) { return g.value_at(x); }

GradientField gradient(const GridFunction& g) {
  const auto& spec = g.spec();
  if (spec.shape[0] < 3 || (spec.d == 2 && spec.shape[1] < 3))
    throw config_error("gradient: need shape >= 3 per axis");
  GradientField out;
  const double inv2h = 1.0 / (2.0 * spec.h);
  for (int axis = 0; axis < spec.d; ++axis) {
    std::vector<double> vals(g.size());
    for (int i = 0; i < spec.shape[0]; ++i)
      for (int j = 0; j < spec.shape[1]; ++j) {
        double plus = axis == 0 ? g.ghost(i + 1, j) : g.ghost(i, j + 1);
        double minus = axis == 0 ? g.ghost(i - 1, j) : g.ghost(i, j - 1);
        vals[g.index(i, j)] = (plus - minus) * inv2h;
      }
    GridSpec cs = spec;
    if (spec.extension == Extension::AffineFarField) {
      cs.affine_a = {0.0, 0.0};
      cs.affine_b = spec.affine_a[axis];
    }
    GridFunction comp(cs, std::move(vals));
    out.comp.push_back(std::move(comp));
  }
  return out;
}

HessianField hessian(const GridFunction& g) {
  const auto& spec = g.spec();
  HessianField out;
  out.d = spec.d;
  const double invh2 = 1.0 / (spec.h * spec.h);
  out.xx.resize(g.size());
  if (spec.d == 2) {
    out.yy.resize(g.size());
    out.xy.resize(g.size());
  }
  for (int i = 0; i < spec.shape[0]; ++i)
    for (int j = 0; j < spec.shape[1]; ++j) {
      std::size_t idx = g.index(i, j);
      double c = g.at(i, j);
      out.xx[idx] = (g.ghost(i + 1, j) - 2.0 * c + g.ghost(i - 1, j)) * invh2;
      if (spec.d == 2) {
        out.yy[idx] = (g.ghost(i, j + 1) - 2.0 * c + g.ghost(i, j - 1)) * invh2;
        out.xy[idx] = (g.ghost(i + 1, j + 1) - g.ghost(i + 1, j - 1) - g.ghost(i - 1, j + 1) +
                       g.ghost(i - 1, j - 1)) *
                      0.25 * invh2;
      }
    }
  return out;
}

double sup_norm(const GridFunction& g) {
  double m = 0.0;
  for (double v : g.values()) m = std::max(m, std::abs(v));
  return m;
}

double lip_norm(const GridFunction& g) {
  const auto& spec = g.spec();
  const bool per = spec.extension == Extension::Periodic;
  double m = 0.0;
  const double invh = 1.0 / spec.h;
  for (int i = 0; i < spec.shape[0]; ++i)
    for (int j = 0; j < spec.shape[1]; ++j) {
      if (i + 1 < spec.shape[0])
        m = std::max(m, std::abs(g.at(i + 1, j) - g.at(i, j)) * invh);
      else if (per)
        m = std::max(m, std::abs(g.ghost(i + 1, j) - g.at(i, j)) * invh);
      if (spec.d == 2) {
        if (j + 1 < spec.shape[1])
          m = std::max(m, std::abs(g.at(i, j + 1) - g.at(i, j)) * invh);
        else if (per)
          m = std::max(m, std::abs(g.ghost(i, j + 1) - g.at(i, j)) * invh);
      }
    }
  return m;
}

namespace {

double holder_seminorm_raw(const GridFunction& g, double gamma, int max_lag) {
  const auto& spec = g.spec();
  const bool per = spec.extension == Extension::Periodic;
  double m = 0.0;
  if (spec.d == 1) {
    const int n = spec.shape[0];
    for (int lag = 1; lag <= std::min(max_lag, n - 1); ++lag) {
      double denom = std::pow(lag * spec.h, gamma);
      int imax = per ? n : n - lag;
      for (int i = 0; i < imax; ++i) {
        double d = per ? g.ghost(i + lag, 0) - g.at(i, 0) : g.at(i + lag, 0) - g.at(i, 0);
        m = std::max(m, std::abs(d) / denom);
      }
    }
    return m;
  }
  const int n0 = spec.shape[0], n1 = spec.shape[1];
  for (int l0 = 0; l0 <= max_lag; ++l0)
    for (int l1 = (l0 == 0 ? 1 : -max_lag); l1 <= max_lag; ++l1) {
      double sep = std::hypot(l0 * spec.h, l1 * spec.h);
      if (sep > max_lag * spec.h + 1e-15) continue;
      double denom = std::pow(sep, gamma);
      for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
          int i2 = i + l0, j2 = j + l1;
          double d;
          if (per) {
            d = g.ghost(i2, j2) - g.at(i, j);
          } else {
            if (i2 < 0 || i2 >= n0 || j2 < 0 || j2 >= n1) continue;
            d = g.at(i2, j2) - g.at(i, j);
          }
          m = std::max(m, std::abs(d) / denom);
        }
    }
  return m;
}

}  // namespace

double holder_seminorm(const GridFunction& g, HolderExponent gamma, int max_lag) {
  gamma.validate();
  if (max_lag < 1) throw config_error("holder_seminorm: max_lag must be >= 1");
  if (gamma.gamma < 1.0) return holder_seminorm_raw(g, gamma.gamma, max_lag);
  GradientField gf = gradient(g);
  double m = 0.0;
  for (const auto& comp : gf.comp)
    m = std::max(m, holder_seminorm_raw(comp, gamma.gamma - 1.0, max_lag));
  return m;
}

}  // namespace fracflow
