#include "fracflow/profiles.hpp"

#include <cmath>
#include <set>

namespace fracflow {

namespace {

GridSpec periodic_spec(int d, double h) {
  GridSpec s;
  s.d = d;
  s.h = h;
  s.origin = {0.0, 0.0};
  int n = std::max(8, static_cast<int>(std::lround(2.0 * M_PI / h)));
  s.shape = {n, d == 2 ? n : 1};
  s.extension = Extension::Periodic;
  return s;
}

GridSpec box_spec(int d, double h, double L, Extension ext) {
  GridSpec s;
  s.d = d;
  s.h = h;
  s.origin = {-L, d == 2 ? -L : 0.0};
  int n = static_cast<int>(std::lround(2.0 * L / h)) + 1;
  s.shape = {n, d == 2 ? n : 1};
  s.extension = ext;
  return s;
}

}  // namespace

bool is_known_profile(const std::string& name) {
  static const std::set<std::string> known{"zero",         "affine",       "cosine",
                                           "gaussian-bump", "sum-of-bumps", "rough-cusp"};
  return known.count(name) > 0;
}

Profile make_profile(const std::string& name, int d, double h, double box_halfwidth,
                     const ProfileParams& params) {
  if (d != 1 && d != 2) throw config_error("make_profile: d must be 1 or 2");
  Profile p;
  p.name = name;

  if (name == "zero") {
    p.field = [](const Point&) { return 0.0; };
    p.grid = box_spec(d, h, box_halfwidth, Extension::CompactSupport);
    return p;
  }
  if (name == "affine") {
    Point a = params.slope;
    if (d == 1) a[1] = 0.0;
    double b = params.offset;
    p.field = [a, b](const Point& x) { return a[0] * x[0] + a[1] * x[1] + b; };
    p.grid = box_spec(d, h, box_halfwidth, Extension::AffineFarField);
    p.grid.affine_a = a;
    p.grid.affine_b = b;
    return p;
  }
  if (name == "cosine") {
    double eps = params.amplitude;
    p.grid = periodic_spec(d, h);
    // wavenumber matched to the actual grid period, so the samples wrap
    // seamlessly even when h does not divide 2*pi
    double k0 = 2.0 * M_PI / (p.grid.shape[0] * h);
    if (d == 1) {
      p.field = [eps, k0](const Point& x) { return eps * std::cos(k0 * x[0]); };
    } else {
      p.field = [eps, k0](const Point& x) {
        return eps * std::cos(k0 * x[0]) * std::cos(k0 * x[1]);
      };
    }
    return p;
  }
  if (name == "gaussian-bump") {
    double A = params.amplitude, w = params.width;
    Point c = params.center;
    p.field = [A, w, c, d](const Point& x) {
      double r2 = (x[0] - c[0]) * (x[0] - c[0]);
      if (d == 2) r2 += (x[1] - c[1]) * (x[1] - c[1]);
      return A * std::exp(-r2 / (2.0 * w * w));
    };
    p.grid = box_spec(d, h, box_halfwidth, Extension::CompactSupport);
    return p;
  }
  if (name == "sum-of-bumps") {
    double A = params.amplitude, w = params.width;
    p.field = [A, w, d](const Point& x) {
      auto bump = [&](double cx, double amp, double wid) {
        double r2 = (x[0] - cx) * (x[0] - cx);
        if (d == 2) r2 += x[1] * x[1];
        return amp * std::exp(-r2 / (2.0 * wid * wid));
      };
      return bump(-1.5, 0.8 * A, w) + bump(1.4, 0.5 * A, 0.75 * w);
    };
    p.grid = box_spec(d, h, box_halfwidth, Extension::CompactSupport);
    return p;
  }
  if (name == "rough-cusp") {
    double A = params.amplitude, beta = params.beta;
    double sigma = params.sigma > 0.0 ? params.sigma : 2.0 * h;
    double w = std::max(1.0, 0.3 * box_halfwidth);
    p.field = [A, beta, sigma, w, d](const Point& x) {
      double r2 = x[0] * x[0] + (d == 2 ? x[1] * x[1] : 0.0);
      double window = std::exp(-(r2 * r2) / (w * w * w * w));
      return -A * window * std::pow(r2 + sigma * sigma, 0.5 * (1.0 + beta));
    };
    p.grid = box_spec(d, h, box_halfwidth, Extension::CompactSupport);
    return p;
  }
  throw config_error("unknown profile: " + name);
}

GridFunction sample_profile(const Profile& p) { return sample(p.field, p.grid); }

}  // namespace fracflow
