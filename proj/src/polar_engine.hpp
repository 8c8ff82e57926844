#pragma once

// Shared polar quadrature engine behind evaluate_H, the even/odd integrators,
// the linearizations and the matrix assembly. Radial nodes are log-spaced
// Gauss-Legendre panels on [r_inner*h, r_outer]; the [0, r_inner*h] near field
// is integrated in closed Taylor form; theta runs over half-sphere pairs with
// both signs evaluated explicitly, which cancels the principal value inside
// each pair.

#include <cmath>
#include <vector>

#include "fracflow/curvature.hpp"
#include "fracflow/grid.hpp"
#include "fracflow/parallel.hpp"
#include "fracflow/quadrature.hpp"

namespace fracflow::detail {

struct PolarTables {
  AngularRule ang;
  std::vector<double> r;    // radial nodes
  std::vector<double> rw;   // weight * r^{-2-alpha}
  double r0 = 0.0;          // near-field cutoff r_inner*h
  double near_c = 0.0;      // r0^{1-alpha} / (1-alpha)
  double r_outer = 0.0;
};

inline PolarTables make_polar_tables(const GridFunction& u, const FractionalOrder& order,
                                     const QuadratureSpec& spec) {
  PolarTables t;
  t.ang = make_angular_rule(u.d(), spec.n_angular);
  t.r0 = spec.resolve_r_inner(u.d()) * u.h();
  t.r_outer = spec.resolve_r_outer(u);
  if (t.r_outer <= t.r0)
    throw config_error("QuadratureSpec: r_outer must exceed r_inner*h");
  RadialRule rr = make_radial_rule(t.r0, t.r_outer, spec.n_radial);
  t.r = rr.r;
  t.rw.resize(rr.r.size());
  for (std::size_t k = 0; k < rr.r.size(); ++k)
    t.rw[k] = rr.w[k] * std::pow(rr.r[k], -2.0 - order.alpha);
  t.near_c = std::pow(t.r0, 1.0 - order.alpha) / (1.0 - order.alpha);
  return t;
}

// Coefficient concept for the raw kernel form
//   sum over pairs of A(x,r,th)(v(x)-v(x-r th)) + A(x,r,-th)(v(x)-v(x+r th)):
//   pair()   -> A at both signs
//   even0()  -> A(x,0,th)            (must equal A(x,0,-th))
//   oddr0()  -> d/dr [A(th)-A(-th)] at r=0
template <class Coef>
void polar_raw_apply(const GridFunction& v, const NodeDerivs& dv, const Coef& coef,
                     const PolarTables& t, int threads, std::vector<double>& out) {
  const int d = v.d();
  out.assign(v.size(), 0.0);
  parallel_for(v.size(), threads, [&](std::size_t idx) {
    const Point x = v.node_coord_flat(idx);
    const double vx = v.at_flat(idx);
    double acc = 0.0;
    for (std::size_t a = 0; a < t.ang.theta.size(); ++a) {
      const Point th = t.ang.theta[a];
      double sum = 0.0;
      for (std::size_t k = 0; k < t.r.size(); ++k) {
        const double r = t.r[k];
        Point xm{x[0] - r * th[0], x[1] - r * th[1]};
        Point xp{x[0] + r * th[0], x[1] + r * th[1]};
        double Ap, Am;
        coef.pair(idx, x, r, th, Ap, Am);
        sum += t.rw[k] * (Ap * (vx - v.value_at(xm)) + Am * (vx - v.value_at(xp)));
      }
      const double quad = dv.hess.quad_form(idx, th);
      const double grad = dv.grad_dot(idx, th, d);
      sum += t.near_c * (-coef.even0(idx, x, th) * quad + coef.oddr0(idx, x, th) * grad);
      acc += t.ang.weight[a] * sum;
    }
    out[idx] = acc;
  });
}

// Even form: sum over pairs of delta_e v * (mu(th)+mu(-th)), delta_e halved.
template <class Coef>
void polar_even_apply(const GridFunction& v, const NodeDerivs& dv, const Coef& coef,
                      const PolarTables& t, int threads, std::vector<double>& out) {
  out.assign(v.size(), 0.0);
  parallel_for(v.size(), threads, [&](std::size_t idx) {
    const Point x = v.node_coord_flat(idx);
    const double vx = v.at_flat(idx);
    double acc = 0.0;
    for (std::size_t a = 0; a < t.ang.theta.size(); ++a) {
      const Point th = t.ang.theta[a];
      double sum = 0.0;
      for (std::size_t k = 0; k < t.r.size(); ++k) {
        const double r = t.r[k];
        Point xm{x[0] - r * th[0], x[1] - r * th[1]};
        Point xp{x[0] + r * th[0], x[1] + r * th[1]};
        double de = vx - 0.5 * (v.value_at(xm) + v.value_at(xp));
        sum += t.rw[k] * de * coef.even_pair(idx, x, r, th);
      }
      sum -= t.near_c * 0.5 * dv.hess.quad_form(idx, th) * coef.even_pair0(idx, x, th);
      acc += t.ang.weight[a] * sum;
    }
    out[idx] = acc;
  });
}

// Dense row scatter of the raw form under the zero-extended (or wrapped)
// nodal hat basis. matrix is row-major n x n, pre-zeroed.
template <class Coef>
void polar_raw_scatter(const GridFunction& g, const Coef& coef, const PolarTables& t, int threads,
                       double* matrix) {
  const std::size_t n = g.size();
  const int d = g.d();
  const double h = g.h();
  parallel_for(n, threads, [&](std::size_t row) {
    double* mrow = matrix + row * n;
    const Point x = g.node_coord_flat(row);
    std::array<std::pair<std::size_t, double>, 4> st;
    const int i0 = static_cast<int>(row) / g.spec().shape[1];
    const int j0 = static_cast<int>(row) % g.spec().shape[1];

    auto col = [&](int i, int j) -> double* {
      const int n0 = g.spec().shape[0], n1 = g.spec().shape[1];
      if (g.extension() == Extension::Periodic) {
        i = (i % n0 + n0) % n0;
        if (d == 2) j = (j % n1 + n1) % n1;
        else j = 0;
        return mrow + g.index(i, j);
      }
      if (i < 0 || i >= n0 || (d == 2 && (j < 0 || j >= n1))) return nullptr;
      return mrow + g.index(i, j);
    };

    for (std::size_t a = 0; a < t.ang.theta.size(); ++a) {
      const Point th = t.ang.theta[a];
      const double wa = t.ang.weight[a];
      for (std::size_t k = 0; k < t.r.size(); ++k) {
        const double r = t.r[k];
        double Ap, Am;
        coef.pair(row, x, r, th, Ap, Am);
        const double wp = wa * t.rw[k] * Ap;
        const double wm = wa * t.rw[k] * Am;
        mrow[row] += wp + wm;
        Point xm{x[0] - r * th[0], x[1] - r * th[1]};
        Point xp{x[0] + r * th[0], x[1] + r * th[1]};
        int c = g.scatter_weights(xm, st);
        for (int s = 0; s < c; ++s) mrow[st[s].first] -= wp * st[s].second;
        c = g.scatter_weights(xp, st);
        for (int s = 0; s < c; ++s) mrow[st[s].first] -= wm * st[s].second;
      }

      // near field: -A0 * theta^T D2 theta + Ao_r * grad.theta on stencils
      const double cE = -t.near_c * wa * coef.even0(row, x, th);
      const double cO = t.near_c * wa * coef.oddr0(row, x, th);
      const double ih2 = 1.0 / (h * h), i2h = 1.0 / (2.0 * h);
      auto add = [&](int di, int dj, double w) {
        if (double* p = col(i0 + di, j0 + dj)) *p += w;
      };
      if (d == 1) {
        add(-1, 0, cE * ih2 - cO * i2h);
        add(0, 0, -2.0 * cE * ih2);
        add(1, 0, cE * ih2 + cO * i2h);
      } else {
        const double c2 = th[0] * th[0], s2 = th[1] * th[1], cs = th[0] * th[1];
        add(-1, 0, cE * c2 * ih2 - cO * th[0] * i2h);
        add(1, 0, cE * c2 * ih2 + cO * th[0] * i2h);
        add(0, -1, cE * s2 * ih2 - cO * th[1] * i2h);
        add(0, 1, cE * s2 * ih2 + cO * th[1] * i2h);
        add(0, 0, -2.0 * (c2 + s2) * cE * ih2);
        const double cxy = cE * 2.0 * cs * 0.25 * ih2;
        add(1, 1, cxy);
        add(-1, -1, cxy);
        add(1, -1, -cxy);
        add(-1, 1, -cxy);
      }
    }
  });
}

}  // namespace fracflow::detail
