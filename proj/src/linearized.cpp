#include "fracflow/linearized.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "fracflow/parallel.hpp"
#include "polar_engine.hpp"

namespace fracflow {

namespace {

// A(x,r,th) = -G'(p_{u0}(x, x-r th)): symmetric positive kernel coefficient
// of DH(u0). Below r_cross the quotient switches to its Taylor model.
struct DHCoef {
  detail::PQuotientModel pm;
  FractionalOrder order;
  const detail::NodeDerivs* du0;
  int d;

  void pair(std::size_t idx, const Point& x, double r, const Point& th, double& Ap,
            double& Am) const {
    Ap = -cal_g_prime(pm.at(idx, x, r, th, -1.0), order);
    Am = -cal_g_prime(pm.at(idx, x, r, th, +1.0), order);
  }
  double even0(std::size_t idx, const Point&, const Point& th) const {
    return -cal_g_prime(du0->grad_dot(idx, th, d), order);
  }
  double oddr0(std::size_t idx, const Point&, const Point& th) const {
    return du0->hess.quad_form(idx, th) * cal_g_second(du0->grad_dot(idx, th, d), order);
  }
};

// mu(x,r,th) = -int over rho of G'(rho p_w + (1-rho) p_v) Q(z_rho)(x): the
// averaged kernel coefficient of B[w,v]; Q at the rho nodes is precomputed.
struct BCoef {
  detail::PQuotientModel pw, pv;
  FractionalOrder order;
  const detail::NodeDerivs* dw;
  const detail::NodeDerivs* dv;
  int d;
  std::vector<double> rho;      // nodes in [lo,hi]
  std::vector<double> rho_w;    // weights, sum = hi-lo
  std::vector<std::vector<double>> Q;  // [rho][node]

  void pair(std::size_t idx, const Point& x, double r, const Point& th, double& Ap,
            double& Am) const {
    const double pwm = pw.at(idx, x, r, th, -1.0), pwp = pw.at(idx, x, r, th, +1.0);
    const double pvm = pv.at(idx, x, r, th, -1.0), pvp = pv.at(idx, x, r, th, +1.0);
    Ap = Am = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
      const double q = rho_w[k] * Q[k][idx];
      Ap -= q * cal_g_prime(rho[k] * pwm + (1.0 - rho[k]) * pvm, order);
      Am -= q * cal_g_prime(rho[k] * pwp + (1.0 - rho[k]) * pvp, order);
    }
  }
  double even0(std::size_t idx, const Point&, const Point& th) const {
    const double gw = dw->grad_dot(idx, th, d), gv = dv->grad_dot(idx, th, d);
    double s = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k)
      s -= rho_w[k] * Q[k][idx] * cal_g_prime(rho[k] * gw + (1.0 - rho[k]) * gv, order);
    return s;
  }
  double oddr0(std::size_t idx, const Point&, const Point& th) const {
    const double gw = dw->grad_dot(idx, th, d), gv = dv->grad_dot(idx, th, d);
    const double hw = dw->hess.quad_form(idx, th), hv = dv->hess.quad_form(idx, th);
    double s = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
      const double g = rho[k] * gw + (1.0 - rho[k]) * gv;
      const double hq = rho[k] * hw + (1.0 - rho[k]) * hv;
      s += rho_w[k] * Q[k][idx] * cal_g_second(g, order) * hq;
    }
    return s;
  }
};

std::vector<double> q_field(const GradientField& gf, int d, std::size_t n) {
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    double gx = gf.comp[0].values()[i];
    double gy = d == 2 ? gf.comp[1].values()[i] : 0.0;
    q[i] = std::sqrt(1.0 + gx * gx + gy * gy);
  }
  return q;
}

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* who) {
  const auto& sa = a.spec();
  const auto& sb = b.spec();
  if (sa.d != sb.d || sa.h != sb.h || sa.shape != sb.shape || sa.origin != sb.origin ||
      sa.extension != sb.extension)
    throw config_error(std::string(who) + ": grid mismatch");
}

}  // namespace

GridFunction apply_DH(const GridFunction& u0, const GridFunction& w, const FractionalOrder& order,
                      const QuadratureSpec& spec, int threads) {
  require_same_grid(u0, w, "apply_DH");
  order.validate();
  spec.validate(u0.d());
  const auto t = detail::make_polar_tables(w, order, spec);
  const auto du0 = detail::make_node_derivs(u0);
  const auto dw = detail::make_node_derivs(w);
  DHCoef coef{{&u0, &du0.grad, &du0.hess, t.r0}, order, &du0, u0.d()};
  std::vector<double> out;
  detail::polar_raw_apply(w, dw, coef, t, threads, out);
  return GridFunction(w.spec(), std::move(out));
}

GridFunction apply_weighted_DH(const GridFunction& u0, const GridFunction& w,
                               const FractionalOrder& order, const QuadratureSpec& spec,
                               int threads) {
  require_same_grid(u0, w, "apply_weighted_DH");
  GridFunction kernel_part = apply_DH(u0, w, order, spec, threads);
  CurvatureField H0 = evaluate_H(u0, order, spec, threads);
  const auto g0 = gradient(u0);
  const auto gw = gradient(w);
  const int d = u0.d();
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double gx = g0.comp[0].values()[i], gy = d == 2 ? g0.comp[1].values()[i] : 0.0;
    double q = std::sqrt(1.0 + gx * gx + gy * gy);
    double gdot = gx * gw.comp[0].values()[i] + (d == 2 ? gy * gw.comp[1].values()[i] : 0.0);
    out[i] = q * kernel_part.values()[i] + H0.values.values()[i] * gdot / q;
  }
  return GridFunction(w.spec(), std::move(out));
}

struct BOperator::Impl {
  GridFunction w, v;
  FractionalOrder order;
  QuadratureSpec spec;
  RhoInterval interval;
  detail::NodeDerivs dw, dv;
  std::vector<double> rho, rho_w;
  std::vector<std::vector<double>> Q;
  detail::PolarTables tables;

  BCoef coef() const {
    return BCoef{{&w, &dw.grad, &dw.hess, tables.r0},
                 {&v, &dv.grad, &dv.hess, tables.r0},
                 order,
                 &dw,
                 &dv,
                 w.d(),
                 rho,
                 rho_w,
                 Q};
  }
};

BOperator build_B(const GridFunction& w, const GridFunction& v, const FractionalOrder& order,
                  const QuadratureSpec& spec, RhoInterval interval, int threads) {
  require_same_grid(w, v, "build_B");
  order.validate();
  spec.validate(w.d());
  if (!(interval.hi > interval.lo)) throw config_error("build_B: empty rho interval");

  auto impl = std::make_shared<BOperator::Impl>();
  impl->w = w;
  impl->v = v;
  impl->order = order;
  impl->spec = spec;
  impl->interval = interval;
  impl->dw = detail::make_node_derivs(w);
  impl->dv = detail::make_node_derivs(v);
  impl->tables = detail::make_polar_tables(w, order, spec);

  const auto& gl = gauss_legendre(8);
  const double mid = 0.5 * (interval.lo + interval.hi), half = 0.5 * (interval.hi - interval.lo);
  const int d = w.d();
  const std::size_t n = w.size();

  // intermediate states z_rho = rho w + (1-rho) v: Q and H fields per node
  std::vector<double> Vx(n, 0.0), Vy(n, 0.0);
  for (int k = 0; k < 8; ++k) {
    const double rho = mid + half * gl.nodes[k];
    const double wk = gl.weights[k] * half;
    impl->rho.push_back(rho);
    impl->rho_w.push_back(wk);

    std::vector<double> zvals(n);
    for (std::size_t i = 0; i < n; ++i)
      zvals[i] = rho * w.values()[i] + (1.0 - rho) * v.values()[i];
    GridSpec zspec = w.spec();
    if (zspec.extension == Extension::AffineFarField) {
      const auto& sw = w.spec();
      const auto& sv = v.spec();
      zspec.affine_a = {rho * sw.affine_a[0] + (1.0 - rho) * sv.affine_a[0],
                        rho * sw.affine_a[1] + (1.0 - rho) * sv.affine_a[1]};
      zspec.affine_b = rho * sw.affine_b + (1.0 - rho) * sv.affine_b;
    }
    GridFunction z(zspec, std::move(zvals));

    const auto gz = gradient(z);
    impl->Q.push_back(q_field(gz, d, n));

    QuadratureSpec hspec = spec;
    hspec.regularity_probe = false;
    CurvatureField Hz = evaluate_H(z, order, hspec, threads);
    for (std::size_t i = 0; i < n; ++i) {
      const double q = impl->Q.back()[i];
      const double hz = Hz.values.values()[i];
      Vx[i] += wk * gz.comp[0].values()[i] / q * hz;
      if (d == 2) Vy[i] += wk * gz.comp[1].values()[i] / q * hz;
    }
  }

  BOperator op;
  op.impl = impl;
  op.interval = interval;
  op.description = "B[w,v] kernel+drift, rho in [" + std::to_string(interval.lo) + "," +
                   std::to_string(interval.hi) + "]";

  GridSpec vspec = w.spec();
  vspec.extension = w.spec().extension;
  op.V.comp.emplace_back(vspec, std::move(Vx));
  if (d == 2) {
    GridSpec vspec2 = vspec;
    op.V.comp.emplace_back(vspec2, std::move(Vy));
  }

  auto impl_c = impl;  // keep alive inside the closure
  FractionalOrder ord = order;
  op.mu = [impl_c, ord](const Point& x, double r, const Point& theta) {
    // nearest node index for the derivative tables
    const auto& g = impl_c->w;
    const auto& s = g.spec();
    int i = static_cast<int>(std::lround((x[0] - s.origin[0]) / s.h));
    int j = s.d == 2 ? static_cast<int>(std::lround((x[1] - s.origin[1]) / s.h)) : 0;
    i = std::clamp(i, 0, s.shape[0] - 1);
    j = std::clamp(j, 0, s.shape[1] - 1);
    const std::size_t idx = g.index(i, j);
    BCoef c = impl_c->coef();
    if (r < impl_c->tables.r0) {
      // Taylor regime: evaluate through the quotient models
      double gw = impl_c->dw.grad_dot(idx, theta, s.d), gv = impl_c->dv.grad_dot(idx, theta, s.d);
      double hw = impl_c->dw.hess.quad_form(idx, theta), hv = impl_c->dv.hess.quad_form(idx, theta);
      double sum = 0.0;
      for (std::size_t k = 0; k < c.rho.size(); ++k) {
        double pm = c.rho[k] * (-gw + 0.5 * r * hw) + (1.0 - c.rho[k]) * (-gv + 0.5 * r * hv);
        sum -= c.rho_w[k] * c.Q[k][idx] * cal_g_prime(pm, ord);
      }
      return sum;
    }
    double Ap, Am;
    c.pair(idx, x, r, theta, Ap, Am);
    return Ap;
  };
  return op;
}

GridFunction BOperator::apply(const GridFunction& u, int threads) const {
  if (!impl) throw config_error("BOperator: empty");
  require_same_grid(impl->w, u, "BOperator::apply");
  const auto du = detail::make_node_derivs(u);
  BCoef coef = impl->coef();
  std::vector<double> out;
  detail::polar_raw_apply(u, du, coef, impl->tables, threads, out);
  // drift V . grad u (central differences, extension ghosts)
  const auto gu = gradient(u);
  const int d = u.d();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += V.comp[0].values()[i] * gu.comp[0].values()[i];
    if (d == 2) out[i] += V.comp[1].values()[i] * gu.comp[1].values()[i];
  }
  return GridFunction(u.spec(), std::move(out));
}

struct LinearOperatorMatrix::Factorization {
  double dt = -1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  double cond_estimate = 0.0;
};

std::vector<double> LinearOperatorMatrix::apply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_) throw config_error("LinearOperatorMatrix: size mismatch");
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    const double* row = a_.data() + static_cast<std::size_t>(i) * n_;
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<double> LinearOperatorMatrix::solve_shifted(double dt,
                                                        const std::vector<double>& rhs) const {
  if (static_cast<int>(rhs.size()) != n_) throw config_error("LinearOperatorMatrix: size mismatch");
  if (!fact_ || fact_->dt != dt) {
    Eigen::MatrixXd A(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        A(i, j) = (i == j ? 1.0 : 0.0) + dt * entry(i, j);
    auto f = std::make_shared<Factorization>();
    f->dt = dt;
    f->lu = Eigen::PartialPivLU<Eigen::MatrixXd>(A);
    const auto& U = f->lu.matrixLU();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i) {
      double d = std::abs(U(i, i));
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    f->cond_estimate = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
    if (!(dmin > 0.0) || !std::isfinite(f->cond_estimate) || f->cond_estimate > 1e14)
      throw numerical_error("step_imex: singular or ill-conditioned system, cond ~ " +
                            std::to_string(f->cond_estimate));
    fact_ = std::move(f);
  }
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n_);
  Eigen::VectorXd y = fact_->lu.solve(b);

  // relative residual guard
  Eigen::VectorXd r = b;
  for (int i = 0; i < n_; ++i) {
    double s = y(i);
    const double* row = a_.data() + static_cast<std::size_t>(i) * n_;
    double ls = 0.0;
    for (int j = 0; j < n_; ++j) ls += row[j] * y(j);
    r(i) -= s + dt * ls;
  }
  double rel = r.norm() / std::max(1e-300, b.norm());
  if (rel > 1e-10)
    throw numerical_error("step_imex: linear solve residual " + std::to_string(rel) +
                          " exceeds 1e-10, cond ~ " + std::to_string(fact_->cond_estimate));
  return std::vector<double>(y.data(), y.data() + n_);
}

double LinearOperatorMatrix::last_condition_estimate() const {
  return fact_ ? fact_->cond_estimate : 0.0;
}

LinearOperatorMatrix LinearOperatorMatrix::assemble(const BOperator& op,
                                                    const GridFunction& grid_like, int cap,
                                                    int threads) {
  if (!op.impl) throw config_error("assemble: empty operator");
  const std::size_t n = grid_like.size();
  if (n > static_cast<std::size_t>(cap))
    throw config_error("assemble_matrix: node count " + std::to_string(n) + " exceeds cap " +
                       std::to_string(cap));
  LinearOperatorMatrix m;
  m.n_ = static_cast<int>(n);
  m.a_.assign(n * n, 0.0);
  m.desc_ = op.description;

  BCoef coef = op.impl->coef();
  detail::polar_raw_scatter(grid_like, coef, op.impl->tables, threads, m.a_.data());

  // drift rows: V . central difference stencil
  const auto& s = grid_like.spec();
  const double i2h = 1.0 / (2.0 * s.h);
  const int n0 = s.shape[0], n1 = s.shape[1];
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      const std::size_t row = grid_like.index(i, j);
      double* mrow = m.a_.data() + row * n;
      auto add = [&](int ii, int jj, double wgt) {
        if (s.extension == Extension::Periodic) {
          ii = (ii % n0 + n0) % n0;
          jj = s.d == 2 ? (jj % n1 + n1) % n1 : 0;
        } else if (ii < 0 || ii >= n0 || (s.d == 2 && (jj < 0 || jj >= n1))) {
          return;
        }
        mrow[grid_like.index(ii, jj)] += wgt;
      };
      const double vx = op.V.comp[0].values()[row];
      add(i + 1, j, vx * i2h);
      add(i - 1, j, -vx * i2h);
      if (s.d == 2) {
        const double vy = op.V.comp[1].values()[row];
        add(i, j + 1, vy * i2h);
        add(i, j - 1, -vy * i2h);
      }
    }

  for (double v : m.a_)
    if (!std::isfinite(v)) throw numerical_error("assemble_matrix: non-finite entry");
  return m;
}

LinearOperatorMatrix assemble_matrix(const GridFunction& u0, const FractionalOrder& order,
                                     const QuadratureSpec& spec, int cap, int threads) {
  BOperator op = build_B(u0, u0, order, spec, RhoInterval{}, threads);
  op.description = "L0 = DH_w(u0) (= B[u0,u0])";
  return LinearOperatorMatrix::assemble(op, u0, cap, threads);
}

}  // namespace fracflow
