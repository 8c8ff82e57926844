#include "fracflow/flow.hpp"

#include <algorithm>
#include <cmath>

namespace fracflow {

std::string to_string(Scheme s) { return s == Scheme::Explicit ? "explicit" : "imex"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "explicit") return Scheme::Explicit;
  if (s == "imex") return Scheme::Imex;
  throw config_error("unknown scheme: " + s);
}

double FlowConfig::resolve_dt(double h) const {
  if (dt > 0.0) return dt;
  return cfl_factor * std::pow(h, 1.0 + order.alpha);
}

void FlowConfig::validate() const {
  order.validate();
  if (!(T > 0.0)) throw config_error("FlowConfig: T must be > 0");
  if (dt < 0.0) throw config_error("FlowConfig: dt must be >= 0");
  if (dt == 0.0 && !(cfl_factor > 0.0 && cfl_factor <= 1e3))
    throw config_error("FlowConfig: cfl_factor out of range");
  if (monitor_every < 1) throw config_error("FlowConfig: monitor_every must be >= 1");
  for (double g : holder_gammas)
    HolderExponent{g}.validate();
}

namespace {

void blowup_guard(const std::vector<double>& vals, double reference_sup, const char* who) {
  double cap = 10.0 * (reference_sup + 1.0);
  for (double v : vals) {
    if (!std::isfinite(v)) throw numerical_error(std::string(who) + ": non-finite state");
    if (std::abs(v) > cap)
      throw numerical_error(std::string(who) + ": sup exceeded blow-up guard " +
                            std::to_string(cap));
  }
}

GridFunction state_like(const GridFunction& u, std::vector<double> vals) {
  return GridFunction(u.spec(), std::move(vals));
}

}  // namespace

GridFunction step_explicit(const GridFunction& u, const FlowConfig& cfg, double reference_sup) {
  cfg.validate();
  if (reference_sup < 0.0) reference_sup = sup_norm(u);
  const double dt = cfg.resolve_dt(u.h());
  QuadratureSpec spec = cfg.spec;
  spec.regularity_probe = false;
  CurvatureField Hw = evaluate_weighted_H(u, cfg.order, spec, cfg.threads);
  std::vector<double> vals = u.values();
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] -= dt * Hw.values.values()[i];
  blowup_guard(vals, reference_sup, "step_explicit");
  return state_like(u, std::move(vals));
}

GridFunction step_imex(const GridFunction& u, const GridFunction& /*u0*/,
                       const LinearOperatorMatrix& L0, const FlowConfig& cfg,
                       double reference_sup) {
  cfg.validate();
  if (reference_sup < 0.0) reference_sup = sup_norm(u);
  const double dt = cfg.resolve_dt(u.h());
  QuadratureSpec spec = cfg.spec;
  spec.regularity_probe = false;
  CurvatureField Hw = evaluate_weighted_H(u, cfg.order, spec, cfg.threads);
  std::vector<double> Lu = L0.apply(u.values());
  std::vector<double> rhs = u.values();
  for (std::size_t i = 0; i < rhs.size(); ++i)
    rhs[i] += dt * (Lu[i] - Hw.values.values()[i]);
  std::vector<double> next = L0.solve_shifted(dt, rhs);
  blowup_guard(next, reference_sup, "step_imex");
  return state_like(u, std::move(next));
}

FlowResult run_flow(const GridFunction& u0, const FlowConfig& cfg, FlowObserver observer) {
  cfg.validate();
  const double h = u0.h();
  const double dt = cfg.resolve_dt(h);
  const long nsteps = std::max(1L, std::lround(std::ceil(cfg.T / dt - 1e-12)));
  const double reference_sup = sup_norm(u0);

  QuadratureSpec spec = cfg.spec;
  spec.validate(u0.d());
  if (spec.regularity_probe) detail::regularity_slope_test(u0, cfg.order);
  spec.regularity_probe = false;

  FlowResult res;
  res.trace.gammas = cfg.holder_gammas;
  res.trace.holder.resize(cfg.holder_gammas.size());
  res.trace.grid_h = h;
  res.trace.relinearized = cfg.relinearize_every > 0;

  LinearOperatorMatrix L0;
  GridFunction base = u0;
  if (cfg.scheme == Scheme::Imex) L0 = assemble_matrix(u0, cfg.order, spec, 16384, cfg.threads);

  GridFunction u = u0;
  auto record = [&](double t, const CurvatureField& Hw) {
    res.trace.times.push_back(t);
    res.trace.sup_u.push_back(sup_norm(u));
    res.trace.lip_u.push_back(lip_norm(u));
    double mn = 0.0, mx = 0.0;
    for (double v : Hw.values.values()) {
      mn = std::min(mn, -v);
      mx = std::max(mx, -v);
    }
    res.trace.min_dtu.push_back(mn);
    res.trace.max_dtu.push_back(mx);
    res.trace.sup_dtu.push_back(std::max(std::abs(mn), std::abs(mx)));
    if (!cfg.holder_gammas.empty()) {
      GradientField gf = gradient(u);
      for (std::size_t k = 0; k < cfg.holder_gammas.size(); ++k) {
        HolderExponent he{cfg.holder_gammas[k]};
        double m = 0.0;
        for (const auto& comp : gf.comp)
          m = std::max(m, holder_seminorm(comp, he, cfg.holder_max_lag));
        res.trace.holder[k].push_back(m);
      }
    }
    res.trace.tail.push_back(Hw.tail_estimate);
    if (observer) observer(t, u, Hw);
  };

  double t = 0.0;
  try {
    for (long step = 0; step <= nsteps; ++step) {
      CurvatureField Hw = evaluate_weighted_H(u, cfg.order, spec, cfg.threads);
      const bool last = step == nsteps;
      if (step % cfg.monitor_every == 0 || last) record(t, Hw);
      if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0)
        res.snapshots.emplace_back(t, u);
      if (last) break;

      if (cfg.scheme == Scheme::Imex && cfg.relinearize_every > 0 && step > 0 &&
          step % cfg.relinearize_every == 0) {
        base = u;
        L0 = assemble_matrix(base, cfg.order, spec, 16384, cfg.threads);
      }

      std::vector<double> vals;
      if (cfg.scheme == Scheme::Explicit) {
        vals = u.values();
        for (std::size_t i = 0; i < vals.size(); ++i) vals[i] -= dt * Hw.values.values()[i];
      } else {
        std::vector<double> Lu = L0.apply(u.values());
        vals = u.values();
        for (std::size_t i = 0; i < vals.size(); ++i)
          vals[i] += dt * (Lu[i] - Hw.values.values()[i]);
        vals = L0.solve_shifted(dt, vals);
      }
      blowup_guard(vals, reference_sup, "run_flow");
      u = state_like(u, std::move(vals));
      t += dt;
    }
  } catch (const numerical_error& e) {
    res.trace.aborted = true;
    res.trace.abort_reason = e.what();
  }
  res.final_state = u;
  return res;
}

}  // namespace fracflow
