#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracflow/curvature.hpp"
#include "fracflow/linearized.hpp"

namespace fracflow {

enum class Scheme : std::uint8_t { Explicit, Imex };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct FlowConfig {
  FractionalOrder order;
  Scheme scheme = Scheme::Imex;
  double dt = 0.0;           // explicit time step; 0 = derive from cfl_factor
  // dt = cfl_factor * h^{1+alpha}. The explicit scheme is stable only up to
  // cfl ~ 2 / (lambda(alpha) pi^{1+alpha}) (~0.05 at alpha = 0.5); the
  // default keeps a 2x margin. Imex runs can raise this freely.
  double cfl_factor = 0.02;
  double T = 1.0;
  QuadratureSpec spec;
  int monitor_every = 1;
  int relinearize_every = 0;  // imex only; 0 = frozen linearization
  int snapshot_every = 0;     // 0 = final state only
  std::vector<double> holder_gammas;  // seminorm exponents applied to grad u
  int holder_max_lag = 16;
  int threads = 0;

  double resolve_dt(double h) const;
  void validate() const;
};

/// Monitored time series of a run. One row per sampled step; row 0 is the
/// initial state.
struct FlowTrace {
  std::vector<double> times;
  std::vector<double> sup_u;
  std::vector<double> lip_u;
  std::vector<double> sup_dtu;   // sup |H_w(u(t))|
  std::vector<double> min_dtu;   // min of dt u = -H_w
  std::vector<double> max_dtu;
  std::vector<std::vector<double>> holder;  // [gamma index][row]
  std::vector<double> tail;
  std::vector<double> gammas;
  double grid_h = 0.0;
  bool relinearized = false;
  bool aborted = false;
  std::string abort_reason;

  std::size_t rows() const { return times.size(); }
};

struct FlowResult {
  GridFunction final_state;
  FlowTrace trace;
  std::vector<std::pair<double, GridFunction>> snapshots;
};

/// One explicit Euler step u - dt * H_w(u). The guard aborts on non-finite
/// values or sup growth beyond 10*(reference_sup+1).
GridFunction step_explicit(const GridFunction& u, const FlowConfig& cfg,
                           double reference_sup = -1.0);

/// One IMEX step: (I + dt L0) u+ = u + dt (L0 u - H_w(u)), stiff part frozen
/// at u0. Residual is checked to 1e-10 relative.
GridFunction step_imex(const GridFunction& u, const GridFunction& u0,
                       const LinearOperatorMatrix& L0, const FlowConfig& cfg,
                       double reference_sup = -1.0);

using FlowObserver =
    std::function<void(double t, const GridFunction& u, const CurvatureField& Hw)>;

/// Integrate to T recording monitors; aborts return the partial trace with
/// the reason set.
FlowResult run_flow(const GridFunction& u0, const FlowConfig& cfg, FlowObserver observer = {});

}  // namespace fracflow
