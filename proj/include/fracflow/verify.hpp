#pragma once

#include <string>
#include <vector>

#include "fracflow/flow.hpp"

namespace fracflow::verify {

/// Outcome of one executable check. fail <=> margin > tolerance; margin is
/// the worst observed violation (negative values mean slack).
struct VerificationReport {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  double tolerance = 0.0;
  std::string details;

  std::string to_json() const;
};

/// Monitor tolerance: fixed floor plus the first-order discretization term.
inline double monitor_tol(double h) { return 5e-3 + 2.0 * h; }

/// Ordered data stays ordered: evolves both states with identical config and
/// checks u(t) <= v(t) + tol at every monitored time.
VerificationReport check_comparison(const GridFunction& u0, const GridFunction& v0,
                                    const FlowConfig& cfg);

/// sup, Lipschitz and curvature monitors never exceed their initial values.
VerificationReport check_universal(const FlowTrace& trace);

/// Run-wide extremes of dt u against the negated extremes of H_w(u0); when
/// H_w(u0) is one-signed the matching sign bound on dt u is asserted too.
VerificationReport check_sign_preservation(const GridFunction& u0, const FlowConfig& cfg);

/// Trend boundedness of t^k * [grad u(t)]_{C^{k+beta'}}: the last-quarter max
/// must not exceed 1.2x the max established after t > 0.1 T.
VerificationReport check_smoothing(const GridFunction& u0, const FlowConfig& cfg,
                                   const std::vector<int>& k_list, double beta_prime);

/// Uniform boundedness of sampled operator-norm ratios over a corpus of
/// fields, against the calibrated constant for (d, alpha).
VerificationReport check_operator_bounds(const std::vector<GridFunction>& corpus,
                                         const FractionalOrder& order, const QuadratureSpec& spec);

/// Constant dominating the sampled ratios ||H_w(u)|| / ||grad u||_{C^gamma};
/// calibrated once against the oracle corpus and frozen.
double calibrated_operator_constant(int d, double alpha);

/// Deterministic band-limited random fields for corpora.
std::vector<GridFunction> random_smooth_corpus(int count, int d, double h, std::uint64_t seed);

}  // namespace fracflow::verify
