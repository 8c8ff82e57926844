#include "fracflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fracflow/io.hpp"

namespace fracflow::verify {

std::string VerificationReport::to_json() const {
  std::ostringstream os;
  os << "{\"check\":\"" << name << "\",\"pass\":" << (pass ? "true" : "false")
     << ",\"margin\":" << format_double(margin) << ",\"tolerance\":" << format_double(tolerance)
     << ",\"details\":\"" << details << "\"}";
  return os.str();
}

namespace {

VerificationReport make_report(std::string name, double margin, double tol, std::string details) {
  VerificationReport r;
  r.name = std::move(name);
  r.margin = margin;
  r.tolerance = tol;
  r.pass = margin <= tol;
  r.details = std::move(details);
  return r;
}

}  // namespace

VerificationReport check_comparison(const GridFunction& u0, const GridFunction& v0,
                                    const FlowConfig& cfg) {
  if (u0.size() != v0.size()) throw config_error("check_comparison: grid mismatch");
  for (std::size_t i = 0; i < u0.size(); ++i)
    if (u0.values()[i] > v0.values()[i])
      return make_report("comparison", std::numeric_limits<double>::infinity(),
                         monitor_tol(u0.h()), "precondition u0 <= v0 violated at input");

  std::vector<std::vector<double>> lower_states;
  std::vector<double> lower_times;
  FlowResult ru = run_flow(u0, cfg, [&](double t, const GridFunction& u, const CurvatureField&) {
    lower_times.push_back(t);
    lower_states.push_back(u.values());
  });

  double tol = monitor_tol(u0.h());
  double worst = -std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  std::size_t row = 0;
  FlowResult rv = run_flow(v0, cfg, [&](double t, const GridFunction& v, const CurvatureField&) {
    if (row >= lower_states.size()) return;
    const auto& lu = lower_states[row];
    for (std::size_t i = 0; i < lu.size(); ++i) {
      double violation = lu[i] - v.values()[i];
      if (violation > worst) {
        worst = violation;
        worst_t = t;
      }
    }
    ++row;
  });

  std::ostringstream det;
  det << "monitored rows=" << row << " worst at t=" << format_double(worst_t);
  if (ru.trace.aborted || rv.trace.aborted) det << " (aborted run)";
  return make_report("comparison", worst, tol, det.str());
}

VerificationReport check_universal(const FlowTrace& trace) {
  if (trace.rows() == 0) throw config_error("check_universal: empty trace");
  const double tol = monitor_tol(trace.grid_h);
  double worst = -std::numeric_limits<double>::infinity();
  std::string which = "none";
  auto scan = [&](const std::vector<double>& col, const char* name) {
    if (col.empty()) return;
    double v0 = col.front();
    for (double v : col) {
      double violation = v - v0;
      if (violation > worst) {
        worst = violation;
        which = name;
      }
    }
  };
  scan(trace.lip_u, "lip");
  scan(trace.sup_dtu, "sup_dtu");
  scan(trace.sup_u, "sup");
  std::ostringstream det;
  det << "worst monitor=" << which << " rows=" << trace.rows();
  return make_report("universal", worst, tol, det.str());
}

VerificationReport check_sign_preservation(const GridFunction& u0, const FlowConfig& cfg) {
  QuadratureSpec spec = cfg.spec;
  spec.regularity_probe = false;
  CurvatureField H0 = evaluate_weighted_H(u0, cfg.order, spec, cfg.threads);
  double inf_H0 = 0.0, sup_H0 = 0.0;
  inf_H0 = *std::min_element(H0.values.values().begin(), H0.values.values().end());
  sup_H0 = *std::max_element(H0.values.values().begin(), H0.values.values().end());

  FlowResult r = run_flow(u0, cfg);
  double sup_dtu = -std::numeric_limits<double>::infinity();
  double inf_dtu = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < r.trace.rows(); ++k) {
    sup_dtu = std::max(sup_dtu, r.trace.max_dtu[k]);
    inf_dtu = std::min(inf_dtu, r.trace.min_dtu[k]);
  }

  const double tol = 1e-2 * (1.0 + std::max(std::abs(inf_H0), std::abs(sup_H0)));
  double m1 = std::abs(sup_dtu - (-inf_H0));
  double m2 = std::abs(inf_dtu - (-sup_H0));
  double worst = std::max(m1, m2);

  // one-signed data: matching sign bound on dt u for the whole run
  std::ostringstream det;
  det << "sup_dtu=" << format_double(sup_dtu) << " -inf_H0=" << format_double(-inf_H0)
      << " inf_dtu=" << format_double(inf_dtu) << " -sup_H0=" << format_double(-sup_H0);
  if (inf_H0 >= 0.0) {
    worst = std::max(worst, sup_dtu);  // H_w(u0) >= 0 => dt u <= tol throughout
    det << " one-signed(+)";
  }
  if (sup_H0 <= 0.0) {
    worst = std::max(worst, -inf_dtu);
    det << " one-signed(-)";
  }
  if (r.trace.aborted) det << " (aborted)";
  return make_report("sign-preservation", worst, tol, det.str());
}

VerificationReport check_smoothing(const GridFunction& u0, const FlowConfig& cfg,
                                   const std::vector<int>& k_list, double beta_prime) {
  FlowConfig run_cfg = cfg;
  run_cfg.holder_gammas.clear();
  for (int k : k_list) {
    if (k < 0 || k > 1) throw config_error("check_smoothing: k must be 0 or 1 at desk scale");
    run_cfg.holder_gammas.push_back(k + beta_prime);
  }
  FlowResult r = run_flow(u0, run_cfg);
  const auto& trace = r.trace;
  if (trace.rows() < 8)
    return make_report("smoothing", std::numeric_limits<double>::infinity(), 0.0,
                       "trace too short");

  double worst_ratio = 0.0;
  int worst_k = -1;
  const double T = trace.times.back();
  for (std::size_t kk = 0; kk < run_cfg.holder_gammas.size(); ++kk) {
    double established = 0.0, last_quarter = 0.0;
    for (std::size_t i = 0; i < trace.rows(); ++i) {
      double t = trace.times[i];
      if (t <= 0.1 * T) continue;
      double q = std::pow(t, k_list[kk]) * trace.holder[kk][i];
      if (t <= 0.75 * T)
        established = std::max(established, q);
      else
        last_quarter = std::max(last_quarter, q);
    }
    if (established <= 0.0) continue;
    double ratio = last_quarter / established;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_k = k_list[kk];
    }
  }
  std::ostringstream det;
  det << "worst k=" << worst_k << " trend ratio=" << format_double(worst_ratio);
  if (trace.aborted) det << " (aborted)";
  return make_report("smoothing", worst_ratio, 1.2, det.str());
}

double calibrated_operator_constant(int d, double alpha) {
  // frozen against the random-corpus calibration runs; the alpha(1-alpha)
  // factor tracks the blow-up of the operator norm at both endpoints
  const double c0 = d == 1 ? 3.2 : 7.0;
  return c0 / (alpha * (1.0 - alpha));
}

std::vector<GridFunction> random_smooth_corpus(int count, int d, double h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<GridFunction> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    const int K = 6;
    std::vector<double> ak(K + 1), bk(K + 1), ck(K + 1);
    for (int k = 1; k <= K; ++k) {
      ak[k] = unif(rng) / (k * k);
      bk[k] = unif(rng) / (k * k);
      ck[k] = unif(rng) / (k * k);
    }
    ScalarField f;
    if (d == 1) {
      f = [ak, bk, K](const Point& x) {
        double s = 0.0;
        for (int k = 1; k <= K; ++k) s += ak[k] * std::cos(k * x[0]) + bk[k] * std::sin(k * x[0]);
        return 0.4 * s;
      };
    } else {
      f = [ak, bk, ck, K](const Point& x) {
        double s = 0.0;
        for (int k = 1; k <= K; ++k)
          s += ak[k] * std::cos(k * x[0]) * std::cos(k * x[1]) +
               bk[k] * std::sin(k * x[0]) * std::cos(k * x[1]) + ck[k] * std::sin(k * (x[0] + x[1]));
        return 0.4 * s;
      };
    }
    GridSpec spec;
    spec.d = d;
    int n = std::max(8, static_cast<int>(std::lround(2.0 * M_PI / h)));
    spec.h = 2.0 * M_PI / n;  // integer wavenumbers wrap exactly
    spec.origin = {0.0, 0.0};
    spec.shape = {n, d == 2 ? n : 1};
    spec.extension = Extension::Periodic;
    out.push_back(sample(f, spec));
  }
  return out;
}

VerificationReport check_operator_bounds(const std::vector<GridFunction>& corpus,
                                         const FractionalOrder& order,
                                         const QuadratureSpec& spec) {
  if (corpus.empty()) throw config_error("check_operator_bounds: empty corpus");
  const double gamma = std::min(0.95, order.alpha + 0.35);
  const double C = calibrated_operator_constant(corpus.front().d(), order.alpha);

  QuadratureSpec sp = spec;
  sp.regularity_probe = false;

  double worst = 0.0;
  int witness = -1;
  for (std::size_t c = 0; c < corpus.size(); ++c) {
    const GridFunction& u = corpus[c];
    const int lag = 16;
    CurvatureField H = evaluate_weighted_H(u, order, sp);

    double grad_norm = lip_norm(u);
    GradientField gf = gradient(u);
    for (const auto& comp : gf.comp)
      grad_norm = std::max(
          grad_norm, lip_norm(u) + holder_seminorm(comp, HolderExponent{gamma}, lag));
    double h_norm = sup_norm(H.values) +
                    holder_seminorm(H.values, HolderExponent{gamma - order.alpha}, lag);
    if (grad_norm < 1e-14) continue;
    double ratio = h_norm / grad_norm;

    // odd integrator against a fixed bounded coefficient vanishing at r = 0
    PolarCoefficient nu = [](const Point&, double r, const Point&) { return r / (1.0 + r); };
    GridFunction Io = integrate_odd(u, nu, order, sp);
    double io_ratio = (sup_norm(Io) + holder_seminorm(Io, HolderExponent{gamma - order.alpha}, lag)) /
                      std::max(1e-14, lip_norm(u));
    ratio = std::max(ratio, io_ratio);

    if (ratio > worst) {
      worst = ratio;
      witness = static_cast<int>(c);
    }
  }
  std::ostringstream det;
  det << "max ratio=" << format_double(worst) << " witness=" << witness
      << " constant=" << format_double(C);
  return make_report("operator-bounds", worst, C, det.str());
}

}  // namespace fracflow::verify
