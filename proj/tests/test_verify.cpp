#include <doctest.h>

#include <cmath>

#include "fracflow/profiles.hpp"
#include "fracflow/verify.hpp"

using namespace fracflow;
using namespace fracflow::verify;

namespace {

GridSpec periodic_1d(int n) {
  GridSpec s;
  s.d = 1;
  s.h = 2.0 * M_PI / n;
  s.origin = {0.0, 0.0};
  s.shape = {n, 1};
  s.extension = Extension::Periodic;
  return s;
}

FlowConfig quick_cfg() {
  FlowConfig cfg;
  cfg.order = {0.5, 2};
  cfg.scheme = Scheme::Imex;
  cfg.cfl_factor = 2.0;
  cfg.T = 0.2;
  cfg.spec.regularity_probe = false;
  return cfg;
}

}  // namespace

TEST_CASE("check_comparison: equality and constant-gap pairs pass") {
  auto u0 = sample([](const Point& x) { return 0.1 * std::cos(x[0]); }, periodic_1d(128));
  FlowConfig cfg = quick_cfg();

  auto eq = check_comparison(u0, u0, cfg);
  CHECK(eq.pass);
  CHECK(std::abs(eq.margin) <= 1e-9);  // solver noise only

  std::vector<double> up = u0.values();
  for (double& v : up) v += 0.3;
  GridFunction v0(u0.spec(), std::move(up));
  auto gap = check_comparison(u0, v0, cfg);
  CHECK(gap.pass);
  CHECK(gap.margin <= -0.3 + 1e-6);  // slack stays the whole constant gap

  // swapped pair is detected as a violation at t = 0
  auto swapped = check_comparison(v0, u0, cfg);
  CHECK(!swapped.pass);
}

TEST_CASE("check_comparison: dominated bump pair stays ordered") {
  GridSpec s;
  s.d = 1;
  s.h = 1.0 / 64;
  s.origin = {-6.0, 0.0};
  s.shape = {769, 1};
  s.extension = Extension::CompactSupport;
  auto u0 = sample([](const Point& x) { return 0.2 * std::exp(-x[0] * x[0] / (2.0 * 0.64)); }, s);
  auto v0 = sample([](const Point& x) { return 0.5 * std::exp(-x[0] * x[0] / (2.0 * 2.56)); }, s);
  for (std::size_t i = 0; i < u0.size(); ++i) REQUIRE(u0.values()[i] <= v0.values()[i]);

  FlowConfig cfg = quick_cfg();
  cfg.T = 0.25;
  auto rep = check_comparison(u0, v0, cfg);
  CHECK(rep.pass);
}

TEST_CASE("check_universal: flat profile trivially passes; corrupted trace fails") {
  auto u0 = sample([](const Point&) { return 0.0; }, periodic_1d(64));
  FlowConfig cfg = quick_cfg();
  auto r = run_flow(u0, cfg);
  auto rep = check_universal(r.trace);
  CHECK(rep.pass);
  CHECK(rep.margin <= 0.0);

  FlowTrace corrupted = r.trace;
  corrupted.lip_u.back() += 0.01 + 2.0 * monitor_tol(corrupted.grid_h);
  auto bad = check_universal(corrupted);
  CHECK(!bad.pass);
  CHECK(bad.margin >= 0.01);
}

TEST_CASE("check_universal: cosine run passes with decaying lip monitor") {
  auto u0 = sample([](const Point& x) { return 0.05 * std::cos(x[0]); }, periodic_1d(256));
  FlowConfig cfg = quick_cfg();
  cfg.T = 0.5;
  auto r = run_flow(u0, cfg);
  REQUIRE(!r.trace.aborted);
  auto rep = check_universal(r.trace);
  CHECK(rep.pass);
  CHECK(r.trace.lip_u.back() < r.trace.lip_u.front());
}

TEST_CASE("check_sign_preservation: affine zeros; odd symmetry swaps the identities") {
  GridSpec as;
  as.d = 1;
  as.h = 1.0 / 16;
  as.origin = {-3.0, 0.0};
  as.shape = {97, 1};
  as.extension = Extension::AffineFarField;
  as.affine_a = {0.25, 0.0};
  auto a = sample([](const Point& x) { return 0.25 * x[0]; }, as);
  FlowConfig cfg = quick_cfg();
  cfg.T = 0.1;
  auto rep = check_sign_preservation(a, cfg);
  CHECK(rep.pass);
  CHECK(std::abs(rep.margin) <= rep.tolerance);

  // cosine: identity margins hold; negation mirrors the extremes
  auto u0 = sample([](const Point& x) { return 0.05 * std::cos(x[0]); }, periodic_1d(128));
  auto r1 = check_sign_preservation(u0, cfg);
  CHECK(r1.pass);
  std::vector<double> neg = u0.values();
  for (double& v : neg) v = -v;
  GridFunction um(u0.spec(), std::move(neg));
  auto r2 = check_sign_preservation(um, cfg);
  CHECK(r2.pass);
}

TEST_CASE("check_smoothing: smooth data trivially bounded") {
  auto u0 = sample([](const Point& x) { return 0.05 * std::cos(x[0]); }, periodic_1d(128));
  FlowConfig cfg = quick_cfg();
  cfg.T = 0.4;
  cfg.monitor_every = 2;
  auto rep = check_smoothing(u0, cfg, {1}, 0.25);
  CHECK(rep.pass);
}

TEST_CASE("check_smoothing: rough cusp shows no upward trend") {
  Profile p = make_profile("rough-cusp", 1, 1.0 / 128, 4.0);
  auto u0 = sample_profile(p);
  FlowConfig cfg = quick_cfg();
  cfg.T = 0.4;
  cfg.monitor_every = 2;
  auto rep = check_smoothing(u0, cfg, {1}, 0.25);
  CHECK(rep.pass);
  CHECK(rep.margin <= 1.2);
}

TEST_CASE("check_operator_bounds: corpus ratios bounded, zero field harmless") {
  auto corpus = random_smooth_corpus(8, 1, 2.0 * M_PI / 256, 77);
  // plant a zero field: the ratio guard must skip it
  GridSpec s = periodic_1d(256);
  corpus.push_back(sample([](const Point&) { return 0.0; }, s));
  QuadratureSpec spec;
  spec.regularity_probe = false;
  auto rep = check_operator_bounds(corpus, {0.5, 2}, spec);
  CHECK(rep.pass);
  CHECK(rep.margin < rep.tolerance);
}

TEST_CASE("check_operator_bounds: amplitude scaling stays in the linear regime") {
  QuadratureSpec spec;
  spec.regularity_probe = false;
  GridSpec s = periodic_1d(256);
  double prev = -1.0;
  for (double c : {1.0, 0.5, 0.25}) {
    std::vector<GridFunction> corpus{
        sample([=](const Point& x) { return 0.05 * c * std::cos(x[0]); }, s)};
    auto rep = check_operator_bounds(corpus, {0.5, 2}, spec);
    CHECK(rep.pass);
    if (prev >= 0.0) CHECK(std::abs(rep.margin - prev) <= 0.15 * prev);
    prev = rep.margin;
  }
}

TEST_CASE("reports serialize to JSON lines") {
  VerificationReport r;
  r.name = "demo";
  r.pass = true;
  r.margin = -0.25;
  r.tolerance = 0.1;
  r.details = "ok";
  std::string j = r.to_json();
  CHECK(j.find("\"check\":\"demo\"") != std::string::npos);
  CHECK(j.find("\"pass\":true") != std::string::npos);
  CHECK(j.find("margin") != std::string::npos);
}

TEST_CASE("random corpus is deterministic in the seed") {
  auto a = random_smooth_corpus(3, 1, 2.0 * M_PI / 128, 42);
  auto b = random_smooth_corpus(3, 1, 2.0 * M_PI / 128, 42);
  auto c = random_smooth_corpus(3, 1, 2.0 * M_PI / 128, 43);
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < a[k].size(); ++i)
      CHECK(a[k].values()[i] == b[k].values()[i]);
  bool differs = false;
  for (std::size_t i = 0; i < a[0].size(); ++i)
    if (a[0].values()[i] != c[0].values()[i]) differs = true;
  CHECK(differs);
}
