#include <doctest.h>

#include <cmath>

#include "fracflow/curvature.hpp"
#include "fracflow/linearized.hpp"
#include "fracflow/oracle.hpp"

using namespace fracflow;
using namespace fracflow::oracle;

namespace {

const FractionalOrder kOrder{0.5, 2};

GridFunction bump_1d(double h = 1.0 / 256) {
  GridSpec s;
  s.d = 1;
  s.h = h;
  s.origin = {-6.0, 0.0};
  s.shape = {static_cast<int>(std::lround(12.0 / h)) + 1, 1};
  s.extension = Extension::CompactSupport;
  return sample([](const Point& x) { return 0.5 * std::exp(-2.0 * x[0] * x[0]); }, s);
}

GridFunction affine_1d(double a, double b) {
  GridSpec s;
  s.d = 1;
  s.h = 1.0 / 64;
  s.origin = {-4.0, 0.0};
  s.shape = {513, 1};
  s.extension = Extension::AffineFarField;
  s.affine_a = {a, 0.0};
  s.affine_b = b;
  return sample([=](const Point& x) { return a * x[0] + b; }, s);
}

}  // namespace

TEST_CASE("direct_H_set: half spaces and the empty graph have zero curvature") {
  auto a = affine_1d(0.45, -0.1);
  SubgraphSet sa{&a, {0.25, 0.0}, 6.0};
  auto ra = direct_H_set(sa, kOrder);
  CHECK(std::abs(ra.value) <= std::max(ra.error_estimate, 1e-6));

  GridSpec s;
  s.d = 1;
  s.h = 1.0 / 32;
  s.origin = {-4.0, 0.0};
  s.shape = {257, 1};
  s.extension = Extension::CompactSupport;
  auto z = sample([](const Point&) { return 0.0; }, s);
  SubgraphSet sz{&z, {0.5, 0.0}, 6.0};
  auto rz = direct_H_set(sz, kOrder);
  CHECK(std::abs(rz.value) <= std::max(rz.error_estimate, 1e-6));
}

TEST_CASE("direct_H_set: invariant under vertical translation of the set") {
  auto u = bump_1d();
  SubgraphSet s0{&u, {0.0, 0.0}, 6.0};
  auto r0 = direct_H_set(s0, kOrder);

  std::vector<double> sh = u.values();
  for (double& v : sh) v += 0.75;
  GridSpec ss = u.spec();
  ss.extension = Extension::AffineFarField;  // shifted bump leaves the compact class
  ss.affine_a = {0.0, 0.0};
  ss.affine_b = 0.75;
  GridFunction us(ss, std::move(sh));
  us.set_analytic([](const Point& x) { return 0.5 * std::exp(-2.0 * x[0] * x[0]) + 0.75; });
  SubgraphSet s1{&us, {0.0, 0.0}, 6.0};
  auto r1 = direct_H_set(s1, kOrder);
  CHECK(std::abs(r1.value - r0.value) <= 1e-10 + 1e-6 * std::abs(r0.value));
}

TEST_CASE("direct_H_set agrees with evaluate_H on the bump apex") {
  auto u = bump_1d();
  SubgraphSet s{&u, {0.0, 0.0}, 8.0};
  SetOracleOptions opt;
  opt.max_depth = 10;
  auto st = direct_H_set(s, kOrder, opt);
  QuadratureSpec spec;
  double H = evaluate_H_at_node(u, u.index(u.n(0) / 2), kOrder, spec);
  CHECK(std::abs(H - st.value) <= 1e-2 * std::abs(H));
}

TEST_CASE("direct_H_graph: affine annihilates exactly, odd symmetry to 1e-10") {
  auto a = affine_1d(-0.7, 0.2);
  auto ra = direct_H_graph(a, {0.5, 0.0}, kOrder, 256.0);
  CHECK(ra.value == 0.0);  // paired G-sum vanishes identically

  auto u = bump_1d();
  std::vector<double> neg = u.values();
  for (double& v : neg) v = -v;
  GridFunction um(u.spec(), std::move(neg));
  um.set_analytic([](const Point& x) { return -0.5 * std::exp(-2.0 * x[0] * x[0]); });
  auto rp = direct_H_graph(u, {0.3, 0.0}, kOrder, 256.0);
  auto rm = direct_H_graph(um, {0.3, 0.0}, kOrder, 256.0);
  CHECK(std::abs(rp.value + rm.value) <= 1e-10);
}

TEST_CASE("direct_H_graph matches evaluate_H on the bump to 1e-3") {
  auto u = bump_1d();
  QuadratureSpec spec;
  for (double px : {0.0, 0.7}) {
    std::size_t node = u.index(u.n(0) / 2 + static_cast<int>(std::lround(px / u.h())));
    double H = evaluate_H_at_node(u, node, kOrder, spec);
    auto g = direct_H_graph(u, u.node_coord_flat(node), kOrder, spec.resolve_r_outer(u));
    CHECK(std::abs(H - g.value) <= 1e-3 * std::abs(g.value));
  }
}

TEST_CASE("three-way agreement: set, graph and polar evaluation") {
  auto u = bump_1d();
  QuadratureSpec spec;
  std::size_t node = u.index(u.n(0) / 2);
  double H = evaluate_H_at_node(u, node, kOrder, spec);
  auto g = direct_H_graph(u, {0.0, 0.0}, kOrder, spec.resolve_r_outer(u));
  SubgraphSet s{&u, {0.0, 0.0}, 8.0};
  auto st = direct_H_set(s, kOrder);
  CHECK(std::abs(g.value - st.value) <=
        g.error_estimate + st.error_estimate + 1e-3 * std::abs(g.value));
  CHECK(std::abs(H - g.value) <= 1e-3 * std::abs(g.value));
  CHECK(std::abs(H - st.value) <= 1e-2 * std::abs(H));
}

TEST_CASE("lambda_alpha: positivity, partition consistency, frozen references") {
  for (double a : {0.25, 0.5, 0.75}) {
    FractionalOrder o{a, 2};
    auto va = lambda_alpha(o, LambdaPartition::A);
    auto vb = lambda_alpha(o, LambdaPartition::B);
    CHECK(va.value > 0.0);
    CHECK(std::abs(va.value - vb.value) <= 1e-8);
  }
  // mpmath: -4 cos(pi s) Gamma(-2s), s = (1+alpha)/2
  CHECK(lambda_alpha({0.25, 2}).value == doctest::Approx(6.0025173731441171).epsilon(1e-9));
  CHECK(lambda_alpha({0.5, 2}).value == doctest::Approx(6.6843420656826680).epsilon(1e-9));
  CHECK(lambda_alpha({0.75, 2}).value == doctest::Approx(10.2083863987088638).epsilon(1e-9));

  // blow-up trend toward alpha = 1
  CHECK(lambda_alpha({0.9, 2}).value > lambda_alpha({0.75, 2}).value);
  CHECK(lambda_alpha({0.99, 2}).value > 30.0);
}

TEST_CASE("lambda_alpha matches the apply_DH amplitude to 1e-3") {
  const int n = 1024;
  GridSpec s;
  s.d = 1;
  s.h = 2.0 * M_PI / n;
  s.origin = {0.0, 0.0};
  s.shape = {n, 1};
  s.extension = Extension::Periodic;
  auto z = sample([](const Point&) { return 0.0; }, s);
  auto w = sample([](const Point& x) { return std::cos(x[0]); }, s);
  for (double a : {0.25, 0.5, 0.75}) {
    FractionalOrder o{a, 2};
    auto DH = apply_DH(z, w, o, QuadratureSpec{});
    double lam = lambda_alpha(o).value;
    CHECK(std::abs(sup_norm(DH) - lam) <= 1e-3 * lam);
  }
}

TEST_CASE("fd_linearization: zero perturbation, slopes, linear-in-w structure") {
  GridSpec s;
  s.d = 1;
  s.h = 2.0 * M_PI / 256;
  s.origin = {0.0, 0.0};
  s.shape = {256, 1};
  s.extension = Extension::Periodic;
  auto u0 = sample([](const Point& x) { return 0.2 * std::sin(x[0]); }, s);
  auto z = sample([](const Point&) { return 0.0; }, s);

  auto rz = fd_linearization(u0, z, kOrder, QuadratureSpec{}, {1e-2, 1e-3, 1e-4});
  for (double e : rz.err) CHECK(e <= 1e-12);

  auto w = sample([](const Point& x) { return std::cos(x[0]); }, s);
  auto r = fd_linearization(u0, w, kOrder, QuadratureSpec{}, {1e-2, 1e-3, 1e-4});
  CHECK(r.slope >= 0.9);

  // doubling w doubles the first-order difference quotient at leading order
  QuadratureSpec spec;
  spec.regularity_probe = false;
  auto H0 = evaluate_H(u0, kOrder, spec);
  const double eps = 1e-4;
  auto perturbed = [&](double scale) {
    std::vector<double> v(u0.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = u0.values()[i] + eps * scale * w.values()[i];
    GridFunction up(s, std::move(v));
    auto Hp = evaluate_H(up, kOrder, spec);
    std::vector<double> fd(u0.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      fd[i] = (Hp.values.values()[i] - H0.values.values()[i]) / eps;
    return fd;
  };
  auto f1 = perturbed(1.0);
  auto f2 = perturbed(2.0);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    worst = std::max(worst, std::abs(f2[i] - 2.0 * f1[i]));
    scale = std::max(scale, std::abs(f1[i]));
  }
  CHECK(worst <= 1e-3 * scale);

  CHECK_THROWS_AS(fd_linearization(u0, w, kOrder, QuadratureSpec{}, {1e-2, 1e-3}), config_error);
  CHECK_THROWS_AS(fd_linearization(u0, w, kOrder, QuadratureSpec{}, {1e-4, 1e-3, 1e-2}),
                  config_error);
}
