#include <doctest.h>

#include <cmath>
#include <random>

#include "fracflow/curvature.hpp"
#include "fracflow/oracle.hpp"
#include "fracflow/verify.hpp"

using namespace fracflow;

namespace {

const FractionalOrder kOrder{0.5, 2};

GridSpec periodic_1d(int n) {
  GridSpec s;
  s.d = 1;
  s.h = 2.0 * M_PI / n;
  s.origin = {0.0, 0.0};
  s.shape = {n, 1};
  s.extension = Extension::Periodic;
  return s;
}

GridSpec compact_1d(double h, double L) {
  GridSpec s;
  s.d = 1;
  s.h = h;
  s.origin = {-L, 0.0};
  s.shape = {static_cast<int>(std::lround(2 * L / h)) + 1, 1};
  s.extension = Extension::CompactSupport;
  return s;
}

}  // namespace

TEST_CASE("evaluate_H: zero and affine data are exactly flat") {
  auto z = sample([](const Point&) { return 0.0; }, compact_1d(1.0 / 32, 4.0));
  auto Hz = evaluate_H(z, kOrder, QuadratureSpec{});
  for (double v : Hz.values.values()) CHECK(v == 0.0);

  GridSpec as = compact_1d(1.0 / 32, 4.0);
  as.extension = Extension::AffineFarField;
  as.affine_a = {0.4, 0.0};
  as.affine_b = 0.1;
  auto a = sample([](const Point& x) { return 0.4 * x[0] + 0.1; }, as);
  auto Ha = evaluate_H(a, kOrder, QuadratureSpec{});
  for (double v : Ha.values.values()) CHECK(std::abs(v) <= 1e-11);
}

TEST_CASE("evaluate_H: small-amplitude cosine matches the lambda(alpha) oracle") {
  const int n = 1024;
  const double eps = 1e-3;
  auto u = sample([=](const Point& x) { return eps * std::cos(x[0]); }, periodic_1d(n));
  auto H = evaluate_H(u, kOrder, QuadratureSpec{});
  double lam = oracle::lambda_alpha(kOrder).value;
  for (int i = 0; i < n; i += 41) {
    double expect = eps * lam * std::cos(u.node_coord(i)[0]);
    CHECK(std::abs(H.values.at(i) - expect) <= 0.02 * eps * lam);
  }
}

TEST_CASE("evaluate_H: translation equivariance on a periodic grid") {
  const int n = 512;
  auto s = periodic_1d(n);
  auto f = [](const Point& x) { return 0.2 * std::sin(x[0]) + 0.05 * std::cos(3.0 * x[0]); };
  auto u = sample(f, s);
  const int shift = 37;
  const double a = shift * s.h;
  auto us = sample([&](const Point& x) { return f({x[0] - a, 0.0}); }, s);

  QuadratureSpec spec;
  auto H = evaluate_H(u, kOrder, spec);
  auto Hs = evaluate_H(us, kOrder, spec);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst,
                     std::abs(Hs.values.at((i + shift) % n) - H.values.at(i)));
  CHECK(worst <= 1e-10);
}

TEST_CASE("evaluate_H: odd symmetry H(-u) = -H(u)") {
  const int n = 512;
  auto u = sample([](const Point& x) { return 0.3 * std::sin(x[0]) + 0.1 * std::cos(2.0 * x[0]); },
                  periodic_1d(n));
  std::vector<double> neg = u.values();
  for (double& v : neg) v = -v;
  GridFunction um(u.spec(), std::move(neg));

  QuadratureSpec spec;
  auto Hp = evaluate_H(u, kOrder, spec);
  auto Hm = evaluate_H(um, kOrder, spec);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    worst = std::max(worst, std::abs(Hm.values.values()[i] + Hp.values.values()[i]));
  CHECK(worst <= 1e-12);
}

TEST_CASE("evaluate_H: scaling law H(u_l)(l x) = l^{-alpha} H(u)(x) at l = 2") {
  const int n = 512;
  auto s = periodic_1d(n);
  auto f = [](double x) { return 0.25 * std::sin(x) + 0.1 * std::cos(2.0 * x); };
  auto u = sample([&](const Point& x) { return f(x[0]); }, s);

  GridSpec s2;  // lambda = 2: twice the period, twice the spacing
  s2.d = 1;
  s2.h = 2.0 * s.h;
  s2.origin = {0.0, 0.0};
  s2.shape = {n, 1};
  s2.extension = Extension::Periodic;
  auto u2 = sample([&](const Point& x) { return 2.0 * f(x[0] / 2.0); }, s2);

  QuadratureSpec spec;
  auto H = evaluate_H(u, kOrder, spec);
  auto H2 = evaluate_H(u2, kOrder, spec);
  const double scale = std::pow(2.0, -kOrder.alpha);
  double worst = 0.0, denom = 0.0;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(H2.values.at(i) - scale * H.values.at(i)));
    denom = std::max(denom, std::abs(H.values.at(i)));
  }
  CHECK(worst / (scale * denom) <= 1e-4);
}

TEST_CASE("evaluate_weighted_H: affine zero and pointwise Q ratio") {
  GridSpec as = compact_1d(1.0 / 32, 4.0);
  as.extension = Extension::AffineFarField;
  as.affine_a = {-0.7, 0.0};
  auto a = sample([](const Point& x) { return -0.7 * x[0]; }, as);
  auto Hw = evaluate_weighted_H(a, kOrder, QuadratureSpec{});
  for (double v : Hw.values.values()) CHECK(std::abs(v) <= 1e-11);

  const int n = 256;
  auto u = sample([](const Point& x) { return 0.4 * std::sin(x[0]); }, periodic_1d(n));
  QuadratureSpec spec;
  auto H = evaluate_H(u, kOrder, spec);
  auto W = evaluate_weighted_H(u, kOrder, spec);
  auto gf = gradient(u);
  for (int i = 0; i < n; i += 17) {
    double q = std::sqrt(1.0 + gf.comp[0].at(i) * gf.comp[0].at(i));
    CHECK(q >= 1.0);
    CHECK(W.values.at(i) == doctest::Approx(q * H.values.at(i)).epsilon(1e-12));
  }
}

TEST_CASE("evaluate_weighted_H: amplitude sweep stays in the linear regime") {
  const int n = 256;
  QuadratureSpec spec;
  double prev_ratio = 0.0;
  for (double c : {0.25, 0.5, 1.0}) {
    auto u = sample([=](const Point& x) { return 0.02 * c * std::cos(x[0]); }, periodic_1d(n));
    auto W = evaluate_weighted_H(u, kOrder, spec);
    double ratio = sup_norm(W.values) / (0.02 * c);
    if (prev_ratio > 0.0) CHECK(std::abs(ratio - prev_ratio) <= 0.02 * prev_ratio);
    prev_ratio = ratio;
  }
}

TEST_CASE("integrate_even: affine data and zero coefficient annihilate") {
  GridSpec as = compact_1d(1.0 / 32, 4.0);
  as.extension = Extension::AffineFarField;
  as.affine_a = {0.5, 0.0};
  auto a = sample([](const Point& x) { return 0.5 * x[0]; }, as);
  PolarCoefficient one = [](const Point&, double, const Point&) { return 1.0; };
  auto Ie = integrate_even(a, one, kOrder, QuadratureSpec{});
  for (double v : Ie.values()) CHECK(std::abs(v) <= 1e-11);

  auto u = sample([](const Point& x) { return 0.3 * std::sin(x[0]); }, periodic_1d(256));
  PolarCoefficient zero = [](const Point&, double, const Point&) { return 0.0; };
  auto Iz = integrate_even(u, zero, kOrder, QuadratureSpec{});
  for (double v : Iz.values()) CHECK(v == 0.0);
}

TEST_CASE("integrate_even with coeff A^e reproduces evaluate_H") {
  const int n = 256;
  auto u = sample([](const Point& x) { return 0.2 * std::cos(x[0]); }, periodic_1d(n));
  QuadratureSpec spec;
  auto H = evaluate_H(u, kOrder, spec);

  // A^e(x,r,theta) = 2 A_u(x,r,theta): closure built from the same sampled u
  auto gf = gradient(u);
  const double expo = kOrder.kernel_exponent();
  PolarCoefficient Ae = [&](const Point& x, double r, const Point& th) {
    if (r < spec.resolve_r_inner(1) * u.h()) {
      double g = gf.comp[0].value_at(x) * th[0];
      return 2.0 * std::pow(1.0 + g * g, expo);
    }
    double ux = u.value_at(x);
    double p1 = (u.value_at({x[0] - r * th[0], 0.0}) - ux) / r;
    double p2 = (u.value_at({x[0] + r * th[0], 0.0}) - ux) / r;
    return 2.0 * kernel_K_from_quotients(p1, p2, kOrder);
  };
  auto Ie = integrate_even(u, Ae, kOrder, spec);
  for (int i = 0; i < n; i += 11) {
    double denom = std::max(1e-12, std::abs(H.values.at(i)));
    CHECK(std::abs(Ie.at(i) - H.values.at(i)) / denom <= 1e-8);
  }
}

TEST_CASE("integrate_odd: rejects coefficients that do not vanish at r = 0") {
  auto u = sample([](const Point& x) { return 0.2 * std::cos(x[0]); }, periodic_1d(128));
  PolarCoefficient bad = [](const Point&, double, const Point&) { return 1.0; };
  CHECK_THROWS_AS(integrate_odd(u, bad, kOrder, QuadratureSpec{}), config_error);

  PolarCoefficient good = [](const Point&, double r, const Point&) { return r / (1.0 + r); };
  auto Io = integrate_odd(u, good, kOrder, QuadratureSpec{});
  CHECK(sup_norm(Io) > 0.0);
  CHECK(sup_norm(Io) < 10.0);
}

TEST_CASE("kernel bound: 1/kappa <= A_u <= 1 sampled over the polar domain") {
  auto u = sample([](const Point& x) { return 0.3 * std::sin(x[0]) + 0.1 * std::sin(2.0 * x[0]); },
                  periodic_1d(256));
  double lip = lip_norm(u);
  double lower = std::pow(1.0 + 4.0 * lip * lip, kOrder.kernel_exponent());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(0.0, 2.0 * M_PI), ur(1e-3, 30.0);
  for (int k = 0; k < 400; ++k) {
    KernelPoint kp{{ux(rng), 0.0}, ur(rng), {rng() % 2 ? 1.0 : -1.0, 0.0}};
    double A = extension_A(u, kp, kOrder);
    CHECK(A <= 1.0 + 1e-14);
    CHECK(A >= lower - 1e-14);
  }
}

TEST_CASE("boundedness: sup|H(u)| dominated by the calibrated constant") {
  auto corpus = verify::random_smooth_corpus(20, 1, 2.0 * M_PI / 256, 12345);
  QuadratureSpec spec;
  spec.regularity_probe = false;
  const double C = verify::calibrated_operator_constant(1, kOrder.alpha);
  for (const auto& u : corpus) {
    auto H = evaluate_H(u, kOrder, spec);
    double gnorm = lip_norm(u);
    GradientField gf = gradient(u);
    for (const auto& comp : gf.comp)
      gnorm += holder_seminorm(comp, HolderExponent{0.85}, 16);
    if (gnorm < 1e-14) continue;
    CHECK(sup_norm(H.values) / gnorm <= C);
  }
}

TEST_CASE("regularity probe flags white noise, passes smooth data") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  GridSpec s = periodic_1d(256);
  std::vector<double> noise(256);
  for (double& v : noise) v = 0.1 * unif(rng);
  GridFunction un(s, std::move(noise));
  QuadratureSpec spec;
  CHECK_THROWS_AS(evaluate_H(un, kOrder, spec), numerical_error);

  auto smooth = sample([](const Point& x) { return 0.3 * std::cos(x[0]); }, s);
  CHECK_NOTHROW(evaluate_H(smooth, kOrder, spec));
}

TEST_CASE("vertical shift changes H only at roundoff level") {
  const int n = 256;
  auto u = sample([](const Point& x) { return 0.2 * std::cos(x[0]); }, periodic_1d(n));
  std::vector<double> sh = u.values();
  for (double& v : sh) v += 5.0;
  GridFunction us(u.spec(), std::move(sh));
  QuadratureSpec spec;
  auto H = evaluate_H(u, kOrder, spec);
  auto Hs = evaluate_H(us, kOrder, spec);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    worst = std::max(worst, std::abs(Hs.values.values()[i] - H.values.values()[i]));
  CHECK(worst <= 1e-8);
}
