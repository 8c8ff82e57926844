#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "fracflow/cli.hpp"
#include "fracflow/config.hpp"
#include "fracflow/io.hpp"

using namespace fracflow;

namespace {

std::string tmp_dir(const char* leaf) {
  auto p = std::filesystem::temp_directory_path() / leaf;
  std::filesystem::remove_all(p);
  return p.string();
}

}  // namespace

TEST_CASE("manifest parsing: keys, comments, overrides, typed getters") {
  RunManifest m = RunManifest::from_text(
      "# comment\n"
      "order.alpha = 0.75\n"
      "grid.d = 1\n"
      "flow.T = 0.5\n"
      "flow.holder_gammas = 0.5, 1.25\n"
      "quad.tail_mode = sup-bound\n");
  CHECK(m.get_double("order.alpha", 0.0) == 0.75);
  CHECK(m.get_int("grid.d", 0) == 1);
  auto gl = m.get_double_list("flow.holder_gammas");
  REQUIRE(gl.size() == 2);
  CHECK(gl[1] == 1.25);
  CHECK(m.order().alpha == 0.75);
  CHECK(m.quadrature().tail_mode == TailMode::SupBound);

  m.set_override("order.alpha=0.25");
  CHECK(m.order().alpha == 0.25);

  CHECK_THROWS_AS(RunManifest::from_text("no equals sign here\n"), config_error);
  CHECK_THROWS_AS(m.set_override("novalue"), config_error);
  RunManifest bad = RunManifest::from_text("order.alpha = abc\n");
  CHECK_THROWS_AS(bad.get_double("order.alpha", 0.5), config_error);
}

TEST_CASE("manifest hash: stable, canonical, sensitive to every entry") {
  RunManifest a = RunManifest::from_text("x.b = 2\nx.a = 1\n");
  RunManifest b = RunManifest::from_text("x.a = 1\nx.b = 2\n");
  CHECK(a.hash() == b.hash());  // order-independent canonical text
  CHECK(a.hash().size() == 16);

  RunManifest c = RunManifest::from_text("x.a = 1\nx.b = 3\n");
  CHECK(a.hash() != c.hash());
  RunManifest d = a;
  d.seed = 9;
  CHECK(a.hash() != d.hash());

  // frozen: the canonical rendering is part of the artifact contract
  RunManifest e = RunManifest::from_text("order.alpha = 0.5\n");
  CHECK(e.canonical_text() == "order.alpha=0.5\nprofile=cosine\nseed=0\n");
}

TEST_CASE("profiles: known names and basic shapes") {
  CHECK(is_known_profile("cosine"));
  CHECK(is_known_profile("rough-cusp"));
  CHECK(!is_known_profile("paraboloid"));
  CHECK_THROWS_AS(make_profile("paraboloid", 1, 0.01, 4.0), config_error);

  Profile p = make_profile("gaussian-bump", 1, 1.0 / 64, 6.0);
  auto g = sample_profile(p);
  CHECK(g.extension() == Extension::CompactSupport);
  CHECK(sup_norm(g) == doctest::Approx(0.5).epsilon(1e-12));

  Profile c = make_profile("cosine", 1, 1.0 / 128, 6.0);
  auto gc = sample_profile(c);
  CHECK(gc.extension() == Extension::Periodic);
  // grid-period wavenumber: the sampled field wraps seamlessly
  CHECK(gc.at(0) == doctest::Approx(gc.value_at({gc.n(0) * gc.h(), 0.0})).epsilon(1e-12));

  Profile a = make_profile("affine", 2, 1.0 / 16, 3.0, ProfileParams{});
  auto ga = sample_profile(a);
  CHECK(ga.d() == 2);
  CHECK(ga.extension() == Extension::AffineFarField);
}

TEST_CASE("cmd_eval: zero and affine profiles produce all-zero fields") {
  for (const char* prof : {"zero", "affine"}) {
    std::string out = tmp_dir("fracflow_eval_test");
    int rc = cli::run({"eval", "--profile", prof, "--out", out, "--set", "grid.h=0.03125",
                       "--set", "grid.box_halfwidth=4", "--threads", "1"});
    CHECK(rc == 0);
    std::string csv = read_text_file(out + "/field.csv");
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
      double v = std::stod(line.substr(line.rfind(',') + 1));
      CHECK(std::abs(v) <= 1e-11);
    }
    CHECK(read_text_file(out + "/summary.json").find("manifest_hash") != std::string::npos);
  }
}

TEST_CASE("cmd_flow: determinism across reruns and thread counts") {
  std::string out1 = tmp_dir("fracflow_det1");
  std::string out2 = tmp_dir("fracflow_det2");
  std::vector<std::string> common = {
      "flow",  "--set",     "grid.h=0.049087385212340526",  // 2 pi / 128
      "--set", "flow.T=0.05", "--set", "flow.cfl_factor=2",
      "--set", "profile.amplitude=0.05", "--profile", "cosine"};
  auto run_with = [&](const std::string& out, const char* threads) {
    auto args = common;
    args.push_back("--out");
    args.push_back(out);
    args.push_back("--threads");
    args.push_back(threads);
    return cli::run(args);
  };
  CHECK(run_with(out1, "1") == 0);
  CHECK(run_with(out2, "3") == 0);
  CHECK(read_text_file(out1 + "/trace.csv") == read_text_file(out2 + "/trace.csv"));
  CHECK(read_text_file(out1 + "/trace.csv").rfind("t,sup_norm,lip_norm,sup_dtu", 0) == 0);

  // byte-identical rerun with identical manifest
  std::string out3 = tmp_dir("fracflow_det3");
  CHECK(run_with(out3, "1") == 0);
  CHECK(read_text_file(out1 + "/trace.csv") == read_text_file(out3 + "/trace.csv"));
}

TEST_CASE("cmd_verify: universal suite on the flat profile; corrupted control detected") {
  std::string out = tmp_dir("fracflow_verify_test");
  int rc = cli::run({"verify", "--profile", "zero", "--out", out, "--set", "grid.h=0.0625",
                     "--set", "grid.box_halfwidth=3", "--set", "flow.T=0.05", "--set",
                     "flow.cfl_factor=2", "--set", "verify.suite=universal,negative-control"});
  CHECK(rc == 0);
  std::string jsonl = read_text_file(out + "/verify.jsonl");
  CHECK(jsonl.find("\"check\":\"universal\"") != std::string::npos);
  CHECK(jsonl.find("\"check\":\"negative-control\"") != std::string::npos);
  CHECK(jsonl.find("\"pass\":false") == std::string::npos);
}

TEST_CASE("cmd_oracle: empty alpha list is a usage error (exit 2)") {
  std::string out = tmp_dir("fracflow_oracle_err");
  int rc = cli::run({"oracle", "--out", out, "--set", "oracle.alphas="});
  CHECK(rc == 2);
}

TEST_CASE("cmd_oracle: lambda table over an alpha grid is positive") {
  std::string out = tmp_dir("fracflow_oracle_tab");
  int rc = cli::run({"oracle", "--out", out, "--set", "oracle.alphas=0.25,0.5,0.75", "--set",
                     "oracle.profiles=gaussian-bump", "--set", "grid.h=0.015625", "--set",
                     "grid.box_halfwidth=6", "--set", "oracle.r_set=6"});
  CHECK(rc == 0);
  std::string csv = read_text_file(out + "/lambda.csv");
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    auto c1 = line.find(','), c2 = line.rfind(',');
    double lam = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    CHECK(lam > 0.0);
  }
  CHECK(rows == 3);
  CHECK(read_text_file(out + "/cross_check.csv").find("gaussian-bump") != std::string::npos);
}

TEST_CASE("unknown profile and bad config keys give exit 2") {
  CHECK(cli::run({"eval", "--profile", "nosuch", "--out", tmp_dir("fracflow_e2")}) == 2);
  CHECK(cli::run({"flow", "--set", "grid.d=3", "--out", tmp_dir("fracflow_e3")}) == 2);
}
