#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "rydchain/experiment.hpp"

using namespace rydchain;
using nlohmann::json;

TEST_CASE("config expansion") {
  const auto grid = expand_config(json{{"gate", {"cz", "cnot"}}, {"n_A", {1, 2, 3}}, {"u_over_omega", 50}});
  REQUIRE(grid.size() == 6);
  CHECK(grid[0].gate == "cz");
  CHECK(grid[0].n_A == 1);
  CHECK(grid[2].n_A == 3);
  CHECK(grid[3].gate == "cnot");
  for (const auto& p : grid) CHECK(p.u_over_omega == 50.0);

  CHECK(expand_config(json::object()).size() == 1);
  CHECK(expand_config(json{{"n_A", 2}, {"output", "x.csv"}}).size() == 1);

  const auto split = expand_config(json{{"gamma", {1e-3}}, {"splitting", {"qubit", "ancilla", "equal"}}});
  REQUIRE(split.size() == 3);
  CHECK(split[0].gamma0 == 5e-4);
  CHECK(split[0].gammaA == 0.0);
  CHECK(split[1].gamma1 == 0.0);
  CHECK(split[1].gammaA == 1e-3);
  CHECK(split[2].gamma1 == 5e-4);
  CHECK(split[2].gammaA == 1e-3);

  const auto both = expand_config(json::array({json{{"n_A", 1}}, json{{"n_A", {2, 3}}}}));
  CHECK(both.size() == 3);

  CHECK_THROWS_AS(expand_config(json{{"gamm", 1e-3}}), ConfigError);
  CHECK_THROWS_AS(expand_config(json{{"gamma", 1e-3}}), ConfigError);
  CHECK_THROWS_AS(expand_config(json{{"gamma", 1e-3}, {"splitting", "qubit"}, {"gamma0", 0.0}}), ConfigError);
  CHECK_THROWS_AS(expand_config(json{{"gamma", 1e-3}, {"splitting", "half"}}), ConfigError);
  CHECK_THROWS_AS(expand_config(json{{"n_A", json::array()}}), ConfigError);
  CHECK_THROWS_AS(expand_config(json{{"n_A", 1.5}}), ConfigError);
  CHECK_THROWS_AS(expand_config(json{{"gate", "swap"}}), ConfigError);
  CHECK_THROWS_AS(expand_config(json(3)), ConfigError);
}

TEST_CASE("run point validation") {
  RunPoint p;
  CHECK_NOTHROW(p.validate());
  p.n_traj = 10;
  CHECK_THROWS_AS(p.validate(), ConfigError);

  RunPoint big;
  big.n_A = 6;
  CHECK_THROWS_AS(big.validate(), ConfigError);
  big.force = true;
  CHECK_NOTHROW(big.validate());

  RunPoint mc;
  mc.solver = Solver::Mcwf;
  mc.n_A = 8;
  CHECK_THROWS_AS(mc.validate(), ConfigError);
  mc.n_traj = 1;
  mc.seed = 1;
  CHECK_THROWS_AS(mc.validate(), ConfigError);
  mc.n_traj = 2;
  CHECK_NOTHROW(mc.validate());
  mc.seed.reset();
  CHECK_THROWS_AS(mc.validate(), ConfigError);

  RunPoint nn;
  nn.gate = "cnot_nn";
  nn.n_A = 1;
  CHECK_THROWS_AS(nn.validate(), ConfigError);
  nn.n_A = 2;
  CHECK(nn.resolved_variant() == "direct");
  CHECK_THROWS_AS((RunPoint{.gamma0 = -1.0}).validate(), ConfigError);

  RunPoint cz;
  cz.n_A = 1;
  CHECK(cz.resolved_variant() == "sigmax");
  cz.n_A = 2;
  CHECK(cz.resolved_variant() == "direct");
}

TEST_CASE("csv format") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(200.0) == "200");
  CHECK(format_number(1.28e-3) == "0.00128");
  CHECK(format_number(1e-4) == "1e-04");

  SweepRecord r;
  r.gate = "cnot";
  r.variant = "direct";
  r.n_A = 3;
  r.u_over_omega = 200.0;
  r.gamma0 = 1e-4;
  r.gamma1 = 2e-4;
  r.gammaA = 3e-4;
  r.f_pro = 0.987654321012345;
  r.wall_time_s = 1.5;
  const auto line = csv_row(r);
  CHECK(line == "cnot,direct,3,200,1e-04,2e-04,3e-04,dense,,,0.987654321012345,,,,,1.5");
  const auto back = parse_csv_row(line);
  CHECK(back.f_pro == r.f_pro);
  CHECK(back.gammaA == r.gammaA);
  CHECK_FALSE(back.n_traj.has_value());

  SweepRecord m = r;
  m.gate = "cnot_nn";
  m.gammaA.reset();
  m.solver = Solver::Mcwf;
  m.f_pro.reset();
  m.n_traj = 500;
  m.seed = 20170101;
  m.f_lower = 0.95;
  m.f_upper = 0.97;
  m.stderr_lower = 2e-3;
  m.stderr_upper = 1e-3;
  const auto mline = csv_row(m);
  CHECK(mline.find(",,mcwf,500,20170101,,0.95,0.97,") != std::string::npos);
  CHECK(csv_row(parse_csv_row(mline)) == mline);

  std::istringstream in(std::string(kCsvHeader) + "\n" + line + "\n\n" + mline + "\n");
  CHECK(read_csv(in).size() == 2);
  std::istringstream wrong("gate,n_A\n");
  CHECK_THROWS_AS(read_csv(wrong), ConfigError);
  CHECK_THROWS_AS(parse_csv_row("cz,direct,1"), ConfigError);
  CHECK_THROWS_AS(parse_csv_row("cz,direct,1,x,0,0,0,dense,,,1,,,,,0"), ConfigError);
}

TEST_CASE("result files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "rydchain_test_experiment";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string csv = (dir / "out.csv").string();
  CHECK(sidecar_path(csv) == (dir / "out.jsonl").string());

  RunPoint p;
  p.gate = "cnot";
  p.n_A = 2;
  const auto r = run_point(p, 1);
  CHECK(1.0 - *r.record.f_pro < 2e-4);
  CHECK(r.record.variant == "direct");
  append_results(csv, {r});
  append_results(csv, {r, r});

  const auto rows = read_csv(csv);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].f_pro == r.record.f_pro);
  std::ifstream side(sidecar_path(csv));
  std::string line;
  int lines = 0;
  while (std::getline(side, line)) {
    const auto j = json::parse(line);
    CHECK(j["config"]["gate"] == "cnot");
    CHECK(j["config"]["variant"] == "direct");
    CHECK(j["report"].contains("f_pro"));
    ++lines;
  }
  CHECK(lines == 3);
  fs::remove_all(dir);
}

TEST_CASE("presets") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    CHECK_FALSE(expand_config(preset(name)).empty());
  }
  const auto cz = expand_config(preset("fig-cz-dissipation"));
  CHECK(cz.size() == 10 * 4 * 3);
  for (const auto& p : cz) CHECK((p.solver == Solver::Mcwf) == (p.n_A > 5));
  CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("monte carlo rows are reproducible") {
  RunPoint p;
  p.gate = "cz";
  p.n_A = 1;
  p.gamma0 = p.gamma1 = 5e-3;
  p.gammaA = 1e-2;
  p.solver = Solver::Mcwf;
  p.n_traj = 16;
  p.seed = 99;
  auto a = run_point(p, 1).record;
  auto b = run_point(p, 2).record;
  a.wall_time_s = b.wall_time_s = 0.0;
  CHECK(csv_row(a) == csv_row(b));
  CHECK(a.f_lower.has_value());
  CHECK_FALSE(a.f_pro.has_value());
  p.seed = 100;
  auto c = run_point(p, 1).record;
  c.wall_time_s = 0.0;
  CHECK(csv_row(a) != csv_row(c));
}

TEST_CASE("nearest-neighbour comparison") {
  std::vector<RunResult> runs;
  const auto cmp = compare_nn({2}, {0.0, 1e-3}, 200.0, 0.4 * kPi, &runs, 1);
  REQUIRE(cmp.size() == 2);
  CHECK(runs.size() == 4);
  CHECK(cmp[0].f_ours == doctest::Approx(1.0).epsilon(2e-4));
  CHECK(cmp[0].f_nn == doctest::Approx(1.0).epsilon(2e-4));
  CHECK(cmp[1].f_ours > cmp[1].f_nn);
  CHECK(cmp[1].predicted == doctest::Approx(gain_ratio(2, 1e-3, 0.4 * kPi)));
  CHECK(cmp[1].ratio == doctest::Approx(cmp[1].f_ours / cmp[1].f_nn));
}
