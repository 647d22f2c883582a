#include <sstream>

#include "doctest.h"
#include "neuropde/config.hpp"
#include "neuropde/io.hpp"

using namespace neuropde;

TEST_CASE("Backend names round-trip") {
  for (BackendKind k :
       {BackendKind::Software, BackendKind::HardwareP, BackendKind::HardwarePV})
    CHECK(parse_backend_kind(backend_kind_name(k)) == k);
  CHECK_THROWS_AS(parse_backend_kind("gpu"), std::invalid_argument);
}

TEST_CASE("Config JSON round-trip preserves every field") {
  RunConfig c;
  c.problem = "2d-diffusion";
  c.master_seed = 987;
  c.backend = BackendKind::HardwarePV;
  c.runs = 3;
  c.steady_1d.w = 777;
  c.diffusion_2d.source_i = 10;
  c.mtj.delta = 38.5;
  c.ftj.r_off = 2e5;
  c.weight_noise.mean_shift = -0.002;
  c.drive.charge_stayed = false;
  c.baselines = {{"ref", {1e-8, 2e-12}}};

  const RunConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(back.backend == BackendKind::HardwarePV);
  CHECK(back.baselines.at("ref").time_per_step_s == 1e-8);
}

TEST_CASE("Partial configs merge onto the defaults") {
  const RunConfig c = config_from_json(
      nlohmann::json{{"runs", 4}, {"steady_1d", {{"w", 123}}}});
  CHECK(c.runs == 4);
  CHECK(c.steady_1d.w == 123);
  CHECK(c.steady_1d.n == 50);          // untouched default
  CHECK(c.master_seed == RunConfig{}.master_seed);
}

TEST_CASE("Config validation rejects bad input") {
  CHECK_THROWS_AS(config_from_json({{"no_such_key", 1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"steady_1d", {{"bogus", 1}}}}),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json({{"runs", "three"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"runs", 0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"problem", "3d"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"backend", "gpu"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"mtj", {{"i_c0", -1.0}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"ftj", {{"r_on", 1e9}}}}), ConfigError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/file.json"), ConfigError);
}

TEST_CASE("Config hash is stable and sensitive") {
  RunConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  b.master_seed += 1;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("Noise reaches the backend only for the hw-pv kind") {
  RunConfig c;
  c.backend = BackendKind::HardwareP;
  CHECK(c.backend_config().noise.is_zero());
  c.backend = BackendKind::HardwarePV;
  CHECK(!c.backend_config().noise.is_zero());
  CHECK(c.tolerance_1d() == c.tolerance.solve_1d_hw_pv);
}

TEST_CASE("Artifact header embeds hash and seed") {
  const std::string h = artifact_header(0xABCDULL, 42);
  CHECK(h == "# config_hash=000000000000abcd master_seed=42\n");
}

TEST_CASE("CSV writers emit header plus one row per record") {
  std::ostringstream os;
  write_solution_1d_csv(os, "# h\n", {0.0, 0.5}, {0.0, 1.0}, {0.0, 1.1},
                        {0.0, 0.01});
  const std::string text = os.str();
  CHECK(text.find("# h\nx,u_rw_mean,u_an,sigma2\n") == 0);
  CHECK(text.find("0.5,1,1.1") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

TEST_CASE("Passage CSV keeps only the populated cells") {
  PassageMatrix m(3, 5);
  m.at(0, 1) = 7;
  m.at(2, 2) = 9;
  std::ostringstream os;
  write_passage_csv(os, "", m);
  CHECK(os.str() == "i,j,count\n0,1,7\n2,2,9\n");
}

TEST_CASE("Ledger JSON carries totals and baseline ratios") {
  Ledger l;
  l.steps = 10000;
  l.baselines = {{"chip_a", {34.8e-9, 3.918e-12}}};
  const nlohmann::json j = ledger_json(l);
  CHECK(j.at("steps") == 10000);
  CHECK(j.at("hw_time_s").get<double>() == doctest::Approx(1e-4));
  CHECK(j.at("ratios").at("chip_a").at("speedup").get<double>() ==
        doctest::Approx(3.48));
}
