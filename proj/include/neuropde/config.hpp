#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "neuropde/pde.hpp"
#include "neuropde/walk.hpp"

namespace neuropde {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepConfig {
  std::vector<std::uint64_t> w_values{100, 1000, 10000, 100000};
  std::vector<std::string> backends{"software", "hw-p", "hw-pv"};
  int repeats = 5;
};

struct DevicesMcConfig {
  std::uint64_t n_samples = 50000;  // weight-noise statistics
  std::uint64_t n_trials = 50000;   // activation-history table
  double ps_target = 0.5317;
};

struct ToleranceConfig {
  double solve_1d_software = 1e-3;
  double solve_1d_hw_p = 1e-3;
  double solve_1d_hw_pv = 1e-2;
  double solve_2d = 1e-2;
};

// Effective run configuration. Every experiment of the default pipeline is
// runnable with zero flags; the config file overrides individual keys.
struct RunConfig {
  std::string problem = "1d-steady";
  std::uint64_t master_seed = 42;
  int workers = 0;  // 0 = all available cores
  BackendKind backend = BackendKind::Software;
  std::string out_dir = "out";
  int runs = 10;
  std::uint64_t max_steps = 10'000'000;

  SteadyHeat1D steady_1d;
  Diffusion2D diffusion_2d;
  SweepConfig sweep;
  DevicesMcConfig devices_mc;
  double calibrate_ps_target = 0.5317;
  ToleranceConfig tolerance;

  MtjParams mtj;
  FtjParams ftj;
  VariationSpec variation;
  WeightNoiseModel weight_noise;
  DriveConfig drive;
  double r_series = 35e3;
  std::map<std::string, Ledger::Baseline> baselines{
      {"chip_a", {34.8e-9, 3.918e-12}},
      {"chip_b", {3.15e-6, 43.25e-12}}};

  // Device stack + selected backend kind, as the walk engine consumes it.
  BackendConfig backend_config() const;
  double tolerance_1d() const;
  int effective_workers() const;
};

nlohmann::json config_to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

// Loads a config file and merges it onto the defaults; unknown keys are
// rejected.
RunConfig load_config_file(const std::string& path);

std::uint64_t config_hash(const RunConfig& c);

}  // namespace neuropde
