#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "neuropde/config.hpp"
#include "neuropde/io.hpp"
#include "neuropde/pde.hpp"

namespace {

using namespace neuropde;

enum ExitCode {
  kOk = 0,
  kConfigError = 2,
  kToleranceFailure = 3,
  kCapExceeded = 4,
};

int log_level() {
  static int level = [] {
    const char* env = std::getenv("NEUROPDE_LOG");
    if (!env) return 1;
    const std::string s = env;
    if (s == "debug") return 2;
    if (s == "info") return 1;
    if (s == "warn") return 0;
    return -1;  // error: only hard failures
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[neuropde] " << msg << "\n";
}
void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[neuropde:debug] " << msg << "\n";
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

void write_json(const std::filesystem::path& p, const nlohmann::json& j) {
  auto os = open_out(p);
  os << j.dump(2) << "\n";
}

int cmd_solve_1d(const RunConfig& cfg) {
  const std::string header =
      artifact_header(config_hash(cfg), cfg.master_seed);
  const int workers = cfg.effective_workers();

  SteadyHeat1D p = cfg.steady_1d;
  Ledger ledger;
  ledger.baselines = cfg.baselines;
  const std::vector<double> mean = mean_solution_1d(
      p, cfg.backend_config(), cfg.master_seed, workers, cfg.runs, &ledger);
  const std::vector<double> an = analytical_grid_1d(p);
  const VarianceReport rep = variance(mean, an, cfg.runs);

  std::vector<double> x(p.n);
  for (int i = 0; i < p.n; ++i) x[i] = i * (p.l / p.n);
  const std::filesystem::path out(cfg.out_dir);
  {
    auto os = open_out(out / "solution_1d.csv");
    write_solution_1d_csv(os, header, x, mean, an, rep.sigma2);
  }
  write_json(out / "variance_1d.json", variance_report_json(rep));
  write_json(out / "ledger_1d.json", ledger_json(ledger));

  const double tol = cfg.tolerance_1d();
  const bool pass = rep.max_sigma2 < tol;
  std::cout << "solve-1d backend=" << backend_kind_name(cfg.backend)
            << " runs=" << cfg.runs << " max_sigma2=" << std::setprecision(6)
            << rep.max_sigma2 << " tolerance=" << tol << " -> "
            << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kOk : kToleranceFailure;
}

int cmd_solve_2d(const RunConfig& cfg) {
  const std::string header =
      artifact_header(config_hash(cfg), cfg.master_seed);
  const int workers = cfg.effective_workers();

  Diffusion2D p = cfg.diffusion_2d;
  Ledger ledger;
  ledger.baselines = cfg.baselines;
  Solution2D last;
  const std::vector<double> mean =
      mean_grid_2d(p, cfg.backend_config(), cfg.master_seed, workers, cfg.runs,
                   &ledger, &last);
  const std::vector<double> an = analytical_grid_2d(p);
  const VarianceReport rep = variance(mean, an, cfg.runs);

  const std::filesystem::path out(cfg.out_dir);
  {
    auto os = open_out(out / "solution_2d.csv");
    write_grid_2d_csv(os, header, p.n, last.x, mean, an, rep.sigma2);
  }
  write_json(out / "plot_2d.json", plot_data_2d_json(p, last, mean, an));
  write_json(out / "variance_2d.json", variance_report_json(rep));
  write_json(out / "ledger_2d.json", ledger_json(ledger));

  const double tol = cfg.tolerance.solve_2d;
  const bool pass = rep.max_sigma2 < tol;
  std::cout << "solve-2d backend=" << backend_kind_name(cfg.backend)
            << " runs=" << cfg.runs << " max_sigma2=" << std::setprecision(6)
            << rep.max_sigma2 << " tolerance=" << tol << " -> "
            << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kOk : kToleranceFailure;
}

int cmd_sweep(const RunConfig& cfg) {
  const std::string header =
      artifact_header(config_hash(cfg), cfg.master_seed);
  std::vector<BackendConfig> backends;
  for (const std::string& name : cfg.sweep.backends) {
    RunConfig c = cfg;
    c.backend = parse_backend_kind(name);
    backends.push_back(c.backend_config());
  }
  const auto rows =
      convergence_sweep(cfg.diffusion_2d, cfg.sweep.w_values, backends,
                        cfg.sweep.repeats, cfg.master_seed,
                        cfg.effective_workers());
  const std::filesystem::path out(cfg.out_dir);
  {
    auto os = open_out(out / "sweep.csv");
    write_sweep_csv(os, header, rows);
  }
  for (const SweepRow& r : rows)
    std::cout << "sweep w=" << r.w << " backend=" << backend_kind_name(r.backend)
              << " max_sigma2=" << std::setprecision(6) << r.mean_max_sigma2
              << "\n";
  return kOk;
}

int cmd_devices_mc(const RunConfig& cfg) {
  const std::string header =
      artifact_header(config_hash(cfg), cfg.master_seed);

  // Weight-noise statistics over n_samples draws.
  RngStream rng(cfg.master_seed, 0x57A75ULL, 0);
  double sum = 0.0, sum2 = 0.0;
  const std::uint64_t n = cfg.devices_mc.n_samples;
  for (std::uint64_t k = 0; k < n; ++k) {
    const double v = sample_weight_noise(cfg.weight_noise, rng);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  const double shift = mean - 1.0;

  nlohmann::json stats = {{"n_samples", n},
                          {"mean_factor", mean},
                          {"relative_mean_shift", shift},
                          {"variance", var}};
  const std::filesystem::path out(cfg.out_dir);
  write_json(out / "weight_noise_stats.json", stats);

  HistoryConfig hc;
  hc.mtj = cfg.mtj;
  hc.ftj = cfg.ftj;
  hc.variation = cfg.variation;
  hc.noise = cfg.weight_noise;
  hc.drive = cfg.drive;
  hc.r_series = cfg.r_series;
  hc.ps_target = cfg.devices_mc.ps_target;
  const auto table =
      build_activation_history(hc, cfg.devices_mc.n_trials, cfg.master_seed);
  {
    auto os = open_out(out / "activation_history.csv");
    write_activation_history_csv(os, header, table);
  }

  std::uint64_t stayed = 0;
  for (const auto& r : table)
    if (r.outcome == MoveResult::Stayed) ++stayed;
  std::cout << "devices-mc n_samples=" << n << " |mean_shift|="
            << std::setprecision(6) << std::abs(shift)
            << " variance=" << var << "\n";
  std::cout << "devices-mc n_trials=" << table.size()
            << " empirical_ps=" << static_cast<double>(stayed) / table.size()
            << " target_ps=" << hc.ps_target << "\n";
  return kOk;
}

int cmd_calibrate(const RunConfig& cfg) {
  const Calibration cal =
      calibrate_drive(cfg.calibrate_ps_target, cfg.mtj, cfg.drive);
  std::cout << "calibrate ps_target=" << std::setprecision(6)
            << cfg.calibrate_ps_target << " i_drive=" << cal.i_drive
            << " A (i/i_c0=" << cal.i_drive / cfg.mtj.i_c0 << ") w=" << cal.w
            << "\n";

  // Forward verification: interior cycles on nominal devices, no noise.
  const std::uint64_t trials = 100000;
  RngStream rng(cfg.master_seed, 0xCA1ULL, 0);
  Synapse syn{FtjState{}, cfg.ftj, cfg.r_series};
  syn = synapse_program(syn, cal.w).synapse;
  std::uint64_t stayed = 0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    Neuron left{MtjState{}, cfg.mtj, -1};
    Neuron center{MtjState{Magnetization::AntiParallel}, cfg.mtj, 0};
    Neuron right{MtjState{}, cfg.mtj, 1};
    const auto oc = activation_cycle(left, center, right, syn,
                                     WeightNoiseModel::none(), cfg.drive, rng);
    if (oc.result == MoveResult::Stayed) ++stayed;
  }
  const double ps_hat = static_cast<double>(stayed) / trials;
  const double ci = 3.0 * std::sqrt(cfg.calibrate_ps_target *
                                    (1.0 - cfg.calibrate_ps_target) / trials);
  std::cout << "calibrate verification trials=" << trials
            << " empirical_ps=" << ps_hat << " 3sigma_ci=+-" << ci << " -> "
            << (std::abs(ps_hat - cfg.calibrate_ps_target) <= ci ? "OK"
                                                                 : "OUTSIDE CI")
            << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NeuroPDE: Monte Carlo random-walk PDE solving on simulated "
               "spintronic/ferroelectric hardware"};
  app.require_subcommand(0, 1);

  std::string config_path, backend_str, out_dir;
  std::uint64_t seed = 0;
  int workers = 0;
  bool print_config = false;
  app.add_option("--config", config_path, "JSON config file");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed");
  auto* workers_opt = app.add_option("--workers", workers, "Worker count");
  auto* backend_opt =
      app.add_option("--backend", backend_str, "software|hw-p|hw-pv");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--print-config", print_config,
               "Print the effective config and exit");

  auto* c1 = app.add_subcommand("solve-1d", "Steady-state 1D heat problem");
  auto* c2 = app.add_subcommand("solve-2d", "Time-dependent 2D diffusion");
  auto* c3 = app.add_subcommand("sweep", "Particle-scale convergence sweep");
  auto* c4 = app.add_subcommand("devices-mc",
                                "Device Monte Carlo statistics and history");
  auto* c5 = app.add_subcommand("calibrate", "Drive calibration for a target "
                                             "stay probability");
  for (CLI::App* sub : {c1, c2, c3, c4, c5}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg =
        config_path.empty() ? RunConfig{} : load_config_file(config_path);
    if (seed_opt->count()) cfg.master_seed = seed;
    if (workers_opt->count()) cfg.workers = workers;
    if (backend_opt->count()) cfg.backend = parse_backend_kind(backend_str);
    if (out_opt->count()) cfg.out_dir = out_dir;
    if (c1->parsed()) cfg.problem = "1d-steady";
    if (c2->parsed()) cfg.problem = "2d-diffusion";
    if (c3->parsed()) cfg.problem = "sweep";
    if (c4->parsed()) cfg.problem = "devices-mc";
    if (c5->parsed()) cfg.problem = "calibrate";

    if (print_config) {
      std::cout << config_to_json(cfg).dump(2) << "\n";
      return kOk;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return kConfigError;
    }

    {
      std::ostringstream os;
      os << "config_hash=" << std::hex << config_hash(cfg);
      log_debug(os.str());
    }
    log_info("problem=" + cfg.problem +
             " backend=" + backend_kind_name(cfg.backend));

    if (cfg.problem == "1d-steady") return cmd_solve_1d(cfg);
    if (cfg.problem == "2d-diffusion") return cmd_solve_2d(cfg);
    if (cfg.problem == "sweep") return cmd_sweep(cfg);
    if (cfg.problem == "devices-mc") return cmd_devices_mc(cfg);
    return cmd_calibrate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const CalibrationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
