#include "neuropde/config.hpp"

#include <algorithm>
#include <fstream>
#include <thread>

#include "neuropde/io.hpp"

namespace neuropde {

BackendConfig RunConfig::backend_config() const {
  BackendConfig b;
  b.kind = backend;
  b.mtj = mtj;
  b.ftj = ftj;
  b.variation = variation;
  b.noise = backend == BackendKind::HardwarePV ? weight_noise
                                               : WeightNoiseModel::none();
  b.drive = drive;
  b.r_series = r_series;
  return b;
}

double RunConfig::tolerance_1d() const {
  switch (backend) {
    case BackendKind::Software: return tolerance.solve_1d_software;
    case BackendKind::HardwareP: return tolerance.solve_1d_hw_p;
    case BackendKind::HardwarePV: return tolerance.solve_1d_hw_pv;
  }
  return tolerance.solve_1d_software;
}

int RunConfig::effective_workers() const {
  if (workers > 0) return workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["problem"] = c.problem;
  j["master_seed"] = c.master_seed;
  j["workers"] = c.workers;
  j["backend"] = backend_kind_name(c.backend);
  j["out_dir"] = c.out_dir;
  j["runs"] = c.runs;
  j["max_steps"] = c.max_steps;

  j["steady_1d"] = {{"l", c.steady_1d.l},   {"n", c.steady_1d.n},
                    {"f", c.steady_1d.f},   {"dt", c.steady_1d.dt},
                    {"w", c.steady_1d.w},   {"diffusion", c.steady_1d.diffusion}};
  j["diffusion_2d"] = {{"c0", c.diffusion_2d.c0},
                       {"d", c.diffusion_2d.d},
                       {"w", c.diffusion_2d.w},
                       {"t_steps", c.diffusion_2d.t_steps},
                       {"dt", c.diffusion_2d.dt},
                       {"l", c.diffusion_2d.l},
                       {"n", c.diffusion_2d.n},
                       {"source", {c.diffusion_2d.source_i, c.diffusion_2d.source_j}}};
  j["sweep"] = {{"w_values", c.sweep.w_values},
                {"backends", c.sweep.backends},
                {"repeats", c.sweep.repeats}};
  j["devices_mc"] = {{"n_samples", c.devices_mc.n_samples},
                     {"n_trials", c.devices_mc.n_trials},
                     {"ps_target", c.devices_mc.ps_target}};
  j["calibrate"] = {{"ps_target", c.calibrate_ps_target}};
  j["tolerance"] = {{"solve_1d_software", c.tolerance.solve_1d_software},
                    {"solve_1d_hw_p", c.tolerance.solve_1d_hw_p},
                    {"solve_1d_hw_pv", c.tolerance.solve_1d_hw_pv},
                    {"solve_2d", c.tolerance.solve_2d}};

  // Device parameters; thicknesses in nm, energies in eV, times in s,
  // resistances in ohm, currents in A, voltages in V, temperature in K.
  j["mtj"] = {{"t_fl", c.mtj.t_fl},   {"cd", c.mtj.cd},
              {"t_tb", c.mtj.t_tb},   {"tmr", c.mtj.tmr},
              {"tau0", c.mtj.tau0},   {"delta", c.mtj.delta},
              {"i_c0", c.mtj.i_c0},   {"r_p", c.mtj.r_p}};
  j["ftj"] = {{"t_b", c.ftj.t_b},         {"r", c.ftj.r},
              {"u_n", c.ftj.u_n},         {"u_p", c.ftj.u_p},
              {"tau0_n", c.ftj.tau0_n},   {"tau0_p", c.ftj.tau0_p},
              {"phi1_off", c.ftj.phi1_off}, {"phi1_on", c.ftj.phi1_on},
              {"phi2_off", c.ftj.phi2_off}, {"phi2_on", c.ftj.phi2_on},
              {"m_off", c.ftj.m_off},     {"m_on", c.ftj.m_on},
              {"r_on", c.ftj.r_on},       {"r_off", c.ftj.r_off},
              {"v_c", c.ftj.v_c},         {"temperature", c.ftj.temperature}};
  j["variation"] = {{"sigma_t_fl", c.variation.sigma_t_fl},
                    {"sigma_t_tb", c.variation.sigma_t_tb},
                    {"sigma_tmr", c.variation.sigma_tmr}};
  j["weight_noise"] = {{"mean_shift", c.weight_noise.mean_shift},
                       {"variance", c.weight_noise.variance}};
  j["drive"] = {{"r_access", c.drive.r_access},
                {"v_read", c.drive.v_read},
                {"pulse_t", c.drive.pulse_t},
                {"cycle_time_s", c.drive.cycle_time_s},
                {"cycle_energy_j", c.drive.cycle_energy_j},
                {"charge_stayed", c.drive.charge_stayed}};
  j["r_series"] = c.r_series;

  nlohmann::json bl = nlohmann::json::object();
  for (const auto& [name, b] : c.baselines)
    bl[name] = {{"time_per_step_s", b.time_per_step_s},
                {"energy_per_step_j", b.energy_per_step_j}};
  j["baselines"] = bl;
  return j;
}

namespace {

const std::vector<std::string> kProblems = {"1d-steady", "2d-diffusion",
                                            "sweep", "devices-mc", "calibrate"};

// Merges user keys onto the defaults, rejecting keys the schema does not
// know. "baselines" is the one open table.
void merge_checked(nlohmann::json& base, const nlohmann::json& user,
                   const std::string& path) {
  if (!user.is_object())
    throw ConfigError("config: expected object at " + path);
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key_path = path + "/" + it.key();
    if (!base.contains(it.key()) && path != "/baselines")
      throw ConfigError("config: unknown key " + key_path);
    if (base.contains(it.key()) && base[it.key()].is_object() &&
        it.key() != "baselines") {
      merge_checked(base[it.key()], it.value(), key_path);
    } else if (it.key() == "baselines") {
      if (!it.value().is_object())
        throw ConfigError("config: baselines must be an object");
      base["baselines"] = it.value();
    } else {
      base[it.key()] = it.value();
    }
  }
}

// Re-raises parameter validation failures as config errors so the CLI maps
// them to the config-error exit code.
template <typename P>
void validate_checked(const P& params) {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

template <typename T>
T get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " +
                      e.what());
  }
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
  nlohmann::json merged = config_to_json(RunConfig{});
  merge_checked(merged, j, "");

  RunConfig c;
  c.problem = get<std::string>(merged, "problem");
  if (std::find(kProblems.begin(), kProblems.end(), c.problem) ==
      kProblems.end())
    throw ConfigError("config: unknown problem '" + c.problem + "'");
  c.master_seed = get<std::uint64_t>(merged, "master_seed");
  c.workers = get<int>(merged, "workers");
  try {
    c.backend = parse_backend_kind(get<std::string>(merged, "backend"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.out_dir = get<std::string>(merged, "out_dir");
  c.runs = get<int>(merged, "runs");
  if (c.runs < 1) throw ConfigError("config: runs must be >= 1");
  c.max_steps = get<std::uint64_t>(merged, "max_steps");

  const auto& s1 = merged.at("steady_1d");
  c.steady_1d.l = get<double>(s1, "l");
  c.steady_1d.n = get<int>(s1, "n");
  c.steady_1d.f = get<double>(s1, "f");
  c.steady_1d.dt = get<double>(s1, "dt");
  c.steady_1d.w = get<std::uint64_t>(s1, "w");
  c.steady_1d.diffusion = get<double>(s1, "diffusion");

  const auto& d2 = merged.at("diffusion_2d");
  c.diffusion_2d.c0 = get<double>(d2, "c0");
  c.diffusion_2d.d = get<double>(d2, "d");
  c.diffusion_2d.w = get<std::uint64_t>(d2, "w");
  c.diffusion_2d.t_steps = get<std::uint64_t>(d2, "t_steps");
  c.diffusion_2d.dt = get<double>(d2, "dt");
  c.diffusion_2d.l = get<double>(d2, "l");
  c.diffusion_2d.n = get<int>(d2, "n");
  const auto src = get<std::vector<int>>(d2, "source");
  if (src.size() != 2) throw ConfigError("config: source must be [i, j]");
  c.diffusion_2d.source_i = src[0];
  c.diffusion_2d.source_j = src[1];

  const auto& sw = merged.at("sweep");
  c.sweep.w_values = get<std::vector<std::uint64_t>>(sw, "w_values");
  c.sweep.backends = get<std::vector<std::string>>(sw, "backends");
  for (const auto& b : c.sweep.backends) parse_backend_kind(b);
  c.sweep.repeats = get<int>(sw, "repeats");

  const auto& dm = merged.at("devices_mc");
  c.devices_mc.n_samples = get<std::uint64_t>(dm, "n_samples");
  c.devices_mc.n_trials = get<std::uint64_t>(dm, "n_trials");
  c.devices_mc.ps_target = get<double>(dm, "ps_target");

  c.calibrate_ps_target = get<double>(merged.at("calibrate"), "ps_target");

  const auto& tol = merged.at("tolerance");
  c.tolerance.solve_1d_software = get<double>(tol, "solve_1d_software");
  c.tolerance.solve_1d_hw_p = get<double>(tol, "solve_1d_hw_p");
  c.tolerance.solve_1d_hw_pv = get<double>(tol, "solve_1d_hw_pv");
  c.tolerance.solve_2d = get<double>(tol, "solve_2d");

  const auto& m = merged.at("mtj");
  c.mtj.t_fl = get<double>(m, "t_fl");
  c.mtj.cd = get<double>(m, "cd");
  c.mtj.t_tb = get<double>(m, "t_tb");
  c.mtj.tmr = get<double>(m, "tmr");
  c.mtj.tau0 = get<double>(m, "tau0");
  c.mtj.delta = get<double>(m, "delta");
  c.mtj.i_c0 = get<double>(m, "i_c0");
  c.mtj.r_p = get<double>(m, "r_p");
  validate_checked(c.mtj);

  const auto& f = merged.at("ftj");
  c.ftj.t_b = get<double>(f, "t_b");
  c.ftj.r = get<double>(f, "r");
  c.ftj.u_n = get<double>(f, "u_n");
  c.ftj.u_p = get<double>(f, "u_p");
  c.ftj.tau0_n = get<double>(f, "tau0_n");
  c.ftj.tau0_p = get<double>(f, "tau0_p");
  c.ftj.phi1_off = get<double>(f, "phi1_off");
  c.ftj.phi1_on = get<double>(f, "phi1_on");
  c.ftj.phi2_off = get<double>(f, "phi2_off");
  c.ftj.phi2_on = get<double>(f, "phi2_on");
  c.ftj.m_off = get<double>(f, "m_off");
  c.ftj.m_on = get<double>(f, "m_on");
  c.ftj.r_on = get<double>(f, "r_on");
  c.ftj.r_off = get<double>(f, "r_off");
  c.ftj.v_c = get<double>(f, "v_c");
  c.ftj.temperature = get<double>(f, "temperature");
  validate_checked(c.ftj);

  const auto& v = merged.at("variation");
  c.variation.sigma_t_fl = get<double>(v, "sigma_t_fl");
  c.variation.sigma_t_tb = get<double>(v, "sigma_t_tb");
  c.variation.sigma_tmr = get<double>(v, "sigma_tmr");
  validate_checked(c.variation);

  const auto& wn = merged.at("weight_noise");
  c.weight_noise.mean_shift = get<double>(wn, "mean_shift");
  c.weight_noise.variance = get<double>(wn, "variance");

  const auto& dr = merged.at("drive");
  c.drive.r_access = get<double>(dr, "r_access");
  c.drive.v_read = get<double>(dr, "v_read");
  c.drive.pulse_t = get<double>(dr, "pulse_t");
  c.drive.cycle_time_s = get<double>(dr, "cycle_time_s");
  c.drive.cycle_energy_j = get<double>(dr, "cycle_energy_j");
  c.drive.charge_stayed = get<bool>(dr, "charge_stayed");

  c.r_series = get<double>(merged, "r_series");

  c.baselines.clear();
  for (auto it = merged.at("baselines").begin();
       it != merged.at("baselines").end(); ++it) {
    Ledger::Baseline b;
    b.time_per_step_s = get<double>(it.value(), "time_per_step_s");
    b.energy_per_step_j = get<double>(it.value(), "energy_per_step_j");
    c.baselines[it.key()] = b;
  }
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

std::uint64_t config_hash(const RunConfig& c) {
  // Execution details that cannot affect results are excluded so artifacts
  // stay byte-identical across worker counts and output locations.
  nlohmann::json j = config_to_json(c);
  j.erase("workers");
  j.erase("out_dir");
  const std::string dump = j.dump();
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace neuropde
