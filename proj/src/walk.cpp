#include "neuropde/walk.hpp"

#include <omp.h>

#include <atomic>
#include <cmath>
#include <sstream>

namespace neuropde {

std::map<std::string, Ledger::Ratio> Ledger::report() const {
  if (baselines.empty())
    throw std::runtime_error("Ledger::report: no baseline configured");
  std::map<std::string, Ratio> out;
  for (const auto& [name, b] : baselines) {
    const double bt = static_cast<double>(steps) * b.time_per_step_s;
    const double be = static_cast<double>(steps) * b.energy_per_step_j;
    out[name] = {bt / hw_time_s(), be / hw_energy_j()};
  }
  return out;
}

Ledger& Ledger::merge(const Ledger& other) {
  steps += other.steps;
  return *this;
}

namespace {

double clamp_current(double i, double i_c0) {
  const double hi = i_c0 * (1.0 - 1e-12);
  if (i > hi) return hi;
  if (i < 1e-6 * i_c0) return 1e-6 * i_c0;
  return i;
}

double switch_rate(double i, double i_c0, double delta, double tau0) {
  const double x = 1.0 - i / i_c0;
  return std::exp(-delta * x * x) / tau0;
}

}  // namespace

WalkBackend WalkBackend::software(const MarkovChain1D& chain) {
  WalkBackend b;
  b.chain_ = chain;
  b.kind_ = BackendKind::Software;
  b.cells_.resize(chain.n);
  for (int i = 0; i < chain.n; ++i) {
    const auto r = chain.row(i);
    b.cells_[i] = {r[0], r[0] + r[1]};
  }
  return b;
}

WalkBackend WalkBackend::hardware(const MarkovChain1D& chain,
                                  const BackendConfig& cfg,
                                  std::uint64_t device_seed) {
  WalkBackend b;
  b.chain_ = chain;
  b.kind_ = cfg.kind;
  b.noise_ = cfg.noise;
  b.drive_ = cfg.drive;
  b.tau0_ = cfg.mtj.tau0;
  b.i_c0_ = cfg.mtj.i_c0;
  b.per_step_noise_ =
      cfg.kind == BackendKind::HardwarePV && !cfg.noise.is_zero();

  const int n = chain.n;

  // One process-perturbed MTJ instance per chain position.
  std::vector<MtjParams> inst(n);
  for (int i = 0; i < n; ++i) {
    RngStream rng(device_seed, 0xDE51CE, static_cast<std::uint64_t>(i));
    inst[i] = sample_device_instance(cfg.mtj, cfg.variation, rng);
  }

  // Synapse weights calibrated on the nominal device: interior cells target
  // the chain's stay probability, boundary cells the 1 - 2*pg stay of the
  // doubled-move rule.
  const Calibration cal_int = calibrate_drive(chain.ps, cfg.mtj, cfg.drive);
  const Calibration cal_bnd =
      calibrate_drive_single(1.0 - 2.0 * chain.pg, cfg.mtj, cfg.drive);
  Synapse proto{FtjState{}, cfg.ftj, cfg.r_series};
  const double w_int = synapse_program(proto, cal_int.w).synapse.weight();
  const double w_bnd = synapse_program(proto, cal_bnd.w).synapse.weight();

  b.hw_.resize(n);
  b.cells_.resize(n);
  const double t = cfg.drive.pulse_t;
  for (int i = 0; i < n; ++i) {
    HwCell& c = b.hw_[i];
    if (chain.absorbing(i)) {
      c.has_left = c.has_right = false;
      b.cells_[i] = {0.0, 1.0};
      continue;
    }
    const bool left_edge = (i == 0);
    const bool right_edge = (i == n - 1);  // only reachable when non-absorbing
    if (left_edge || right_edge) {
      const int dest = left_edge ? 1 : n - 2;
      c.has_left = right_edge;
      c.has_right = left_edge;
      c.v_nom = w_bnd * cfg.drive.v_read;
      c.inv_r = 1.0 / (inst[dest].r_p + cfg.drive.r_access);
      c.delta_left = c.delta_right = inst[dest].delta;
      const double i_nom = clamp_current(c.v_nom * c.inv_r, b.i_c0_);
      const double stay =
          std::exp(-t * switch_rate(i_nom, b.i_c0_, inst[dest].delta, b.tau0_));
      b.cells_[i] = left_edge ? Cell{0.0, stay} : Cell{1.0 - stay, 1.0};
    } else {
      c.v_nom = w_int * cfg.drive.v_read;
      c.inv_r = 1.0 / (inst[i - 1].r_p + inst[i + 1].r_p + cfg.drive.r_access);
      c.delta_left = inst[i - 1].delta;
      c.delta_right = inst[i + 1].delta;
      const double i_nom = clamp_current(c.v_nom * c.inv_r, b.i_c0_);
      const double lam_l = switch_rate(i_nom, b.i_c0_, c.delta_left, b.tau0_);
      const double lam_r = switch_rate(i_nom, b.i_c0_, c.delta_right, b.tau0_);
      const double stay = std::exp(-t * (lam_l + lam_r));
      const double p_left = (1.0 - stay) * lam_l / (lam_l + lam_r);
      b.cells_[i] = {p_left, p_left + stay};
    }
  }
  return b;
}

WalkBackend WalkBackend::from_activation_history(
    const MarkovChain1D& chain, const std::vector<ActivationRecord>& table) {
  if (table.empty())
    throw std::invalid_argument("from_activation_history: empty table");
  double n_left = 0, n_right = 0, n_stay = 0;
  for (const auto& r : table) {
    switch (r.outcome) {
      case MoveResult::MovedLeft: n_left += 1; break;
      case MoveResult::MovedRight: n_right += 1; break;
      case MoveResult::Stayed: n_stay += 1; break;
    }
  }
  const double total = n_left + n_right + n_stay;
  const double p_left = n_left / total;
  const double p_stay = n_stay / total;
  const double p_move = 1.0 - p_stay;

  WalkBackend b;
  b.chain_ = chain;
  b.kind_ = BackendKind::HardwareP;
  b.cells_.resize(chain.n);
  for (int i = 0; i < chain.n; ++i) {
    if (chain.absorbing(i)) {
      b.cells_[i] = {0.0, 1.0};
    } else if (i == 0) {
      b.cells_[i] = {0.0, 1.0 - p_move};
    } else if (i == chain.n - 1) {
      b.cells_[i] = {p_move, 1.0};
    } else {
      b.cells_[i] = {p_left, p_left + p_stay};
    }
  }
  return b;
}

std::array<double, 3> WalkBackend::cell_probs(int pos) const {
  const Cell& c = cells_[pos];
  return {c.cum_left, c.cum_stay - c.cum_left, 1.0 - c.cum_stay};
}

int WalkBackend::step_noisy(int pos, RngStream& rng) const {
  const HwCell& c = hw_[pos];
  if (!c.has_left && !c.has_right) return pos;
  const double xi = sample_weight_noise(noise_, rng);
  const double i = clamp_current(c.v_nom * xi * c.inv_r, i_c0_);
  const double t = drive_.pulse_t;
  if (c.has_left && c.has_right) {
    const double lam_l = switch_rate(i, i_c0_, c.delta_left, tau0_);
    const double lam_r = switch_rate(i, i_c0_, c.delta_right, tau0_);
    const double stay = std::exp(-t * (lam_l + lam_r));
    const double p_left = (1.0 - stay) * lam_l / (lam_l + lam_r);
    const double u = rng.uniform();
    if (u < p_left) return pos - 1;
    if (u < p_left + stay) return pos;
    return pos + 1;
  }
  const double delta = c.has_right ? c.delta_right : c.delta_left;
  const double stay = std::exp(-t * switch_rate(i, i_c0_, delta, tau0_));
  if (rng.uniform() < stay) return pos;
  return c.has_right ? pos + 1 : pos - 1;
}

namespace {

struct LocalAccum {
  PassageMatrix passage;
  std::vector<std::uint64_t> terminal;
  std::uint64_t steps = 0;
};

// Runs one walker to absorption. Returns false if the step cap was hit.
inline bool walk_to_absorption(const WalkBackend& backend, int start,
                               std::uint64_t walker, std::uint64_t seed,
                               std::uint64_t max_steps, LocalAccum& acc) {
  RngStream rng(seed, static_cast<std::uint64_t>(start), walker);
  const MarkovChain1D& chain = backend.chain();
  int pos = start;
  std::uint64_t steps = 0;
  while (!chain.absorbing(pos)) {
    ++acc.passage.at(start, pos);
    pos = backend.step(pos, rng);
    if (++steps > max_steps) {
      acc.steps += steps;
      return false;
    }
  }
  acc.steps += steps;
  return true;
}

inline void walk_fixed_steps(const WalkBackend& backend, const WalkPlan& plan,
                             std::uint64_t walker, std::uint64_t seed,
                             LocalAccum& acc) {
  RngStream rng(seed, static_cast<std::uint64_t>(plan.source), walker);
  int pos = plan.source;
  for (std::uint64_t k = 0; k < plan.n_steps; ++k) {
    ++acc.passage.at(plan.source, pos);
    pos = backend.step(pos, rng);
  }
  ++acc.terminal[pos];
  acc.steps += plan.n_steps;
}

void merge_into(WalkResult& result, const LocalAccum& acc) {
  for (std::size_t k = 0; k < acc.passage.counts.size(); ++k)
    result.passage.counts[k] += acc.passage.counts[k];
  for (std::size_t k = 0; k < acc.terminal.size(); ++k)
    result.terminal[k] += acc.terminal[k];
  result.ledger.steps += acc.steps;
}

WalkResult make_result(const WalkBackend& backend, const WalkPlan& plan) {
  WalkResult r;
  r.passage = PassageMatrix(backend.n(), plan.walkers_per_start);
  r.terminal.assign(backend.n(), 0);
  r.ledger.time_per_step_s = backend.drive().cycle_time_s;
  r.ledger.energy_per_step_j = backend.drive().cycle_energy_j;
  return r;
}

[[noreturn]] void throw_cap(int start, std::uint64_t walker,
                            std::uint64_t cap) {
  std::ostringstream msg;
  msg << "run_walkers: walker " << walker << " starting at position " << start
      << " exceeded the max-steps cap of " << cap;
  throw CapExceededError(msg.str());
}

}  // namespace

WalkResult run_walkers_serial(const WalkBackend& backend, const WalkPlan& plan,
                              std::uint64_t master_seed) {
  WalkResult result = make_result(backend, plan);
  LocalAccum acc{PassageMatrix(backend.n(), plan.walkers_per_start),
                 std::vector<std::uint64_t>(backend.n(), 0)};
  if (plan.mode == WalkMode::ToAbsorption) {
    for (int start = 0; start < backend.n(); ++start)
      for (std::uint64_t w = 0; w < plan.walkers_per_start; ++w)
        if (!walk_to_absorption(backend, start, w, master_seed, plan.max_steps,
                                acc))
          throw_cap(start, w, plan.max_steps);
  } else {
    for (std::uint64_t w = 0; w < plan.walkers_per_start; ++w)
      walk_fixed_steps(backend, plan, w, master_seed, acc);
  }
  merge_into(result, acc);
  return result;
}

WalkResult run_walkers(const WalkBackend& backend, const WalkPlan& plan,
                       std::uint64_t master_seed, int workers) {
  if (workers < 1)
    throw std::invalid_argument("run_walkers: workers must be >= 1");
  WalkResult result = make_result(backend, plan);

  const int n = backend.n();
  const std::uint64_t w_per_start = plan.walkers_per_start;
  const std::uint64_t total_tasks = plan.mode == WalkMode::ToAbsorption
                                        ? static_cast<std::uint64_t>(n) * w_per_start
                                        : w_per_start;

  std::atomic<bool> capped{false};
  std::int64_t cap_start = 0;
  std::uint64_t cap_walker = 0;

#pragma omp parallel num_threads(workers)
  {
    LocalAccum acc{PassageMatrix(n, w_per_start),
                   std::vector<std::uint64_t>(n, 0)};
#pragma omp for schedule(dynamic, 64) nowait
    for (std::int64_t task = 0;
         task < static_cast<std::int64_t>(total_tasks); ++task) {
      if (capped.load(std::memory_order_relaxed)) continue;
      if (plan.mode == WalkMode::ToAbsorption) {
        const int start = static_cast<int>(task / static_cast<std::int64_t>(w_per_start));
        const std::uint64_t w = static_cast<std::uint64_t>(task) % w_per_start;
        if (!walk_to_absorption(backend, start, w, master_seed, plan.max_steps,
                                acc)) {
#pragma omp critical(neuropde_walk_cap)
          {
            capped.store(true);
            cap_start = start;
            cap_walker = w;
          }
        }
      } else {
        walk_fixed_steps(backend, plan, static_cast<std::uint64_t>(task),
                         master_seed, acc);
      }
    }
#pragma omp critical(neuropde_walk_merge)
    merge_into(result, acc);
  }

  if (capped.load()) throw_cap(static_cast<int>(cap_start), cap_walker, plan.max_steps);
  return result;
}

}  // namespace neuropde
