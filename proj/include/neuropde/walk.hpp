#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "neuropde/cells.hpp"
#include "neuropde/chain.hpp"
#include "neuropde/devices.hpp"
#include "neuropde/rng.hpp"

namespace neuropde {

// Per-step time/energy accounting. hw_time and hw_energy are linear in the
// executed step count; ratios against configured baselines are arithmetic.
struct Ledger {
  std::uint64_t steps = 0;
  double time_per_step_s = 10e-9;
  double energy_per_step_j = 1.451e-12;

  struct Baseline {
    double time_per_step_s = 0.0;
    double energy_per_step_j = 0.0;
  };
  std::map<std::string, Baseline> baselines;

  double hw_time_s() const { return static_cast<double>(steps) * time_per_step_s; }
  double hw_energy_j() const { return static_cast<double>(steps) * energy_per_step_j; }

  struct Ratio {
    double speedup = 0.0;
    double energy_ratio = 0.0;
  };
  // Per-baseline (baseline_time/hw_time, baseline_energy/hw_energy).
  std::map<std::string, Ratio> report() const;

  Ledger& merge(const Ledger& other);
};

// Occupancy counts n_{i,j}: row i = start position, column j = visited
// position. Each executed step contributes one count at its start-of-step
// position (the initial position included, the absorbed terminal excluded),
// so the row total equals the steps taken by walkers starting at i.
struct PassageMatrix {
  int n = 0;
  std::uint64_t walkers_per_start = 0;
  std::vector<std::uint64_t> counts;

  PassageMatrix() = default;
  PassageMatrix(int n_, std::uint64_t w)
      : n(n_), walkers_per_start(w),
        counts(static_cast<std::size_t>(n_) * n_, 0) {}

  std::uint64_t& at(int i, int j) {
    return counts[static_cast<std::size_t>(i) * n + j];
  }
  std::uint64_t at(int i, int j) const {
    return counts[static_cast<std::size_t>(i) * n + j];
  }
};

enum class BackendKind { Software, HardwareP, HardwarePV };

struct BackendConfig {
  BackendKind kind = BackendKind::Software;
  MtjParams mtj;
  FtjParams ftj;
  VariationSpec variation;
  WeightNoiseModel noise;
  DriveConfig drive;
  double r_series = 35e3;
};

// Interchangeable stochastic step source. The software variant samples the
// chain's transition rows directly; the hardware-emulated variant samples
// the switching race of per-position process-perturbed device instances,
// optionally with per-event voltage noise on the drive.
class WalkBackend {
 public:
  static WalkBackend software(const MarkovChain1D& chain);
  static WalkBackend hardware(const MarkovChain1D& chain,
                              const BackendConfig& cfg,
                              std::uint64_t device_seed);
  // Empirical per-cell probabilities aggregated from an activation-history
  // table.
  static WalkBackend from_activation_history(
      const MarkovChain1D& chain, const std::vector<ActivationRecord>& table);

  const MarkovChain1D& chain() const { return chain_; }
  int n() const { return chain_.n; }
  bool per_step_noise() const { return per_step_noise_; }
  const DriveConfig& drive() const { return drive_; }

  // Samples one move from position pos. Returns the new position; the
  // caller detects absorption via chain().absorbing().
  int step(int pos, RngStream& rng) const {
    if (per_step_noise_) return step_noisy(pos, rng);
    const Cell& c = cells_[pos];
    const double u = rng.uniform();
    if (u < c.cum_left) return pos - 1;
    if (u < c.cum_stay) return pos;
    return pos + 1;
  }

  // Expected (left, stay, right) probabilities at pos, noise-free.
  std::array<double, 3> cell_probs(int pos) const;

 private:
  struct Cell {
    double cum_left = 0.0;  // P(left)
    double cum_stay = 1.0;  // P(left) + P(stay)
  };
  // Dynamic race evaluation for per-event voltage noise.
  struct HwCell {
    double v_nom = 0.0;      // noise-free drive voltage at the write path
    double inv_r = 0.0;      // 1 / total path resistance
    double delta_left = 0.0; // destination thermal stability factors
    double delta_right = 0.0;
    bool has_left = true;
    bool has_right = true;
  };

  int step_noisy(int pos, RngStream& rng) const;

  MarkovChain1D chain_;
  BackendKind kind_ = BackendKind::Software;
  std::vector<Cell> cells_;
  bool per_step_noise_ = false;
  std::vector<HwCell> hw_;
  WeightNoiseModel noise_;
  DriveConfig drive_;
  double tau0_ = 0.0;
  double i_c0_ = 0.0;
};

enum class WalkMode { ToAbsorption, FixedSteps };

struct WalkPlan {
  WalkMode mode = WalkMode::ToAbsorption;
  std::uint64_t walkers_per_start = 1;  // ToAbsorption: per start position
  int source = 0;                       // FixedSteps: common start
  std::uint64_t n_steps = 0;            // FixedSteps: steps per walker
  std::uint64_t max_steps = 10'000'000; // ToAbsorption guard cap
};

struct WalkResult {
  PassageMatrix passage;
  std::vector<std::uint64_t> terminal;  // FixedSteps: end-position histogram
  Ledger ledger;
};

struct CapExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// OpenMP-parallel engine. Per-walker counter-based rng streams are keyed by
// (master_seed, start_index, walker_id) and counts merge by integer
// addition, so the result is bit-identical for a fixed seed regardless of
// the worker count.
WalkResult run_walkers(const WalkBackend& backend, const WalkPlan& plan,
                       std::uint64_t master_seed, int workers);

// Plain serial reference implementation, kept for testing the parallel
// engine against.
WalkResult run_walkers_serial(const WalkBackend& backend, const WalkPlan& plan,
                              std::uint64_t master_seed);

}  // namespace neuropde
