#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "neuropde/devices.hpp"
#include "neuropde/rng.hpp"

namespace neuropde {

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// FTJ voltage divider. The weight w = Vout/Vin = R_ftj/(R_ftj + r_series)
// is set by the programmed domain fraction.
struct Synapse {
  FtjState ftj;
  FtjParams ftj_params;
  double r_series = 35e3;  // ohm

  double weight() const {
    const double r = ftj_resistance(ftj, ftj_params);
    return r / (r + r_series);
  }
};

inline double synapse_output(const Synapse& s, double vin) {
  if (vin < 0.0) throw std::domain_error("synapse_output: vin must be >= 0");
  return s.weight() * vin;
}

// [min, max] weight reachable by programming the FTJ between r_on and r_off.
std::pair<double, double> achievable_weight_range(const Synapse& s);

struct ProgramResult {
  Synapse synapse;
  int pulses = 0;
};

// Applies programming pulses until |weight - target_w| <= 1e-4. Throws
// std::range_error naming the achievable interval if the target is outside.
ProgramResult synapse_program(Synapse s, double target_w);

// Electrical constants of the write path and the per-cycle cost model.
struct DriveConfig {
  double r_access = 1e3;            // ohm, series access resistance
  double v_read = 1.0;              // V, sense-amplifier read level
  double pulse_t = 5e-9;            // s, write window
  double cycle_time_s = 10e-9;      // s, full activation cycle
  double cycle_energy_j = 1.451e-12;
  bool charge_stayed = true;        // failed attempts use the same budget
};

struct Calibration {
  double i_drive = 0.0;  // A
  double w = 0.0;        // synapse weight producing v_wr at v_read
  double v_wr = 0.0;     // V
};

// Solves exp(-2*pulse_t/tau(i)) = ps_target for the drive of an interior
// cell (two identical series MTJs racing).
Calibration calibrate_drive(double ps_target, const MtjParams& p,
                            const DriveConfig& d);

// Boundary variant: a single destination MTJ, exp(-pulse_t/tau(i)) = stay.
Calibration calibrate_drive_single(double stay_target, const MtjParams& p,
                                   const DriveConfig& d);

struct Neuron {
  MtjState mtj;
  MtjParams params;
  int index = 0;

  bool active() const { return mtj.m == Magnetization::AntiParallel; }
  void reset() { mtj.m = Magnetization::Parallel; }
};

enum class MoveResult { MovedLeft, MovedRight, Stayed };

struct ActivationOutcome {
  MoveResult result = MoveResult::Stayed;
  double energy_j = 0.0;
  double time_s = 0.0;
};

// Multiplicative noise on the synapse output voltage. mean_shift is the
// relative offset (factor mean = 1 + mean_shift), variance the factor
// variance; samples are truncated at +/-3 sigma and kept positive.
struct WeightNoiseModel {
  double mean_shift = -0.0016;
  double variance = 1e-4;
  DistributionFamily family = DistributionFamily::TruncatedNormal;
  std::vector<double> empirical;  // optional sample table override

  static WeightNoiseModel none() { return {0.0, 0.0}; }
  bool is_zero() const { return mean_shift == 0.0 && variance == 0.0 && empirical.empty(); }
};

inline double sample_weight_noise(const WeightNoiseModel& m, RngStream& rng) {
  if (!m.empirical.empty())
    return m.empirical[static_cast<std::size_t>(rng.uniform() * m.empirical.size())];
  if (m.variance == 0.0) return 1.0 + m.mean_shift;
  const double sigma = std::sqrt(m.variance);
  const double mean = 1.0 + m.mean_shift;
  double lo = mean - 3.0 * sigma;
  if (lo <= 0.0) lo = 1e-12;
  return rng.truncated_normal(mean, sigma, lo, mean + 3.0 * sigma);
}

// One activation cycle of an interior cluster: the active center neuron
// drives its two neighbors through the synapse; the earliest sampled MTJ
// switch inside the write window wins and freezes the other (the current
// monitor interrupt), and the center self-inhibits.
ActivationOutcome activation_cycle(Neuron& left, Neuron& center, Neuron& right,
                                   const Synapse& syn,
                                   const WeightNoiseModel& noise,
                                   const DriveConfig& drive, RngStream& rng);

// x = 0 cluster: a single right destination.
ActivationOutcome boundary_cycle(Neuron& center, Neuron& right,
                                 const Synapse& syn,
                                 const WeightNoiseModel& noise,
                                 const DriveConfig& drive, RngStream& rng);

struct ActivationRecord {
  std::uint64_t trial_id = 0;
  int start_index = 0;
  MoveResult outcome = MoveResult::Stayed;
  double ps_empirical = 0.0;   // closed-form stay probability of the device pair
  std::uint64_t device_seed = 0;
};

struct HistoryConfig {
  MtjParams mtj;
  FtjParams ftj;
  VariationSpec variation;
  WeightNoiseModel noise;
  DriveConfig drive;
  double r_series = 35e3;
  double ps_target = 0.5317;
  bool fresh_devices_per_trial = true;
};

// Runs n_trials interior activation cycles, each on freshly perturbed
// devices when configured, recording outcomes and the per-device stay
// probability. The table feeds the walk engine's hardware-emulated backend.
std::vector<ActivationRecord> build_activation_history(const HistoryConfig& cfg,
                                                       std::uint64_t n_trials,
                                                       std::uint64_t seed);

}  // namespace neuropde
