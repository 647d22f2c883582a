#include "neuropde/cells.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace neuropde {

std::pair<double, double> achievable_weight_range(const Synapse& s) {
  const double lo = s.ftj_params.r_on / (s.ftj_params.r_on + s.r_series);
  const double hi = s.ftj_params.r_off / (s.ftj_params.r_off + s.r_series);
  return {lo, hi};
}

namespace {
constexpr double kWeightTol = 1e-4;
constexpr double kProgramVoltage = 2.0;  // V

double domain_fraction_for_weight(const Synapse& s, double w) {
  // Invert the divider, then the parallel-conductance formula.
  const double r_target = s.r_series * w / (1.0 - w);
  const double g_on = 1.0 / s.ftj_params.r_on;
  const double g_off = 1.0 / s.ftj_params.r_off;
  return std::clamp((1.0 / r_target - g_off) / (g_on - g_off), 0.0, 1.0);
}
}  // namespace

ProgramResult synapse_program(Synapse s, double target_w) {
  const auto [lo, hi] = achievable_weight_range(s);
  if (target_w < lo || target_w > hi) {
    std::ostringstream msg;
    msg << "synapse_program: target weight " << target_w
        << " outside achievable interval [" << lo << ", " << hi << "]";
    throw std::range_error(msg.str());
  }

  ProgramResult out{s, 0};
  const double s_target = domain_fraction_for_weight(s, target_w);
  while (std::abs(out.synapse.weight() - target_w) > kWeightTol) {
    if (out.pulses >= 64)
      throw std::runtime_error("synapse_program: did not converge");
    const double s_now = out.synapse.ftj.s;
    const bool grow = s_target > s_now;
    const double tau =
        ftj_switching_time(out.synapse.ftj_params, kProgramVoltage);
    // First-order kinetics solved for the pulse width reaching s_target.
    double t;
    if (grow)
      t = tau * std::log((1.0 - s_now) / std::max(1.0 - s_target, 1e-16));
    else
      t = tau * std::log(s_now / std::max(s_target, 1e-16));
    t = std::min(t, 40.0 * tau);
    out.synapse.ftj =
        ftj_apply_pulse(out.synapse.ftj, out.synapse.ftj_params,
                        grow ? kProgramVoltage : -kProgramVoltage, t);
    ++out.pulses;
  }
  return out;
}

namespace {
Calibration invert_switching_time(double tau_required, const MtjParams& p,
                                  const DriveConfig& d, double path_r) {
  if (!(tau_required > p.tau0))
    throw CalibrationError(
        "calibrate_drive: required switching time is below the attempt time; "
        "target probability leaves the thermally activated regime");
  const double ratio = std::log(tau_required / p.tau0) / p.delta;
  if (!(ratio < 1.0))
    throw CalibrationError(
        "calibrate_drive: required drive current is non-positive");
  Calibration c;
  c.i_drive = p.i_c0 * (1.0 - std::sqrt(ratio));
  c.v_wr = c.i_drive * path_r;
  c.w = c.v_wr / d.v_read;
  if (!(c.w > 0.0) || !(c.w < 1.0))
    throw CalibrationError(
        "calibrate_drive: required synapse weight outside (0, 1)");
  return c;
}
}  // namespace

Calibration calibrate_drive(double ps_target, const MtjParams& p,
                            const DriveConfig& d) {
  if (!(ps_target > 0.0) || !(ps_target < 1.0))
    throw CalibrationError("calibrate_drive: ps_target must be in (0, 1)");
  const double tau_required = -2.0 * d.pulse_t / std::log(ps_target);
  return invert_switching_time(tau_required, p, d, 2.0 * p.r_p + d.r_access);
}

Calibration calibrate_drive_single(double stay_target, const MtjParams& p,
                                   const DriveConfig& d) {
  if (!(stay_target > 0.0) || !(stay_target < 1.0))
    throw CalibrationError("calibrate_drive: stay_target must be in (0, 1)");
  const double tau_required = -d.pulse_t / std::log(stay_target);
  return invert_switching_time(tau_required, p, d, p.r_p + d.r_access);
}

namespace {
ActivationOutcome charge(const DriveConfig& d, MoveResult r) {
  ActivationOutcome out;
  out.result = r;
  if (r != MoveResult::Stayed || d.charge_stayed) {
    out.energy_j = d.cycle_energy_j;
    out.time_s = d.cycle_time_s;
  }
  return out;
}
}  // namespace

ActivationOutcome activation_cycle(Neuron& left, Neuron& center, Neuron& right,
                                   const Synapse& syn,
                                   const WeightNoiseModel& noise,
                                   const DriveConfig& drive, RngStream& rng) {
  if (!center.active() || left.active() || right.active())
    throw std::logic_error(
        "activation_cycle: requires active center and inactive neighbors");
  const double v_wr =
      synapse_output(syn, drive.v_read) * sample_weight_noise(noise, rng);
  const double i =
      v_wr / (left.params.r_p + right.params.r_p + drive.r_access);
  const double t_left = mtj_sample_switch_time(left.params, i, rng);
  const double t_right = mtj_sample_switch_time(right.params, i, rng);
  const double t_min = std::min(t_left, t_right);
  if (t_min >= drive.pulse_t) return charge(drive, MoveResult::Stayed);
  // The earliest switch interrupts the shared write current: the loser is
  // frozen, the center resets.
  Neuron& winner = t_left < t_right ? left : right;
  winner.mtj.m = Magnetization::AntiParallel;
  center.reset();
  return charge(drive, t_left < t_right ? MoveResult::MovedLeft
                                        : MoveResult::MovedRight);
}

ActivationOutcome boundary_cycle(Neuron& center, Neuron& right,
                                 const Synapse& syn,
                                 const WeightNoiseModel& noise,
                                 const DriveConfig& drive, RngStream& rng) {
  if (!center.active() || right.active())
    throw std::logic_error(
        "boundary_cycle: requires active center and inactive destination");
  const double v_wr =
      synapse_output(syn, drive.v_read) * sample_weight_noise(noise, rng);
  const double i = v_wr / (right.params.r_p + drive.r_access);
  const double t_right = mtj_sample_switch_time(right.params, i, rng);
  if (t_right >= drive.pulse_t) return charge(drive, MoveResult::Stayed);
  right.mtj.m = Magnetization::AntiParallel;
  center.reset();
  return charge(drive, MoveResult::MovedRight);
}

std::vector<ActivationRecord> build_activation_history(const HistoryConfig& cfg,
                                                       std::uint64_t n_trials,
                                                       std::uint64_t seed) {
  if (n_trials < 1)
    throw std::domain_error("build_activation_history: n_trials must be >= 1");

  const Calibration cal = calibrate_drive(cfg.ps_target, cfg.mtj, cfg.drive);
  Synapse syn{FtjState{}, cfg.ftj, cfg.r_series};
  syn = synapse_program(syn, cal.w).synapse;

  std::vector<ActivationRecord> table;
  table.reserve(n_trials);

  MtjParams left_p = cfg.mtj;
  MtjParams right_p = cfg.mtj;
  std::uint64_t device_seed = mix64(seed);

  for (std::uint64_t trial = 0; trial < n_trials; ++trial) {
    if (cfg.fresh_devices_per_trial || trial == 0) {
      device_seed = mix64(seed ^ (trial + 1));
      RngStream device_rng(device_seed, 0, 0);
      left_p = sample_device_instance(cfg.mtj, cfg.variation, device_rng);
      right_p = sample_device_instance(cfg.mtj, cfg.variation, device_rng);
    }
    Neuron left{MtjState{}, left_p, -1};
    Neuron center{MtjState{Magnetization::AntiParallel}, cfg.mtj, 0};
    Neuron right{MtjState{}, right_p, 1};

    RngStream rng(seed, 1, trial);
    const ActivationOutcome oc =
        activation_cycle(left, center, right, syn, cfg.noise, cfg.drive, rng);

    const double v_wr = synapse_output(syn, cfg.drive.v_read);
    const double i = v_wr / (left_p.r_p + right_p.r_p + cfg.drive.r_access);
    const double lam = 1.0 / mtj_mean_switching_time(left_p, i) +
                       1.0 / mtj_mean_switching_time(right_p, i);
    table.push_back({trial, 0, oc.result, std::exp(-cfg.drive.pulse_t * lam),
                     device_seed});
  }
  return table;
}

}  // namespace neuropde
