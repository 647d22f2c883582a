#include <cmath>

#include "doctest.h"
#include "neuropde/cells.hpp"

using namespace neuropde;

// Frozen calibration references (independent closed-form evaluation):
//   interior: exp(-2T/tau(i)) = 0.5317, T = 5 ns  ->  i/i_c0 = 0.7372280460
//   boundary: exp(-T/tau(i)) = 1 - 2*pg           ->  i/i_c0 = 0.7725558338
// Divider endpoints with r_series = 35 kOhm: w in [10/45, 100/135].

TEST_CASE("Synapse weight is the FTJ divider ratio") {
  Synapse s;
  s.ftj.s = 1.0;
  CHECK(s.weight() == doctest::Approx(0.2222222222222222).epsilon(1e-13));
  s.ftj.s = 0.0;
  CHECK(s.weight() == doctest::Approx(0.7407407407407407).epsilon(1e-13));
  s.ftj.s = 0.5;  // R = 18181.82
  CHECK(s.weight() == doctest::Approx(18181.81818181818 /
                                      (18181.81818181818 + 35e3))
                          .epsilon(1e-12));
  CHECK(synapse_output(s, 1.0) == doctest::Approx(s.weight()));
  CHECK_THROWS_AS(synapse_output(s, -1.0), std::domain_error);
}

TEST_CASE("Achievable weight range spans the FTJ resistance window") {
  Synapse s;
  const auto [lo, hi] = achievable_weight_range(s);
  CHECK(lo == doctest::Approx(0.2222222222222222).epsilon(1e-13));
  CHECK(hi == doctest::Approx(0.7407407407407407).epsilon(1e-13));
}

TEST_CASE("Programming converges to the target weight") {
  Synapse s;
  for (double target : {0.25, 0.40547542532082476, 0.5, 0.7}) {
    const ProgramResult r = synapse_program(s, target);
    CHECK(std::abs(r.synapse.weight() - target) <= 1e-4);
    CHECK(r.pulses >= 1);
  }
}

TEST_CASE("Programming rejects out-of-range targets with the interval") {
  Synapse s;
  CHECK_THROWS_AS(synapse_program(s, 0.1), std::range_error);
  CHECK_THROWS_AS(synapse_program(s, 0.9), std::range_error);
  try {
    synapse_program(s, 0.9);
  } catch (const std::range_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("0.22") != std::string::npos);
    CHECK(msg.find("0.74") != std::string::npos);
  }
}

TEST_CASE("Interior calibration inverts the switching race") {
  MtjParams p;
  DriveConfig d;
  const Calibration cal = calibrate_drive(0.5317, p, d);
  CHECK(cal.i_drive / p.i_c0 ==
        doctest::Approx(0.7372280460378632).epsilon(1e-12));
  CHECK(cal.v_wr == doctest::Approx(0.40547542532082476).epsilon(1e-12));
  CHECK(cal.w == doctest::Approx(cal.v_wr / d.v_read).epsilon(1e-12));
  // Round trip: the race stay probability at the calibrated drive.
  const double tau = mtj_mean_switching_time(p, cal.i_drive);
  CHECK(std::exp(-2.0 * d.pulse_t / tau) ==
        doctest::Approx(0.5317).epsilon(1e-10));
}

TEST_CASE("Boundary calibration uses a single destination junction") {
  MtjParams p;
  DriveConfig d;
  const double stay = 1.0 - 2.0 * 0.234079954927214;
  const Calibration cal = calibrate_drive_single(stay, p, d);
  CHECK(cal.i_drive / p.i_c0 ==
        doctest::Approx(0.7725558338154291).epsilon(1e-12));
  CHECK(cal.v_wr == doctest::Approx(0.23176675014462877).epsilon(1e-12));
  const double tau = mtj_mean_switching_time(p, cal.i_drive);
  CHECK(std::exp(-d.pulse_t / tau) == doctest::Approx(stay).epsilon(1e-10));
}

TEST_CASE("Calibration rejects unreachable stay targets") {
  MtjParams p;
  DriveConfig d;
  CHECK_THROWS_AS(calibrate_drive(0.0, p, d), CalibrationError);
  CHECK_THROWS_AS(calibrate_drive(1.0, p, d), CalibrationError);
  CHECK_THROWS_AS(calibrate_drive(-0.2, p, d), CalibrationError);
  // A stay probability so small it needs i >= i_c0.
  CHECK_THROWS_AS(calibrate_drive(1e-300, p, d), CalibrationError);
}

TEST_CASE("Activation cycle empirical frequencies match the race model") {
  MtjParams p;
  DriveConfig d;
  const Calibration cal = calibrate_drive(0.5317, p, d);
  Synapse syn;
  syn = synapse_program(syn, cal.w).synapse;
  RngStream rng(77, 0, 0);
  const int n = 200000;
  int stay = 0, left = 0, right = 0;
  double energy = 0.0;
  for (int k = 0; k < n; ++k) {
    Neuron l{MtjState{}, p, -1};
    Neuron c{MtjState{Magnetization::AntiParallel}, p, 0};
    Neuron r{MtjState{}, p, 1};
    const ActivationOutcome oc =
        activation_cycle(l, c, r, syn, WeightNoiseModel::none(), d, rng);
    energy += oc.energy_j;
    switch (oc.result) {
      case MoveResult::Stayed:
        ++stay;
        CHECK(!l.active());
        CHECK(!r.active());
        CHECK(c.active());  // still holds the walker
        break;
      case MoveResult::MovedLeft:
        ++left;
        CHECK(l.active());
        CHECK(!r.active());
        CHECK(!c.active());  // center self-inhibited
        break;
      case MoveResult::MovedRight:
        ++right;
        CHECK(r.active());
        CHECK(!l.active());
        CHECK(!c.active());
        break;
    }
  }
  const double ps_hat = double(stay) / n;
  const double se = std::sqrt(0.5317 * (1 - 0.5317) / n);
  CHECK(std::abs(ps_hat - 0.5317) < 4.0 * se);
  // Symmetric race: left and right shares agree within sampling error.
  CHECK(std::abs(double(left - right)) / n < 4.0 * se);
  // Every cycle charges the full per-cycle budget (charge_stayed = true).
  CHECK(energy == doctest::Approx(double(n) * d.cycle_energy_j));
}

TEST_CASE("Stayed cycles can be made free of charge") {
  MtjParams p;
  DriveConfig d;
  d.charge_stayed = false;
  const Calibration cal = calibrate_drive(0.5317, p, d);
  Synapse syn;
  syn = synapse_program(syn, cal.w).synapse;
  RngStream rng(78, 0, 0);
  for (int k = 0; k < 2000; ++k) {
    Neuron l{MtjState{}, p, -1};
    Neuron c{MtjState{Magnetization::AntiParallel}, p, 0};
    Neuron r{MtjState{}, p, 1};
    const ActivationOutcome oc =
        activation_cycle(l, c, r, syn, WeightNoiseModel::none(), d, rng);
    if (oc.result == MoveResult::Stayed)
      CHECK(oc.energy_j == 0.0);
    else
      CHECK(oc.energy_j == doctest::Approx(d.cycle_energy_j));
  }
}

TEST_CASE("Boundary cycle only moves right") {
  MtjParams p;
  DriveConfig d;
  const double stay = 1.0 - 2.0 * 0.234079954927214;
  const Calibration cal = calibrate_drive_single(stay, p, d);
  Synapse syn;
  syn = synapse_program(syn, cal.w).synapse;
  RngStream rng(79, 0, 0);
  const int n = 200000;
  int moved = 0;
  for (int k = 0; k < n; ++k) {
    Neuron c{MtjState{Magnetization::AntiParallel}, p, 0};
    Neuron r{MtjState{}, p, 1};
    const ActivationOutcome oc =
        boundary_cycle(c, r, syn, WeightNoiseModel::none(), d, rng);
    CHECK(oc.result != MoveResult::MovedLeft);
    if (oc.result == MoveResult::MovedRight) ++moved;
  }
  const double target = 2.0 * 0.234079954927214;
  const double se = std::sqrt(target * (1 - target) / n);
  CHECK(std::abs(double(moved) / n - target) < 4.0 * se);
}

TEST_CASE("Weight noise sampling: moments and truncation") {
  WeightNoiseModel m;  // mean_shift = -0.0016, variance = 1e-4
  RngStream rng(80, 0, 0);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  const double mean = 1.0 + m.mean_shift;
  const double sigma = std::sqrt(m.variance);
  for (int k = 0; k < n; ++k) {
    const double v = sample_weight_noise(m, rng);
    CHECK(v >= mean - 3.0 * sigma);
    CHECK(v <= mean + 3.0 * sigma);
    s += v;
    s2 += v * v;
  }
  const double m_hat = s / n;
  const double v_hat = s2 / n - m_hat * m_hat;
  CHECK(std::abs(m_hat - mean) < 5.0 * sigma / std::sqrt(double(n)));
  // 3-sigma truncation shrinks the variance by ~2.7%.
  CHECK(v_hat == doctest::Approx(m.variance * 0.9733).epsilon(0.03));

  // Empirical tables are sampled verbatim.
  WeightNoiseModel table;
  table.empirical = {0.99, 1.01};
  for (int k = 0; k < 100; ++k) {
    const double v = sample_weight_noise(table, rng);
    CHECK((v == 0.99 || v == 1.01));
  }

  // Degenerate model is deterministic.
  WeightNoiseModel fixed;
  fixed.mean_shift = -0.0016;
  fixed.variance = 0.0;
  CHECK(sample_weight_noise(fixed, rng) == doctest::Approx(0.9984));
}

TEST_CASE("Activation history is reproducible and tracks the target") {
  HistoryConfig cfg;
  const auto a = build_activation_history(cfg, 4000, 123);
  const auto b = build_activation_history(cfg, 4000, 123);
  REQUIRE(a.size() == 4000);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].outcome == b[k].outcome);
    CHECK(a[k].device_seed == b[k].device_seed);
    CHECK(a[k].ps_empirical == b[k].ps_empirical);
    CHECK(a[k].trial_id == k);
  }
  const auto c = build_activation_history(cfg, 4000, 124);
  int diff = 0;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (a[k].outcome != c[k].outcome) ++diff;
  CHECK(diff > 0);

  double mean_ps = 0.0;
  int stayed = 0;
  for (const auto& r : a) {
    mean_ps += r.ps_empirical;
    if (r.outcome == MoveResult::Stayed) ++stayed;
  }
  mean_ps /= a.size();
  // Process variation spreads per-pair stay probabilities around the target;
  // the mean stays within a few percent.
  CHECK(std::abs(mean_ps - cfg.ps_target) < 0.05);
  CHECK(std::abs(double(stayed) / a.size() - cfg.ps_target) < 0.05);
}
