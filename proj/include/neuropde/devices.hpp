#pragma once

#include <stdexcept>

#include "neuropde/rng.hpp"

namespace neuropde {

inline constexpr double kBoltzmannEv = 8.617333262e-5;  // eV/K

// Nominal MTJ compact-model parameters. Thicknesses and diameters in nm,
// times in seconds, currents in A, resistances in ohm.
struct MtjParams {
  double t_fl = 1.3;     // free-layer thickness (nm)
  double cd = 32.0;      // critical diameter (nm)
  double t_tb = 0.85;    // tunnel-barrier thickness (nm)
  double tmr = 2.0;      // TMR ratio (2.0 == 200%)
  double tau0 = 1e-9;    // attempt time (s)
  double delta = 40.0;   // thermal stability factor
  double i_c0 = 50e-6;   // critical switching current at 0 K (A)
  double r_p = 5e3;      // parallel-state resistance (ohm)

  double r_ap() const { return r_p * (1.0 + tmr); }

  void validate() const {
    if (t_fl <= 0 || cd <= 0 || t_tb <= 0 || tmr <= 0 || tau0 <= 0 ||
        delta <= 0 || i_c0 <= 0 || r_p <= 0)
      throw std::invalid_argument("MtjParams: all parameters must be positive");
  }
};

enum class Magnetization { Parallel, AntiParallel };

struct MtjState {
  Magnetization m = Magnetization::Parallel;
};

inline double mtj_resistance(const MtjState& st, const MtjParams& p) {
  return st.m == Magnetization::Parallel ? p.r_p : p.r_ap();
}

// Mean switching time in the thermally activated regime, 0 < i < i_c0.
inline double mtj_mean_switching_time(const MtjParams& p, double i) {
  if (!(i > 0.0) || !(i < p.i_c0))
    throw std::domain_error(
        "mtj_mean_switching_time: current outside thermally activated "
        "regime (0, i_c0)");
  const double x = 1.0 - i / p.i_c0;
  return p.tau0 * std::exp(p.delta * x * x);
}

// Probability that the junction has switched after a pulse of amplitude i
// and duration t.
inline double mtj_switching_probability(const MtjParams& p, double i,
                                        double t) {
  if (t < 0.0)
    throw std::domain_error("mtj_switching_probability: negative pulse time");
  return -std::expm1(-t / mtj_mean_switching_time(p, i));
}

// Stochastic switching time under constant drive i; exponentially
// distributed with mean mtj_mean_switching_time(p, i).
inline double mtj_sample_switch_time(const MtjParams& p, double i,
                                     RngStream& rng) {
  return rng.exponential(mtj_mean_switching_time(p, i));
}

// FTJ compact-model parameters. Barrier potentials and effective masses are
// carried for documentation; resistance endpoints and the creep reference
// voltage are direct configuration.
struct FtjParams {
  double t_b = 2.0;           // barrier thickness (nm)
  double r = 175.0;           // junction radius (nm)
  double u_n = 0.67;          // nucleation creep barrier (eV)
  double u_p = 0.52;          // wall creep barrier (eV)
  double tau0_n = 2.8e-15;    // nucleation attempt time (s)
  double tau0_p = 9e-14;      // wall attempt time (s)
  double phi1_off = 0.678;    // LSMO/BTO barrier potential, OFF (V)
  double phi1_on = 0.53;      // LSMO/BTO barrier potential, ON (V)
  double phi2_off = 0.978;    // Co/BTO barrier potential, OFF (V)
  double phi2_on = 1.014;     // Co/BTO barrier potential, ON (V)
  double m_off = 0.931;       // effective electron mass, OFF (m_e)
  double m_on = 0.437;        // effective electron mass, ON (m_e)
  double r_on = 1e4;          // fully-ON resistance (ohm)
  double r_off = 1e5;         // fully-OFF resistance (ohm)
  double v_c = 1.0;           // creep reference voltage (V)
  double temperature = 300.0; // K

  void validate() const {
    if (!(r_off > r_on) || !(r_on > 0))
      throw std::invalid_argument("FtjParams: requires r_off > r_on > 0");
    if (!(u_n > u_p) || !(u_p > 0))
      throw std::invalid_argument("FtjParams: requires u_n > u_p > 0");
    if (!(temperature > 0))
      throw std::invalid_argument("FtjParams: temperature must be positive");
  }
};

struct FtjState {
  double s = 0.0;  // down-polarized domain fraction in [0, 1]
};

// Creep-law switching time at drive |v|. Diverges super-exponentially as
// v -> 0, which is what keeps small read pulses from disturbing the domain.
inline double ftj_switching_time(const FtjParams& p, double v) {
  const double kt = kBoltzmannEv * p.temperature;
  return p.tau0_p * std::exp((p.u_p / kt) * (p.v_c / v));
}

// First-order domain kinetics under a single unipolar pulse: positive v
// grows s toward 1, negative v shrinks it toward 0, v == 0 is a no-op.
inline FtjState ftj_apply_pulse(FtjState st, const FtjParams& p, double v,
                                double t) {
  if (t < 0.0) throw std::domain_error("ftj_apply_pulse: negative pulse time");
  if (v == 0.0 || t == 0.0) return st;
  const double decay = std::exp(-t / ftj_switching_time(p, std::abs(v)));
  double s = v > 0.0 ? 1.0 - (1.0 - st.s) * decay : st.s * decay;
  if (s < 0.0) s = 0.0;
  if (s > 1.0) s = 1.0;
  return FtjState{s};
}

// Parallel conductance of the two oppositely polarized domain fractions.
inline double ftj_resistance(const FtjState& st, const FtjParams& p) {
  return 1.0 / (st.s / p.r_on + (1.0 - st.s) / p.r_off);
}

enum class DistributionFamily { TruncatedNormal };

// Per-parameter process-variation strengths (standard deviations); draws
// are truncated at +/-3 sigma.
struct VariationSpec {
  double sigma_t_fl = 0.03 * 1.3;   // nm
  double sigma_t_tb = 0.03 * 0.85;  // nm
  double sigma_tmr = 0.03 * 2.0;    // dimensionless
  DistributionFamily family = DistributionFamily::TruncatedNormal;

  static VariationSpec none() { return {0.0, 0.0, 0.0}; }

  void validate() const {
    if (sigma_t_fl < 0 || sigma_t_tb < 0 || sigma_tmr < 0)
      throw std::invalid_argument("VariationSpec: sigmas must be >= 0");
  }
};

// Draws one fabricated device instance. Perturbed parameters feed derived
// quantities through a first-order sensitivity map: delta scales linearly
// with free-layer thickness, r_p shifts by twice the relative barrier
// thickness change, r_ap follows from the perturbed TMR.
inline MtjParams sample_device_instance(const MtjParams& nominal,
                                        const VariationSpec& vs,
                                        RngStream& rng) {
  MtjParams out = nominal;
  out.t_fl = rng.truncated_normal(nominal.t_fl, vs.sigma_t_fl,
                                  nominal.t_fl - 3.0 * vs.sigma_t_fl,
                                  nominal.t_fl + 3.0 * vs.sigma_t_fl);
  out.t_tb = rng.truncated_normal(nominal.t_tb, vs.sigma_t_tb,
                                  nominal.t_tb - 3.0 * vs.sigma_t_tb,
                                  nominal.t_tb + 3.0 * vs.sigma_t_tb);
  out.tmr = rng.truncated_normal(nominal.tmr, vs.sigma_tmr,
                                 nominal.tmr - 3.0 * vs.sigma_tmr,
                                 nominal.tmr + 3.0 * vs.sigma_tmr);
  out.delta = nominal.delta * (out.t_fl / nominal.t_fl);
  out.r_p = nominal.r_p *
            (1.0 + 2.0 * (out.t_tb - nominal.t_tb) / nominal.t_tb);
  return out;
}

}  // namespace neuropde
