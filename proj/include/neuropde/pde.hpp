#pragma once

#include <cstdint>
#include <vector>

#include "neuropde/walk.hpp"

namespace neuropde {

// Steady-state heat problem on a wire of length l: u'' = f*(l - x),
// u(0) = 0, u'(0) = 0, solved by walks run to absorption at the far end.
struct SteadyHeat1D {
  double l = 2.0;
  int n = 50;
  double f = 3.0;
  double dt = 0.00038;
  std::uint64_t w = 10000;  // walkers per start position
  double diffusion = 1.0;

  void validate() const {
    if (!(l > 0) || n < 2 || !(dt > 0) || w < 1 || !(diffusion > 0))
      throw std::invalid_argument("SteadyHeat1D: invalid problem");
  }
};

double analytical_steady_heat(double x, double f, double l);

// Point-source diffusion, solved as two independent 1D time-dependent
// walks whose occupancy densities multiply into the grid solution.
struct Diffusion2D {
  double c0 = 1.0;
  double d = 1.0;
  std::uint64_t w = 100000;   // walkers per dimension
  std::uint64_t t_steps = 80; // solution time t = t_steps * dt
  double dt = 0.00038;
  double l = 2.0;
  int n = 50;
  int source_i = 25;
  int source_j = 25;

  double t() const { return static_cast<double>(t_steps) * dt; }

  void validate() const {
    if (!(c0 > 0) || !(d > 0) || w < 1 || t_steps < 1 || !(dt > 0) ||
        !(l > 0) || n < 2 || source_i < 0 || source_i >= n || source_j < 0 ||
        source_j >= n)
      throw std::invalid_argument("Diffusion2D: invalid problem");
  }
};

// Free-space heat kernel with the problem's point source.
double analytical_diffusion_2d(double x, double y, double t,
                               const Diffusion2D& p);

struct Solution1D {
  std::vector<double> x;
  std::vector<double> u;
  Ledger ledger;
};

Solution1D solve_steady_heat(const SteadyHeat1D& p, const BackendConfig& cfg,
                             std::uint64_t master_seed, int workers,
                             std::uint64_t max_steps = 10'000'000);

struct Solution2D {
  std::vector<double> x;   // shared axis positions
  std::vector<double> ux;  // per-dimension densities
  std::vector<double> uy;
  std::vector<double> c;   // n*n row-major grid, c[i*n+j] = ux[i]*uy[j]
  Ledger ledger;
};

Solution2D solve_diffusion_2d(const Diffusion2D& p, const BackendConfig& cfg,
                              std::uint64_t master_seed, int workers);

struct VarianceReport {
  std::vector<double> sigma2;
  double max_sigma2 = 0.0;
  double mean_sigma2 = 0.0;
  int runs = 0;
};

// Per-position squared deviation of the across-run mean solution from the
// analytical values.
VarianceReport variance(const std::vector<double>& mean_solution,
                        const std::vector<double>& analytical, int runs = 1);

// Across-run mean solutions (the repeat protocol); run k uses the seed
// derived from (master_seed, k). The accumulated ledger covers all runs.
std::vector<double> mean_solution_1d(const SteadyHeat1D& p,
                                     const BackendConfig& cfg,
                                     std::uint64_t master_seed, int workers,
                                     int runs, Ledger* total = nullptr);
std::vector<double> mean_grid_2d(const Diffusion2D& p,
                                 const BackendConfig& cfg,
                                 std::uint64_t master_seed, int workers,
                                 int runs, Ledger* total = nullptr,
                                 Solution2D* last = nullptr);

// Analytical references sampled on the problem grids.
std::vector<double> analytical_grid_1d(const SteadyHeat1D& p);
std::vector<double> analytical_grid_2d(const Diffusion2D& p);

struct SweepRow {
  std::uint64_t w = 0;
  BackendKind backend = BackendKind::Software;
  std::vector<double> max_sigma2_per_repeat;
  double mean_max_sigma2 = 0.0;
};

// Max-variance-vs-walker-count curves, one single-run solution per repeat.
std::vector<SweepRow> convergence_sweep(const Diffusion2D& p,
                                        const std::vector<std::uint64_t>& w_values,
                                        const std::vector<BackendConfig>& backends,
                                        int repeats, std::uint64_t master_seed,
                                        int workers);

}  // namespace neuropde
