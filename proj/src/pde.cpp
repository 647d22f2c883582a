#include "neuropde/pde.hpp"

#include <algorithm>
#include <cmath>

namespace neuropde {

double analytical_steady_heat(double x, double f, double l) {
  if (x < 0.0 || x > l)
    throw std::domain_error("analytical_steady_heat: x outside [0, l]");
  return f * l * x * x / 2.0 - f * x * x * x / 6.0;
}

double analytical_diffusion_2d(double x, double y, double t,
                               const Diffusion2D& p) {
  if (!(t > 0.0))
    throw std::domain_error("analytical_diffusion_2d: t must be > 0");
  const double dx = p.l / p.n;
  const double x0 = p.source_i * dx;
  const double y0 = p.source_j * dx;
  const double r2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
  const double four_dt = 4.0 * p.d * t;
  return p.c0 / (M_PI * four_dt) * std::exp(-r2 / four_dt);
}

namespace {

WalkBackend make_backend(const MarkovChain1D& chain, const BackendConfig& cfg,
                         std::uint64_t run_seed) {
  if (cfg.kind == BackendKind::Software) return WalkBackend::software(chain);
  return WalkBackend::hardware(chain, cfg, mix64(run_seed ^ 0xDE51CEULL));
}

}  // namespace

Solution1D solve_steady_heat(const SteadyHeat1D& p, const BackendConfig& cfg,
                             std::uint64_t master_seed, int workers,
                             std::uint64_t max_steps) {
  p.validate();
  const MarkovChain1D chain =
      build_chain(p.l, p.n, p.dt, RightBoundary::Absorbing, p.diffusion);
  const WalkBackend backend = make_backend(chain, cfg, master_seed);

  WalkPlan plan;
  plan.mode = WalkMode::ToAbsorption;
  plan.walkers_per_start = p.w;
  plan.max_steps = max_steps;
  WalkResult r = run_walkers(backend, plan, master_seed, workers);

  Solution1D out;
  out.ledger = r.ledger;
  out.x.resize(p.n);
  out.u.resize(p.n);
  std::vector<double> raw(p.n, 0.0);
  const double scale = -p.f * p.dt / static_cast<double>(p.w);
  for (int i = 0; i < p.n; ++i) {
    out.x[i] = chain.position(i);
    double acc = 0.0;
    for (int j = 0; j < p.n; ++j)
      acc += static_cast<double>(r.passage.at(i, j)) *
             (p.l - chain.position(j));
    raw[i] = scale * acc;
  }
  for (int i = 0; i < p.n; ++i) out.u[i] = raw[i] - raw[0];
  return out;
}

Solution2D solve_diffusion_2d(const Diffusion2D& p, const BackendConfig& cfg,
                              std::uint64_t master_seed, int workers) {
  p.validate();
  const MarkovChain1D chain =
      build_chain(p.l, p.n, p.dt, RightBoundary::None, p.d);

  Solution2D out;
  out.x.resize(p.n);
  for (int i = 0; i < p.n; ++i) out.x[i] = chain.position(i);
  out.ledger.time_per_step_s = 10e-9;
  out.ledger.energy_per_step_j = 1.451e-12;

  const double dx = chain.dx;
  const double axis_scale =
      std::sqrt(p.c0) / (static_cast<double>(p.w) * dx);

  // Two independent walk units, one per dimension, each with its own seed
  // and (for hardware backends) its own fabricated devices.
  for (int dim = 0; dim < 2; ++dim) {
    const std::uint64_t dim_seed = mix64(master_seed ^ (0xD1ULL + dim));
    const WalkBackend backend = make_backend(chain, cfg, dim_seed);
    WalkPlan plan;
    plan.mode = WalkMode::FixedSteps;
    plan.walkers_per_start = p.w;
    plan.source = dim == 0 ? p.source_i : p.source_j;
    plan.n_steps = p.t_steps;
    WalkResult r = run_walkers(backend, plan, dim_seed, workers);
    out.ledger.time_per_step_s = r.ledger.time_per_step_s;
    out.ledger.energy_per_step_j = r.ledger.energy_per_step_j;
    out.ledger.merge(r.ledger);
    auto& u = dim == 0 ? out.ux : out.uy;
    u.resize(p.n);
    for (int i = 0; i < p.n; ++i)
      u[i] = axis_scale * static_cast<double>(r.terminal[i]);
  }

  out.c.resize(static_cast<std::size_t>(p.n) * p.n);
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      out.c[static_cast<std::size_t>(i) * p.n + j] = out.ux[i] * out.uy[j];
  return out;
}

VarianceReport variance(const std::vector<double>& mean_solution,
                        const std::vector<double>& analytical, int runs) {
  if (mean_solution.size() != analytical.size())
    throw std::invalid_argument("variance: grid size mismatch");
  VarianceReport rep;
  rep.runs = runs;
  rep.sigma2.resize(mean_solution.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < mean_solution.size(); ++i) {
    const double d = mean_solution[i] - analytical[i];
    rep.sigma2[i] = d * d;
    sum += rep.sigma2[i];
    rep.max_sigma2 = std::max(rep.max_sigma2, rep.sigma2[i]);
  }
  rep.mean_sigma2 = mean_solution.empty() ? 0.0 : sum / mean_solution.size();
  return rep;
}

std::vector<double> mean_solution_1d(const SteadyHeat1D& p,
                                     const BackendConfig& cfg,
                                     std::uint64_t master_seed, int workers,
                                     int runs, Ledger* total) {
  std::vector<double> mean(p.n, 0.0);
  for (int k = 0; k < runs; ++k) {
    const std::uint64_t run_seed = mix64(master_seed ^ (0x100ULL + k));
    Solution1D s = solve_steady_heat(p, cfg, run_seed, workers);
    for (int i = 0; i < p.n; ++i) mean[i] += s.u[i];
    if (total) {
      total->time_per_step_s = s.ledger.time_per_step_s;
      total->energy_per_step_j = s.ledger.energy_per_step_j;
      total->merge(s.ledger);
    }
  }
  for (double& v : mean) v /= runs;
  return mean;
}

std::vector<double> mean_grid_2d(const Diffusion2D& p, const BackendConfig& cfg,
                                 std::uint64_t master_seed, int workers,
                                 int runs, Ledger* total, Solution2D* last) {
  std::vector<double> mean(static_cast<std::size_t>(p.n) * p.n, 0.0);
  for (int k = 0; k < runs; ++k) {
    const std::uint64_t run_seed = mix64(master_seed ^ (0x200ULL + k));
    Solution2D s = solve_diffusion_2d(p, cfg, run_seed, workers);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += s.c[i];
    if (total) {
      total->time_per_step_s = s.ledger.time_per_step_s;
      total->energy_per_step_j = s.ledger.energy_per_step_j;
      total->merge(s.ledger);
    }
    if (last && k == runs - 1) *last = std::move(s);
  }
  for (double& v : mean) v /= runs;
  return mean;
}

std::vector<double> analytical_grid_1d(const SteadyHeat1D& p) {
  std::vector<double> out(p.n);
  const double dx = p.l / p.n;
  for (int i = 0; i < p.n; ++i) out[i] = analytical_steady_heat(i * dx, p.f, p.l);
  return out;
}

std::vector<double> analytical_grid_2d(const Diffusion2D& p) {
  std::vector<double> out(static_cast<std::size_t>(p.n) * p.n);
  const double dx = p.l / p.n;
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      out[static_cast<std::size_t>(i) * p.n + j] =
          analytical_diffusion_2d(i * dx, j * dx, p.t(), p);
  return out;
}

std::vector<SweepRow> convergence_sweep(const Diffusion2D& p,
                                        const std::vector<std::uint64_t>& w_values,
                                        const std::vector<BackendConfig>& backends,
                                        int repeats, std::uint64_t master_seed,
                                        int workers) {
  if (!std::is_sorted(w_values.begin(), w_values.end()))
    throw std::invalid_argument("convergence_sweep: w_values must ascend");
  const std::vector<double> an = analytical_grid_2d(p);
  std::vector<SweepRow> rows;
  for (std::uint64_t w : w_values) {
    Diffusion2D pw = p;
    pw.w = w;
    for (const BackendConfig& cfg : backends) {
      SweepRow row;
      row.w = w;
      row.backend = cfg.kind;
      for (int r = 0; r < repeats; ++r) {
        const std::uint64_t seed = mix64(master_seed ^ (0x300ULL + r));
        Solution2D s = solve_diffusion_2d(pw, cfg, seed, workers);
        row.max_sigma2_per_repeat.push_back(variance(s.c, an).max_sigma2);
      }
      double sum = 0.0;
      for (double v : row.max_sigma2_per_repeat) sum += v;
      row.mean_max_sigma2 = sum / repeats;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace neuropde
