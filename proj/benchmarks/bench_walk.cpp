// Throughput comparison: serial reference walker loop vs the OpenMP kernel.
#include <chrono>
#include <cstdio>

#include <omp.h>

#include "neuropde/chain.hpp"
#include "neuropde/walk.hpp"

using namespace neuropde;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main() {
  const MarkovChain1D chain =
      build_chain(2.0, 50, 0.00038, RightBoundary::Absorbing);
  const WalkBackend backend = WalkBackend::software(chain);
  WalkPlan plan;
  plan.mode = WalkMode::ToAbsorption;
  plan.walkers_per_start = 2000;
  const std::uint64_t seed = 42;

  auto t0 = Clock::now();
  const WalkResult serial = run_walkers_serial(backend, plan, seed);
  const double t_serial = seconds_since(t0);

  const int threads = omp_get_max_threads();
  t0 = Clock::now();
  const WalkResult parallel = run_walkers(backend, plan, seed, threads);
  const double t_parallel = seconds_since(t0);

  const bool identical = serial.passage.counts == parallel.passage.counts &&
                         serial.ledger.steps == parallel.ledger.steps;
  const double steps = static_cast<double>(serial.ledger.steps);
  std::printf("walkers:          %llu x %d starts\n",
              static_cast<unsigned long long>(plan.walkers_per_start), chain.n);
  std::printf("total steps:      %.3e\n", steps);
  std::printf("serial:           %.3f s  (%.3e steps/s)\n", t_serial,
              steps / t_serial);
  std::printf("openmp (%2d thr):  %.3f s  (%.3e steps/s)\n", threads,
              t_parallel, steps / t_parallel);
  std::printf("speedup:          %.2fx\n", t_serial / t_parallel);
  std::printf("results identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
