#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace neuropde {

enum class LeftBoundary { ReflectDouble };           // right move with 2*pg
enum class RightBoundary { Absorbing, None };        // None: reflect, no sink

struct TransitionProbs {
  double ps;
  double pg;
};

// Integrals of the zero-mean Gaussian single-step propagator (variance
// 2*d*dt) over the cell of width dx: ps is the mass inside the cell, pg the
// mass of one tail.
inline TransitionProbs transition_probabilities(double dx, double dt,
                                                double d = 1.0) {
  if (!(dx > 0.0) || !(dt > 0.0) || !(d > 0.0))
    throw std::domain_error("transition_probabilities: dx, dt, d must be > 0");
  const double sigma = std::sqrt(2.0 * d * dt);
  const double z = (0.5 * dx) / (sigma * std::sqrt(2.0));
  return {std::erf(z), 0.5 * std::erfc(z)};
}

// One-dimensional birth-death chain over n uniformly spaced positions
// X_i = i*dx. Immutable after construction.
struct MarkovChain1D {
  int n = 0;
  double dx = 0.0;
  double dt = 0.0;
  double ps = 0.0;
  double pg = 0.0;
  double diffusion = 1.0;
  LeftBoundary left_boundary = LeftBoundary::ReflectDouble;
  RightBoundary right_boundary = RightBoundary::Absorbing;

  double position(int i) const { return i * dx; }

  bool absorbing(int i) const {
    return right_boundary == RightBoundary::Absorbing && i == n - 1;
  }

  // (left, stay, right) probabilities for state i.
  std::array<double, 3> row(int i) const {
    if (i < 0 || i >= n) throw std::domain_error("MarkovChain1D::row: bad index");
    if (absorbing(i)) return {0.0, 1.0, 0.0};
    if (i == 0) return {0.0, ps, 2.0 * pg};
    if (i == n - 1) return {2.0 * pg, ps, 0.0};  // right edge, no sink
    return {pg, ps, pg};
  }
};

inline MarkovChain1D build_chain(double l, int n, double dt,
                                 RightBoundary rb, double d = 1.0) {
  if (n < 2) throw std::domain_error("build_chain: n must be >= 2");
  if (!(l > 0.0) || !(dt > 0.0))
    throw std::domain_error("build_chain: l and dt must be > 0");
  MarkovChain1D c;
  c.n = n;
  c.dx = l / n;
  c.dt = dt;
  c.diffusion = d;
  const TransitionProbs tp = transition_probabilities(c.dx, dt, d);
  c.ps = tp.ps;
  c.pg = tp.pg;
  c.right_boundary = rb;
  return c;
}

}  // namespace neuropde
