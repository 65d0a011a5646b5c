#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fractal_spectra/linalg.hpp"
#include "fractal_spectra/rational.hpp"

namespace fractal_spectra {

/// Transition matrix of a random walk restricted to its non-absorbing states.
struct AbsorbingChain {
  Matrix<Rational> transient;
  std::vector<std::string> state_labels;
};

/// Simple random walk on the level-1 path: states P0, X1..X7 with the far
/// endpoint absorbing. Built from the adjacency (uniform over neighbors,
/// reflecting at P0) rather than transcribed entry by entry.
inline AbsorbingChain build_level1_chain() {
  AbsorbingChain c;
  c.state_labels = {"P0", "X1", "X2", "X3", "X4", "X5", "X6", "X7"};
  const std::size_t n = 8;  // transient states; P1 is dropped
  c.transient = Matrix<Rational>(n, n);
  c.transient(0, 1) = Rational{1};  // degree-1 endpoint steps to its only neighbor
  const Rational half(1, 2);
  for (std::size_t i = 1; i < n; ++i) {
    c.transient(i, i - 1) = half;
    if (i + 1 < n) c.transient(i, i + 1) = half;
    // i = n-1 leaks probability 1/2 to the absorbing endpoint
  }
  return c;
}

struct CrossingTimes {
  std::vector<Rational> times;
};

/// Expected absorption times: the exact solution of (I - M) T = 1.
/// Throws SingularMatrixError if the chain has no leakage (an absorbing state
/// was left in the transient block).
inline CrossingTimes crossing_times(const AbsorbingChain& c) {
  const std::size_t n = c.transient.rows();
  Matrix<Rational> a = Matrix<Rational>::identity(n) - c.transient;
  return {solve(a, std::vector<Rational>(n, Rational{1}))};
}

/// The dimension family of the curve together with the quantities they are
/// derived from. All values are exact dyadic rationals, so the doubles here
/// are exact too.
struct DimensionSet {
  double walk_dimension = 0.0;       // D_W
  double delta = 0.0;                // D_W / 2
  double hausdorff_dimension = 0.0;  // D_H
  double spectral_dimension = 0.0;   // D_S
  double energy_scaling = 0.0;       // rho
  double mean_crossing_time = 0.0;   // E(tau) from the reflecting endpoint
  double einstein_residual = 0.0;    // |D_H - D_S * D_W / 2|

  Rational walk_dimension_exact;
  Rational delta_exact;
  Rational hausdorff_dimension_exact;
  Rational spectral_dimension_exact;
  Rational energy_scaling_exact;
  Rational mean_crossing_exact;
};

namespace detail {
/// log(a)/log(b) as an exact rational; both arguments must be powers of two.
inline Rational log_ratio(const Rational& a, const Rational& b) {
  const auto ea = exact_log2(a);
  const auto eb = exact_log2(b);
  if (!ea || !eb || *eb == 0)
    throw std::logic_error("log_ratio: arguments are not powers of two");
  return Rational(*ea, *eb);
}
}  // namespace detail

/// Walk, Hausdorff and spectral dimensions from their defining formulas, each
/// computed independently: D_W from the crossing time and the contraction
/// ratio, D_H from the map count, D_S from the energy scaling factor
/// rho = E(tau)/N.
inline DimensionSet dimensions() {
  const CrossingTimes t = crossing_times(build_level1_chain());
  const Rational mean = t.times.front();
  const Rational n_maps{8};
  const Rational ratio(1, 4);

  const Rational d_w = detail::log_ratio(mean, Rational{4});
  const Rational delta = d_w / Rational{2};
  const Rational d_h = -detail::log_ratio(n_maps, ratio);
  const Rational rho = mean / n_maps;
  const Rational d_s = Rational{2} * detail::log_ratio(n_maps, n_maps * rho);

  DimensionSet d;
  d.walk_dimension_exact = d_w;
  d.delta_exact = delta;
  d.hausdorff_dimension_exact = d_h;
  d.spectral_dimension_exact = d_s;
  d.energy_scaling_exact = rho;
  d.mean_crossing_exact = mean;
  d.walk_dimension = d_w.to_double();
  d.delta = delta.to_double();
  d.hausdorff_dimension = d_h.to_double();
  d.spectral_dimension = d_s.to_double();
  d.energy_scaling = rho.to_double();
  d.mean_crossing_time = mean.to_double();
  d.einstein_residual = abs(d_h - d_s * d_w / Rational{2}).to_double();
  return d;
}

struct WalkSimulation {
  double mean = 0.0;
  double half_width_95 = 0.0;  // normal-approximation 95% confidence half-width
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t min_steps = 0;
};

/// Monte-Carlo crossing times on the level-1 path, deterministic for a fixed
/// seed. Validates the analytic value 64.
inline WalkSimulation simulate_walk(int level, std::uint64_t trials, std::uint64_t seed) {
  if (level != 1) throw std::invalid_argument("simulate_walk: only level 1 is supported");
  if (trials < 1) throw std::invalid_argument("simulate_walk: trials must be >= 1");
  std::mt19937_64 rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  std::uint64_t min_steps = UINT64_MAX;
  for (std::uint64_t t = 0; t < trials; ++t) {
    int pos = 0;
    std::uint64_t steps = 0;
    while (pos != 8) {
      pos = (pos == 0) ? 1 : (rng() & 1 ? pos + 1 : pos - 1);
      ++steps;
    }
    const double s = static_cast<double>(steps);
    sum += s;
    sum_sq += s * s;
    min_steps = std::min(min_steps, steps);
  }
  WalkSimulation r;
  r.trials = trials;
  r.seed = seed;
  r.min_steps = min_steps;
  r.mean = sum / static_cast<double>(trials);
  if (trials > 1) {
    const double var = (sum_sq - sum * sum / static_cast<double>(trials)) /
                       static_cast<double>(trials - 1);
    r.half_width_95 = 1.96 * std::sqrt(var / static_cast<double>(trials));
  }
  return r;
}

}  // namespace fractal_spectra
