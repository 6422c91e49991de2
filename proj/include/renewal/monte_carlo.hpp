#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "renewal/step_distribution.hpp"
#include "renewal/tilt.hpp"

namespace renewal {

enum class McMethod { NAIVE, TILTED };

const char* to_string(McMethod m);

struct TailEstimate {
  double x = 0.0;
  double value = 0.0;       // estimate of H((-inf,-x))
  double std_error = 0.0;   // sample sd / sqrt(n_paths)
  long n_paths = 0;
  McMethod method = McMethod::NAIVE;
  std::string truncation_note;
};

// Forward simulation under P: per path, count visits S_n < -x for
// n in [0, horizon].  Horizon bias is one-sided (undercount) and, with
// positive drift, decays exponentially in the early-exit barrier; see
// the truncation_note.  Deterministic given (seed, n_paths); independent
// of `workers`.
TailEstimate estimate_naive(const StepDistribution& dist, double x,
                            long n_paths, long horizon, std::uint64_t seed,
                            int workers = 1);

// Importance sampling under the tilted walk Q: W = sum_n rho^n
// e^{-kappa S_n} 1{S_n > x}, path stopped once S_n > x + M with
// M = ln(1/eps_trunc)/kappa (and, for rho < 1, once rho^n/(1-rho) <
// eps_trunc).  E[W] = H((-inf,-x)) up to the documented truncation bias.
TailEstimate estimate_tilted(const StepDistribution& dist,
                             const TiltParams& tp, double x, long n_paths,
                             double eps_trunc, std::uint64_t seed,
                             int workers = 1, long step_budget = 1000000);

// Same estimator evaluated on a whole x-grid with common random numbers:
// one Q-path serves every x, so the estimates are pathwise nonincreasing
// in x.  xs must be nondecreasing.
std::vector<TailEstimate> estimate_tilted_grid(
    const StepDistribution& dist, const TiltParams& tp,
    const std::vector<double>& xs, long n_paths, double eps_trunc,
    std::uint64_t seed, int workers = 1, long step_budget = 1000000);

}  // namespace renewal
