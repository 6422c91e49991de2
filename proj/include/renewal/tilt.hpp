#pragma once

#include <optional>

#include "renewal/extended_real.hpp"
#include "renewal/step_distribution.hpp"

namespace renewal {

struct TiltParams {
  double kappa = 0.0;            // sup{theta>0 : g(theta) < 1}
  double rho = 1.0;              // g(kappa)
  ExtReal g_prime_kappa;         // > 0, possibly +inf
  ExtReal theta_fin;             // sup{theta : g(theta) < inf}
  std::optional<double> span;    // lattice span, or nullopt (non-arithmetic)
  bool boundary = false;         // kappa == theta_fin (no interior root)
  // g(theta_fin) indistinguishable from 1 at solver tolerance; the two
  // asymptotic regimes (a) and (b) cannot be told apart numerically
  bool ambiguous = false;
};

// Solves (kappa, rho) for a step law with positive mean and an exponential
// left tail.  |kappa error| <= tol.
TiltParams solve_tilt(const StepDistribution& dist, double tol = 1e-12);

// Law of one step under the tilted measure Q: the law of -X reweighted by
// rho^{-1} e^{-kappa X}.  Supported for lattice and two-sided-exponential
// laws.
StepDistribution tilt_step_law(const StepDistribution& dist,
                               const TiltParams& tp);

}  // namespace renewal
