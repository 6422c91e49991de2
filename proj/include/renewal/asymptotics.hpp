#pragma once

#include <functional>
#include <string>

#include "renewal/step_distribution.hpp"
#include "renewal/tilt.hpp"

namespace renewal {

// Regularly varying tilted-tail input for the strong-renewal-theorem
// branch; the slowly varying factor is restricted to the constant c_L.
struct SrtSpec {
  double alpha = 0.75;  // in (0,1)
  double c_L = 1.0;     // > 0
  // alpha <= 1/2 needs the (SRTc)-type integral diagnostic as evidence
  bool requires_srtc_diagnostic() const { return alpha <= 0.5; }
};

enum class Regime { A_I, A_I_SRT, A_II, B };
const char* to_string(Regime r);

// Picks the asymptotic branch from the solved tilt flags; throws
// RegimeError when the flags are ambiguous at solver tolerance.
Regime detect_regime(const TiltParams& tp);

// lim e^{kappa x} H((-inf,-x)) = 1/(kappa g'(kappa)); 0 when g' = +inf.
double predict_nonarithmetic(const TiltParams& tp);

// lattice limit d/((e^{kappa d}-1) g'(kappa)); 0 when g' = +inf.
double predict_arithmetic(const TiltParams& tp, double d);

// m(x) = int_0^x Q(step > t) dt, exact staircase for lattice laws,
// closed form / quadrature (tol 1e-10) for continuous ones.
double truncated_mean(const StepDistribution& q_dist, double x);
// same integral for a caller-supplied survival function
double truncated_mean(const std::function<double(double)>& survival, double x);

// SRT branch: predicted H((-inf,-x)) = e^{-kappa x} /
// (Gamma(alpha) Gamma(2-alpha) kappa m(x)).  The _scaled form returns
// e^{kappa x} times that and stays finite at any depth.
double predict_srt(const TiltParams& tp, const SrtSpec& spec,
                   const StepDistribution& q_dist, double x);
double predict_srt_scaled(const TiltParams& tp, const SrtSpec& spec,
                          const StepDistribution& q_dist, double x);

// defective regime: e^{-kappa x} E[e^{-kappa X} 1{x < -X <= x+1}] /
// (kappa (1-rho)^2); _scaled returns e^{kappa x} times the prediction.
double predict_local_subexp(const StepDistribution& dist,
                            const TiltParams& tp, double x);
double predict_local_subexp_scaled(const StepDistribution& dist,
                                   const TiltParams& tp, double x);

// window limit lim e^{kappa x} H((-x-delta,-x)) = (1-e^{-delta kappa}) /
// (kappa g'(kappa)) for non-arithmetic laws.
double predict_window(const TiltParams& tp, double delta);

// inner integral of the (SRTc)-style diagnostic:
// int_1^{delta x} (F(x)-F(x-z)) / (Fbar(z) z^2) dz for the Q-step cdf F.
double srtc_integral(const StepDistribution& q_dist, double delta, double x);

}  // namespace renewal
