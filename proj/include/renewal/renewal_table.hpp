#pragma once

#include <Eigen/Core>

#include "renewal/step_distribution.hpp"
#include "renewal/tilt.hpp"

namespace renewal {

struct TableOptions {
  double w = 1.0;          // geometric weight; 1 for H, rho for H_rho / H_Q
  int k_lo = 0;            // requested window, lattice indices
  int k_hi = 0;
  double tol = 1e-12;      // certified per-entry truncation target
  long max_steps = 500000;
};

// Lattice renewal masses u_k = sum_n w^n P(S_n = d k) over [k_lo, k_hi],
// n = 0 atom included, with a certified per-entry truncation bound.
struct RenewalTable {
  double d = 1.0;
  double w = 1.0;
  int k_lo = 0, k_hi = 0;
  Eigen::ArrayXd u;            // u[k - k_lo]
  double trunc_bound = 0.0;    // per-entry error bound
  double below_window_bound = 0.0;  // bound on sum_{k < k_lo} u_k
  long n_steps = 0;
  // Chebyshev certificate: w * g(theta_cert) = lambda_cert < 1
  double theta_cert = 0.0;
  double lambda_cert = 0.0;
  double visit_cap = 0.0;      // uniform bound on weighted visits per point

  double at(int k) const { return u[k - k_lo]; }
};

RenewalTable renewal_table(const StepDistribution& dist,
                           const TableOptions& opt);

// sum of u_k over d k in (x, x+h]
double window_mass(const RenewalTable& tab, double x, double h);

// H((-inf,-x)) from the P-side table; certifies remainder <= tol_rel * value
double left_tail_direct(const RenewalTable& tab, double x,
                        double tol_rel = 1e-6);
// e^{kappa x} H((-inf,-x)); the deep-x safe scale
double left_tail_direct_scaled(const RenewalTable& tab, double kappa, double x,
                               double tol_rel = 1e-6);

// H((-inf,-x)) = sum_{d k > x} e^{-kappa d k} u^Q_k from a Q-side table
double left_tail_from_q(const RenewalTable& tab_q, const TiltParams& tp,
                        double x, double tol_rel = 1e-6);
double left_tail_from_q_scaled(const RenewalTable& tab_q, const TiltParams& tp,
                               double x, double tol_rel = 1e-6);

// relative residual of H_P((-inf,-x)) = kappa e^{-kappa x}
// int_0^inf e^{-kappa h} H_Q((x,x+h]) dh, right side integrated piecewise
double identity_residual(const RenewalTable& tab_p, const RenewalTable& tab_q,
                         const TiltParams& tp, double x,
                         double quad_tol = 1e-10);

// eta(x+(0,T]) (1-rho)^2 / (rho mu(x+(0,T])) for the defective renewal
// measure eta of q_dist with weight rho; -> 1 iff mu is Delta-subexponential
double wy09_ratio(const StepDistribution& q_dist, double rho, double x,
                  double T, double tol = 1e-10);

// Convenience builders used by the CLI and the comparison harness.
// P-side table deep enough for left tails up to x_max.
RenewalTable left_tail_table(const StepDistribution& dist, double x_max,
                             double tol_rel, const TiltParams& tp);
// Q-side table (weight rho) covering (0, x_max] plus the decay margin.
RenewalTable q_side_table(const StepDistribution& q_dist, const TiltParams& tp,
                          double x_max, double tol);

}  // namespace renewal
