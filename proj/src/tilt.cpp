#include "renewal/tilt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "renewal/errors.hpp"

namespace renewal {

namespace {

double finite_or_inf(const ExtReal& g) {
  return g.finite() ? g.value() : std::numeric_limits<double>::infinity();
}

}  // namespace

TiltParams solve_tilt(const StepDistribution& dist, double tol) {
  if (mass_in_window(dist, -std::numeric_limits<double>::infinity(), 0.0) <=
      0.0)
    throw std::domain_error("solve_tilt: requires P(X < 0) > 0");
  {
    ExtReal m = mean(dist);
    if (m.finite() && !(m.value() > 0.0))
      throw std::domain_error("solve_tilt: requires E X > 0");
  }

  // geometric expansion until g diverges or exceeds 1
  double theta_lo = 0.0;  // largest known theta with g finite and < 1
  double theta = tol;
  double g_at_lo = 1.0;
  bool diverged = false, exceeded = false;
  double theta_hi = 0.0;
  for (int i = 0; i < 1200; ++i) {
    ExtReal g = laplace(dist, theta);
    if (!g.finite()) {
      diverged = true;
      theta_hi = theta;
      break;
    }
    if (g.value() >= 1.0) {
      exceeded = true;
      theta_hi = theta;
      break;
    }
    theta_lo = theta;
    g_at_lo = g.value();
    theta *= 2.0;
  }
  if (!diverged && !exceeded)
    throw std::domain_error(
        "solve_tilt: g stayed below 1 on the whole probed range; no positive "
        "theta of finiteness/decay found");
  if (theta_lo == 0.0 && !exceeded) {
    // divergence hit before any finite g < 1 was seen: no exponential moment
    throw std::domain_error(
        "solve_tilt: g(theta) = inf for every probed theta > 0 (condition "
        "(exp) fails)");
  }

  TiltParams tp;
  tp.span = detect_span(dist);

  if (exceeded) {
    if (theta_lo == 0.0)
      throw std::domain_error(
          "solve_tilt: g >= 1 already at theta ~ 0 (E X <= 0)");
    // interior root of g = 1 in (theta_lo, theta_hi]; g convex, g < 1 below
    double lo = theta_lo, hi = theta_hi;
    while (hi - lo > tol) {
      double mid = 0.5 * (lo + hi);
      ExtReal g = laplace(dist, mid);
      if (g.finite() && g.value() < 1.0)
        lo = mid;
      else
        hi = mid;
    }
    tp.kappa = 0.5 * (lo + hi);
    tp.rho = 1.0;
    tp.theta_fin = finiteness_abscissa(dist);
    tp.g_prime_kappa = laplace_deriv(dist, lo);
    return tp;
  }

  // divergence first: bisect the finiteness boundary
  double lo = theta_lo, hi = theta_hi;
  double g_lo = g_at_lo;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    ExtReal g = laplace(dist, mid);
    if (g.finite()) {
      if (g.value() >= 1.0) {
        // crossed 1 while still finite: interior root in (lo, mid)
        double a = lo, b = mid;
        while (b - a > tol) {
          double m2 = 0.5 * (a + b);
          ExtReal g2 = laplace(dist, m2);
          if (g2.finite() && g2.value() < 1.0)
            a = m2;
          else
            b = m2;
        }
        tp.kappa = 0.5 * (a + b);
        tp.rho = 1.0;
        tp.theta_fin = finiteness_abscissa(dist);
        tp.g_prime_kappa = laplace_deriv(dist, a);
        return tp;
      }
      lo = mid;
      g_lo = g.value();
    } else {
      hi = mid;
    }
  }

  // boundary case: kappa = theta_fin, rho = g(theta_fin) <= 1
  tp.kappa = lo;
  tp.boundary = true;
  tp.theta_fin = lo;
  {
    // prefer the exact abscissa when the family knows it
    ExtReal tf = finiteness_abscissa(dist);
    if (tf.finite() && std::abs(tf.value() - lo) <= 4.0 * tol) {
      tp.kappa = tf.value();
      tp.theta_fin = tf;
    }
  }
  ExtReal g_b = laplace(dist, tp.kappa);
  double rho = g_b.finite() ? g_b.value() : g_lo;
  if (std::abs(rho - 1.0) <= 10.0 * tol) {
    tp.ambiguous = true;
    tp.rho = 1.0;
  } else if (rho > 1.0) {
    // g crossed 1 exactly at the abscissa within noise
    tp.ambiguous = true;
    tp.rho = 1.0;
  } else {
    tp.rho = rho;
  }
  tp.g_prime_kappa = laplace_deriv(dist, tp.kappa);
  if (!(finite_or_inf(tp.g_prime_kappa) > 0.0))
    throw std::domain_error("solve_tilt: g'(kappa) <= 0");
  return tp;
}

StepDistribution tilt_step_law(const StepDistribution& dist,
                               const TiltParams& tp) {
  const double kappa = tp.kappa, rho = tp.rho;
  if (dist.is_lattice()) {
    const auto& l = dist.lattice();
    LatticeLaw q;
    q.d = l.d;
    for (const auto& a : l.atoms) {
      // X = d*k maps to a Q-step at -d*k with weight e^{-kappa d k}
      q.atoms.push_back(Atom{-a.k, a.p * std::exp(-kappa * l.d * a.k) / rho});
    }
    if (l.tail) {
      const auto& t = *l.tail;
      PowerGeomTail qt;
      qt.side = -t.side;
      qt.beta = t.beta;
      qt.coef = t.coef / rho;
      // tail atoms X = side*d*k pick up e^{-kappa*side*d*k}
      qt.ratio = t.ratio * std::exp(-kappa * l.d * t.side);
      if (qt.ratio > 1.0 && qt.ratio < 1.0 + 1e-12) qt.ratio = 1.0;
      if (qt.ratio > 1.0)
        throw std::domain_error("tilt_step_law: tilted tail not summable");
      q.tail = qt;
    }
    std::sort(q.atoms.begin(), q.atoms.end(),
              [](const Atom& a, const Atom& b) { return a.k < b.k; });
    return StepDistribution::unchecked_lattice(std::move(q));
  }
  if (const auto* e = dist.as_two_sided_exp()) {
    if (!(kappa < e->mu))
      throw std::domain_error("tilt_step_law: kappa >= mu");
    // Q-step density: rho^{-1} e^{kappa y} f_X(-y); two-sided exponential
    // again, with rates (mu - kappa) right and (lambda + kappa) left
    double right_mass = (1.0 - e->p) * e->mu / ((e->mu - kappa) * rho);
    return StepDistribution::unchecked_two_sided_exp(
        TwoSidedExpLaw{right_mass, e->mu - kappa, e->lambda + kappa});
  }
  throw std::invalid_argument(
      "tilt_step_law: tilted reg_var_exp_left law is not representable in "
      "the supported families");
}

}  // namespace renewal
