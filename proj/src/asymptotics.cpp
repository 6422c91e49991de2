#include "renewal/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "renewal/errors.hpp"
#include "renewal/series.hpp"

namespace renewal {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::A_I: return "(a-i)";
    case Regime::A_I_SRT: return "(a-i)-SRT";
    case Regime::A_II: return "(a-ii)";
    case Regime::B: return "(b)";
  }
  return "?";
}

Regime detect_regime(const TiltParams& tp) {
  if (tp.ambiguous)
    throw RegimeError(
        "regime dispatch: g(theta_fin) is indistinguishable from 1 at solver "
        "tolerance; regimes (a) and (b) cannot be separated");
  if (tp.rho < 1.0) return Regime::B;
  if (!tp.g_prime_kappa.finite()) return Regime::A_I_SRT;
  return tp.span ? Regime::A_II : Regime::A_I;
}

double predict_nonarithmetic(const TiltParams& tp) {
  if (tp.rho < 1.0)
    throw std::domain_error("predict_nonarithmetic: requires rho = 1");
  if (tp.span)
    throw std::domain_error(
        "predict_nonarithmetic: law is arithmetic; use predict_arithmetic");
  if (!tp.g_prime_kappa.finite()) return 0.0;  // c/inf = 0
  return 1.0 / (tp.kappa * tp.g_prime_kappa.value());
}

double predict_arithmetic(const TiltParams& tp, double d) {
  if (tp.rho < 1.0)
    throw std::domain_error("predict_arithmetic: requires rho = 1");
  if (!tp.span)
    throw std::domain_error("predict_arithmetic: law has no span");
  if (!(d > 0.0)) throw std::domain_error("predict_arithmetic: d > 0");
  if (!tp.g_prime_kappa.finite()) return 0.0;
  return d / (std::expm1(tp.kappa * d) * tp.g_prime_kappa.value());
}

double truncated_mean(const StepDistribution& q_dist, double x) {
  if (x < 0.0) throw std::domain_error("truncated_mean: x >= 0");
  if (x == 0.0) return 0.0;
  if (q_dist.is_lattice()) {
    // survival is constant on [dk, d(k+1)): exact staircase
    const double d = q_dist.lattice().d;
    long K = (long)std::floor(x / d + 1e-12);
    double m = 0.0;
    for (long k = 0; k < K; ++k) m += d * upper_tail(q_dist, k * d);
    double rest = x - K * d;
    if (rest > 1e-12 * d) m += rest * upper_tail(q_dist, K * d);
    return m;
  }
  if (const auto* e = q_dist.as_two_sided_exp()) {
    // right-side survival is p e^{-lambda t}
    return e->p * -std::expm1(-e->lambda * x) / e->lambda;
  }
  return truncated_mean(
      [&](double t) { return upper_tail(q_dist, t); }, x);
}

double truncated_mean(const std::function<double(double)>& survival,
                      double x) {
  if (x < 0.0) throw std::domain_error("truncated_mean: x >= 0");
  if (x == 0.0) return 0.0;
  return adaptive_simpson(survival, 0.0, x, 1e-10 * std::max(1.0, x), 48);
}

namespace {

double srt_scaled_value(const TiltParams& tp, const SrtSpec& spec,
                        const StepDistribution& q_dist, double x) {
  if (tp.rho < 1.0) throw std::domain_error("predict_srt: requires rho = 1");
  if (tp.g_prime_kappa.finite())
    throw std::domain_error(
        "predict_srt: g'(kappa) is finite; SRT branch does not apply");
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
    throw std::domain_error("predict_srt: alpha in (0,1)");
  double m = truncated_mean(q_dist, x);
  if (!(m > 0.0)) throw std::domain_error("predict_srt: m(x) = 0");
  double gg = std::tgamma(spec.alpha) * std::tgamma(2.0 - spec.alpha);
  return 1.0 / (gg * tp.kappa * m);
}

}  // namespace

double predict_srt(const TiltParams& tp, const SrtSpec& spec,
                   const StepDistribution& q_dist, double x) {
  return std::exp(-tp.kappa * x) * srt_scaled_value(tp, spec, q_dist, x);
}

double predict_srt_scaled(const TiltParams& tp, const SrtSpec& spec,
                          const StepDistribution& q_dist, double x) {
  return srt_scaled_value(tp, spec, q_dist, x);
}

namespace {

// E[e^{-kappa X} 1{x < -X <= x+1}], each lattice term evaluated in log
// space: the exponent kappa d k + ln P(X=-dk) stays moderate even when
// e^{kappa d k} alone would overflow
double local_numerator(const StepDistribution& dist, const TiltParams& tp,
                       double x) {
  const double kappa = tp.kappa;
  if (dist.is_lattice()) {
    const double d = dist.lattice().d;
    long k_lo = (long)std::floor(x / d + 1e-12) + 1;     // d k > x
    long k_hi = (long)std::floor((x + 1.0) / d + 1e-12); // d k <= x+1
    double s = 0.0;
    for (long k = k_lo; k <= k_hi; ++k) {
      double p = lattice_mass_at(dist, (int)-k);  // P(X = -d k)
      if (p > 0.0) s += std::exp(kappa * d * k + std::log(p));
    }
    return s;
  }
  // continuous: midpoint Stieltjes sum over (x, x+1]
  const int n = 4096;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double a = x + (double)i / n, b = x + (double)(i + 1) / n;
    double mass = mass_in_window(dist, -b, -a);  // P(a < -X <= b)
    if (mass > 0.0)
      s += std::exp(kappa * 0.5 * (a + b) + std::log(mass));
  }
  return s;
}

}  // namespace

double predict_local_subexp_scaled(const StepDistribution& dist,
                                   const TiltParams& tp, double x) {
  if (!(tp.rho < 1.0))
    throw std::domain_error("predict_local_subexp: requires rho < 1");
  double num = local_numerator(dist, tp, x);
  double q = 1.0 - tp.rho;
  return num / (tp.kappa * q * q);
}

double predict_local_subexp(const StepDistribution& dist,
                            const TiltParams& tp, double x) {
  return std::exp(-tp.kappa * x) *
         predict_local_subexp_scaled(dist, tp, x);
}

double predict_window(const TiltParams& tp, double delta) {
  if (tp.rho < 1.0)
    throw std::domain_error("predict_window: requires rho = 1");
  if (tp.span)
    throw std::domain_error("predict_window: law is arithmetic");
  if (delta < 0.0) throw std::domain_error("predict_window: delta >= 0");
  if (!tp.g_prime_kappa.finite()) return 0.0;
  return -std::expm1(-delta * tp.kappa) /
         (tp.kappa * tp.g_prime_kappa.value());
}

double srtc_integral(const StepDistribution& q_dist, double delta, double x) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("srtc_integral: delta in (0,1)");
  if (!(x > 1.0 / delta))
    throw std::domain_error("srtc_integral: requires x > 1/delta");
  const double z_hi = delta * x;
  if (z_hi <= 1.0) return 0.0;

  auto num = [&](double z) { return mass_in_window(q_dist, x - z, x); };
  auto bar = [&](double z) { return upper_tail(q_dist, z); };

  if (q_dist.is_lattice()) {
    // breakpoints of both step functions: z = d k and z = x - d k
    const double d = q_dist.lattice().d;
    std::vector<double> bp{1.0, z_hi};
    for (long k = (long)std::ceil(1.0 / d); k * d < z_hi; ++k)
      bp.push_back(k * d);
    for (double z = x - std::floor(x / d) * d; z < z_hi; z += d)
      if (z > 1.0) bp.push_back(z);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(),
                         [](double a, double b) { return b - a < 1e-12; }),
             bp.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < bp.size(); ++i) {
      double a = bp[i], b = bp[i + 1], zm = 0.5 * (a + b);
      double n = num(zm);
      if (n <= 0.0) continue;
      double fb = bar(zm);
      if (fb <= 0.0)
        throw std::domain_error(
            "srtc_integral: Fbar vanishes where the numerator does not");
      total += n / fb * (1.0 / a - 1.0 / b);
    }
    return total;
  }
  auto f = [&](double z) {
    double n = num(z);
    if (n <= 0.0) return 0.0;
    return n / (bar(z) * z * z);
  };
  double scale = std::max(f(1.0), f(0.5 * (1.0 + z_hi)));
  return adaptive_simpson(f, 1.0, z_hi,
                          1e-8 * std::max(scale, 1e-300) * (z_hi - 1.0), 44);
}

}  // namespace renewal
