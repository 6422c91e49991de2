#include "renewal/series.hpp"

#include "renewal/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace renewal {

namespace {

// f(t) = t^{-beta} e^{-lambda t}
double fval(double beta, double lambda, double t) {
  return std::exp(-beta * std::log(t) - lambda * t);
}

// integral_K^inf t^{-beta} e^{-lambda t} dt, lambda >= 0, beta > 1 when
// lambda == 0.
double tail_integral(double beta, double lambda, double K) {
  if (lambda == 0.0) return std::pow(K, 1.0 - beta) / (beta - 1.0);
  // substitute t = K + s; integrand decays at rate >= lambda
  auto f = [&](double s) { return fval(beta, lambda, K + s); };
  auto bound = [&](double s) { return fval(beta, lambda, K + s) / lambda; };
  return integrate_to_infinity(f, bound, 0.0, 1e-13 * fval(beta, lambda, K) /
                                                   std::max(lambda, 1e-6));
}

}  // namespace

ExtReal power_geom_sum(double beta, double r, long k0) {
  if (r < 0.0 || k0 < 1) throw std::invalid_argument("power_geom_sum: bad args");
  if (r > 1.0) return ExtReal::infinity();
  if (r == 0.0) return 0.0;
  if (r == 1.0 && beta <= 1.0) return ExtReal::infinity();

  const double lambda = -std::log(r);  // 0 when r == 1
  const long K = k0 + 4000;
  long double s = 0.0L;
  // fast path: geometric truncation once terms are negligible
  long double rk = std::pow((long double)r, (long double)k0);
  for (long k = k0; k < K; ++k) {
    long double term = std::pow((long double)k, (long double)-beta) * rk;
    s += term;
    rk *= r;
    if (r < 1.0 && term > 0.0 && term / (1.0 - r) < 1e-18L * s) {
      return (double)s + (double)(term * r / (1.0L - r));
    }
  }
  // Euler-Maclaurin tail for sum_{k>=K} k^{-beta} e^{-lambda k}:
  // int + f/2 - f'/12 + f'''/720; remainder O(f^(5)) ~ K^{-beta-5}
  const double fK = fval(beta, lambda, K);
  const double g = -(beta / K + lambda);  // (ln f)'(K)
  const double fpK = g * fK;
  const double b2 = beta / ((double)K * K), b3 = beta / ((double)K * K * K);
  const double fpppK = (g * g * g + 3.0 * g * b2 - 2.0 * b3) * fK;
  double tail = tail_integral(beta, lambda, (double)K) + 0.5 * fK -
                fpK / 12.0 + fpppK / 720.0;
  return (double)s + tail;
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  struct Rec {
    const std::function<double(double)>& f;
    double operator()(double a, double fa, double b, double fb, double m,
                      double fm, double whole, double tol, int depth) const {
      double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      double flm = f(lm), frm = f(rm);
      double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
      return (*this)(a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
             (*this)(m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
    }
  } rec{f};
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double integrate_to_infinity(const std::function<double(double)>& f,
                             const std::function<double(double)>& tail_bound,
                             double a, double tol) {
  double total = 0.0;
  double left = a;
  double width = 1.0;
  for (int i = 0; i < 200; ++i) {
    double right = left + width;
    total += adaptive_simpson(f, left, right, tol * 0.01, 40);
    left = right;
    width *= 2.0;
    if (tail_bound(left) < tol) return total;
  }
  throw CertificationError("integrate_to_infinity: tail bound did not close");
}

}  // namespace renewal
