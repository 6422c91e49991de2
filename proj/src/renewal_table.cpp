#include "renewal/renewal_table.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "renewal/errors.hpp"

namespace renewal {

namespace {

struct Certificate {
  double theta = 0.0;
  double lambda = 1.0;  // w * g(theta)
  double C() const { return 1.0 / (1.0 - lambda); }
};

// smallest w*g(theta) over a coarse grid; the Chebyshev bound
// sum_n w^n P(S_n <= -y) <= C e^{-theta y} drives every guard band
Certificate find_certificate(const StepDistribution& dist, double w,
                             double d) {
  Certificate best;
  for (int i = 0; i <= 120; ++i) {
    double theta = std::exp(-5.0 + 10.0 * i / 120.0) / d;
    ExtReal g = laplace(dist, theta);
    if (!g.finite()) continue;
    double lam = w * g.value();
    if (lam < best.lambda) best = Certificate{theta, lam};
  }
  if (best.lambda >= 1.0 - 1e-9)
    throw CertificationError(
        "renewal_table: no exponential certificate (w*g(theta) >= 1 "
        "everywhere)");
  return best;
}

// uniform bound on (weighted) expected visits to a single lattice point
double visit_bound(const StepDistribution& dist, double w, double d,
                   const Certificate& cert) {
  double v_weight = std::numeric_limits<double>::infinity();
  if (w < 1.0) v_weight = 1.0 / (1.0 - w);
  // escape construction: m consecutive up-steps of size k+ then never
  // returning; expected visits <= 2 / p+^m
  double v_escape = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 64; ++k) {
    double p = lattice_mass_at(dist, k);
    if (p <= 1e-9) continue;
    double m = std::ceil(std::log(2.0 * cert.C()) / (cert.theta * d * k));
    double v = 2.0 / std::pow(p, m);
    v_escape = std::min(v_escape, v);
  }
  double v = std::min(v_weight, v_escape);
  if (!std::isfinite(v))
    throw CertificationError("renewal_table: no visit bound available");
  return v;
}

}  // namespace

RenewalTable renewal_table(const StepDistribution& dist,
                           const TableOptions& opt) {
  if (!dist.is_lattice())
    throw std::invalid_argument("renewal_table: lattice laws only");
  if (!(opt.w > 0.0 && opt.w <= 1.0))
    throw std::invalid_argument("renewal_table: w must be in (0,1]");
  if (opt.k_lo > 0 || opt.k_hi < 0 || opt.k_lo >= opt.k_hi)
    throw std::invalid_argument(
        "renewal_table: window must contain 0 and be nonempty");
  const double d = dist.lattice().d;
  if (opt.w == 1.0) {
    ExtReal m = mean(dist);
    if (m.finite() && !(m.value() > 0.0))
      throw std::invalid_argument("renewal_table: w=1 needs E X > 0");
  }

  const Certificate cert = find_certificate(dist, opt.w, d);
  const double V = visit_bound(dist, opt.w, d, cert);
  const double tol4 = opt.tol / 4.0;

  const int GR = (int)std::ceil(
      (std::log(cert.C()) + std::log(1.0 / tol4)) / (cert.theta * d));
  const int GL = (int)std::ceil(
      (std::log(cert.C() * V / tol4)) / (cert.theta * d));

  const int lo = opt.k_lo - GL;       // internal window, lattice indices
  const int hi = opt.k_hi + GR;
  const int W = hi - lo + 1;
  const int origin = -lo;

  // step pmf over [-J, J]
  const int J = W - 1;
  std::vector<double> f(2 * J + 1, 0.0);
  int support = 0;
  for (int j = -J; j <= J; ++j) {
    double p = lattice_mass_at(dist, j);
    f[j + J] = p;
    if (p > 0.0) ++support;
  }
  const double miss_left =
      mass_in_window(dist, -std::numeric_limits<double>::infinity(),
                     d * (-J - 0.5));
  const double miss_right = upper_tail(dist, d * (J + 0.5));

  const bool use_fft = support > 600;

  double escaped_left = 0.0, escaped_right = 0.0, fft_err = 0.0;
  double weight = 1.0;  // w^n
  long n = 0;
  double live = 1.0;
  double stop_resid = 0.0;
  bool certified = false;

  Eigen::ArrayXd u = Eigen::ArrayXd::Zero(W);
  u[origin] = 1.0;

  if (!use_fft) {
    using ArrayXld = Eigen::Array<long double, Eigen::Dynamic, 1>;
    ArrayXld p = ArrayXld::Zero(W), acc = ArrayXld::Zero(W);
    acc[origin] = 1.0L;
    std::vector<std::pair<int, long double>> sf;
    for (int j = -J; j <= J; ++j)
      if (f[j + J] > 0.0) sf.emplace_back(j, (long double)f[j + J]);
    p[origin] = 1.0L;
    while (n < opt.max_steps) {
      // stopping checks on the state before the next convolution
      double wnext = weight * opt.w;
      double future_by_weight =
          opt.w < 1.0 ? wnext / (1.0 - opt.w)
                      : std::numeric_limits<double>::infinity();
      stop_resid = std::min(live * weight * V, future_by_weight);
      if (stop_resid < tol4) {
        certified = true;
        break;
      }
      ArrayXld np = ArrayXld::Zero(W);
      long double el = 0.0L, er = 0.0L;
      for (const auto& [j, fj] : sf) {
        if (j >= 0) {
          int len = W - j;
          np.segment(j, len) += fj * p.segment(0, len);
          er += fj * p.segment(len, j).sum();
        } else {
          int len = W + j;
          np.segment(0, len) += fj * p.segment(-j, len);
          el += fj * p.segment(0, -j).sum();
        }
      }
      el += (long double)miss_left * (long double)live;
      er += (long double)miss_right * (long double)live;
      p = np;
      live = (double)p.sum();
      weight = wnext;
      escaped_left += (double)el * weight;
      escaped_right += (double)er * weight;
      acc += (long double)weight * p;
      ++n;
    }
    for (int i = 0; i < W; ++i) u[i] = (double)acc[i];
  } else {
    // dense step laws: FFT convolution; adequate because the interesting
    // entries are then O(1) and the 1e-16-level absolute FFT noise is
    // tracked in fft_err
    int L = 1;
    while (L < W + 2 * J + 2) L <<= 1;
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> F(L);
    {
      std::vector<double> fbuf(L, 0.0);
      for (int j = -J; j <= J; ++j)
        fbuf[(j + L) % L] = f[j + J];
      fft.fwd(F, fbuf);
    }
    std::vector<double> pbuf(L, 0.0), rbuf(L, 0.0);
    pbuf[origin] = 1.0;
    std::vector<std::complex<double>> tmp(L);
    while (n < opt.max_steps) {
      double wnext = weight * opt.w;
      double future_by_weight =
          opt.w < 1.0 ? wnext / (1.0 - opt.w)
                      : std::numeric_limits<double>::infinity();
      stop_resid = std::min(live * weight * V, future_by_weight);
      if (stop_resid < tol4) {
        certified = true;
        break;
      }
      fft.fwd(tmp, pbuf);
      for (int i = 0; i < L; ++i) tmp[i] *= F[i];
      fft.inv(rbuf, tmp);
      double el = miss_left * live, er = miss_right * live;
      for (int i = 0; i < L; ++i) {
        if (rbuf[i] < 0.0) rbuf[i] = 0.0;
      }
      // window [0, W-1]; indices left of 0 live at the top of the circle
      for (int i = W; i <= W - 1 + J; ++i) er += rbuf[i];
      for (int i = L - J; i < L; ++i) el += rbuf[i];
      std::fill(pbuf.begin(), pbuf.end(), 0.0);
      double s = 0.0;
      for (int i = 0; i < W; ++i) {
        pbuf[i] = rbuf[i];
        s += rbuf[i];
      }
      live = s;
      weight = wnext;
      escaped_left += el * weight;
      escaped_right += er * weight;
      for (int i = 0; i < W; ++i) u[i] += weight * pbuf[i];
      fft_err += 2e-15 * weight;
      ++n;
    }
  }
  if (!certified)
    throw CertificationError(
        "renewal_table: step budget exhausted before the truncation bound "
        "closed (n=" +
        std::to_string(n) + ", resid=" + std::to_string(stop_resid) + ")");

  RenewalTable tab;
  tab.d = d;
  tab.w = opt.w;
  tab.k_lo = opt.k_lo;
  tab.k_hi = opt.k_hi;
  tab.u = u.segment(GL, opt.k_hi - opt.k_lo + 1);
  tab.n_steps = n;
  tab.theta_cert = cert.theta;
  tab.lambda_cert = cert.lambda;
  tab.visit_cap = V;
  tab.trunc_bound = escaped_left * V +
                    escaped_right * std::exp(-cert.theta * d * GR) * cert.C() +
                    stop_resid + fft_err;
  tab.below_window_bound =
      cert.C() * std::exp(cert.theta * d * (opt.k_lo - 1));
  return tab;
}

double window_mass(const RenewalTable& tab, double x, double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("window_mass: h < 0");
  // lattice indices with d k in (x, x+h]
  long klo = (long)std::floor(x / tab.d + 1e-9) + 1;
  long khi = (long)std::floor((x + h) / tab.d + 1e-9);
  if (khi < klo) return 0.0;
  if (klo < tab.k_lo || khi > tab.k_hi)
    throw std::out_of_range("window_mass: window outside the table");
  double s = 0.0;
  for (long k = klo; k <= khi; ++k) s += tab.at((int)k);
  return s;
}

namespace {

// largest lattice index with d k < -x
long left_tail_top_index(const RenewalTable& tab, double x) {
  return (long)std::floor(-x / tab.d - 1e-9);
}

}  // namespace

double left_tail_direct_scaled(const RenewalTable& tab, double kappa, double x,
                               double tol_rel) {
  if (x < 0.0) throw std::invalid_argument("left_tail: x must be >= 0");
  long kmax = left_tail_top_index(tab, x);
  if (kmax < tab.k_lo)
    throw std::out_of_range("left_tail_direct: x beyond the table window");
  long double s = 0.0L;
  const double scale = std::exp(kappa * x);
  for (long k = tab.k_lo; k <= kmax; ++k)
    s += (long double)(scale * tab.at((int)k));
  double err = scale * (tab.below_window_bound +
                        (double)(kmax - tab.k_lo + 1) * tab.trunc_bound);
  if (!((double)s > 0.0) || err > tol_rel * (double)s)
    throw CertificationError(
        "left_tail_direct: remainder bound exceeds tolerance share");
  return (double)s;
}

double left_tail_direct(const RenewalTable& tab, double x, double tol_rel) {
  return left_tail_direct_scaled(tab, 0.0, x, tol_rel);
}

double left_tail_from_q_scaled(const RenewalTable& tab_q, const TiltParams& tp,
                               double x, double tol_rel) {
  if (x < 0.0) throw std::invalid_argument("left_tail: x must be >= 0");
  const double d = tab_q.d, kappa = tp.kappa;
  long kmin = (long)std::floor(x / d + 1e-9) + 1;
  if (kmin < tab_q.k_lo)
    throw std::out_of_range("left_tail_from_q: x below the table window");
  if (kmin > tab_q.k_hi)
    throw std::out_of_range("left_tail_from_q: x beyond the table window");
  long double s = 0.0L;
  double werr = 0.0;
  for (long k = kmin; k <= tab_q.k_hi; ++k) {
    double e = std::exp(-kappa * (d * k - x));
    s += (long double)(e * tab_q.at((int)k));
    werr += e * tab_q.trunc_bound;
  }
  // beyond-window remainder: entries are bounded by a table-derived cap
  double cap = 0.0;
  for (long k = std::max((long)tab_q.k_lo, tab_q.k_hi - 50L); k <= tab_q.k_hi;
       ++k)
    cap = std::max(cap, tab_q.at((int)k));
  cap = 2.0 * cap + tab_q.trunc_bound;
  double beyond = cap * std::exp(-kappa * (d * (tab_q.k_hi + 1) - x)) /
                  (1.0 - std::exp(-kappa * d));
  double err = werr + beyond;
  if (!((double)s > 0.0) || err > tol_rel * (double)s)
    throw CertificationError(
        "left_tail_from_q: remainder bound exceeds tolerance share");
  return (double)s;
}

double left_tail_from_q(const RenewalTable& tab_q, const TiltParams& tp,
                        double x, double tol_rel) {
  return std::exp(-tp.kappa * x) *
         left_tail_from_q_scaled(tab_q, tp, x, tol_rel);
}

double identity_residual(const RenewalTable& tab_p, const RenewalTable& tab_q,
                         const TiltParams& tp, double x, double quad_tol) {
  const double kappa = tp.kappa, d = tab_q.d;
  double lhs = left_tail_direct_scaled(tab_p, kappa, x, 1e-4);
  long kmin = (long)std::floor(x / d + 1e-9) + 1;
  if (kmin < tab_q.k_lo || kmin > tab_q.k_hi)
    throw std::out_of_range("identity_residual: x outside the Q table");
  // H_Q((x, x+h]) is a lattice staircase in h; integrate e^{-kappa h}
  // segment by segment
  long double rhs = 0.0L;
  long double cum = 0.0L;
  for (long k = kmin; k <= tab_q.k_hi; ++k) {
    cum += (long double)tab_q.at((int)k);
    double h0 = d * k - x;
    double h1 = d * (k + 1) - x;
    rhs += cum * (long double)(std::exp(-kappa * h0) - std::exp(-kappa * h1));
  }
  // beyond the table the staircase keeps growing at most linearly; treat the
  // certified remainder the same way the Q-route does
  double cap = 0.0;
  for (long k = std::max((long)tab_q.k_lo, tab_q.k_hi - 50L); k <= tab_q.k_hi;
       ++k)
    cap = std::max(cap, tab_q.at((int)k));
  double tail_bound =
      ((double)cum + 2.0 * cap) * std::exp(-kappa * (d * (tab_q.k_hi + 1) - x));
  if (tail_bound / lhs > quad_tol)
    throw CertificationError(
        "identity_residual: Q-table window truncated too early");
  double resid = std::abs(lhs - (double)rhs) / lhs;
  return std::max(resid, tail_bound / lhs);
}

double wy09_ratio(const StepDistribution& q_dist, double rho, double x,
                  double T, double tol) {
  if (!(rho < 1.0)) throw std::domain_error("wy09_ratio: requires rho < 1");
  if (!q_dist.is_lattice())
    throw std::invalid_argument("wy09_ratio: lattice laws only");
  const double d = q_dist.lattice().d;
  double mu = mass_in_window(q_dist, x, x + T);
  if (mu <= 0.0)
    throw std::domain_error("wy09_ratio: mu(x+Delta] = 0");
  TableOptions opt;
  opt.w = rho;
  opt.k_lo = std::min(0, (int)std::floor(x / d) - 4);
  opt.k_hi = (int)std::ceil((x + T) / d) + 2;
  opt.tol = tol;
  RenewalTable eta = renewal_table(q_dist, opt);
  double num = window_mass(eta, x, T);
  return num * (1.0 - rho) * (1.0 - rho) / (rho * mu);
}

RenewalTable left_tail_table(const StepDistribution& dist, double x_max,
                             double tol_rel, const TiltParams& tp) {
  const double d = dist.lattice().d;
  // depth: the below-window Chebyshev remainder C e^{theta (k_lo - 1) d},
  // stated with the same certificate the table itself will report, must be
  // << tol_rel e^{-kappa x_max}
  const Certificate cert = find_certificate(dist, 1.0, d);
  // 1e9 headroom: defective laws can have scaled tails several orders of
  // magnitude below 1, and the remainder must stay below tol_rel times that
  double depth = (std::log(cert.C()) + std::log(1e9 / tol_rel) +
                  tp.kappa * x_max) / (cert.theta * d);
  TableOptions opt;
  opt.k_lo = -(int)(std::ceil(depth) + 2);
  opt.k_hi = 1;
  // per-entry tolerance scaled to the smallest entries we will certify;
  // the extra 1e-9 headroom covers defective families whose scaled tail
  // carries polynomial and (1-rho)^2 factors far below 1
  opt.tol = tol_rel * 1e-9 * std::exp(-tp.kappa * x_max) *
            std::exp(-0.2 * tp.kappa);
  opt.tol = std::max(opt.tol, 1e-300);
  return renewal_table(dist, opt);
}

RenewalTable q_side_table(const StepDistribution& q_dist, const TiltParams& tp,
                          double x_max, double tol) {
  const double d = q_dist.lattice().d;
  int margin = (int)std::ceil(std::log(1e16) / (tp.kappa * d)) + 2;
  TableOptions opt;
  opt.w = tp.rho;
  opt.k_lo = 0;
  opt.k_hi = (int)std::ceil(x_max / d) + margin;
  // for defective laws the deep entries can be far below 1 (a single jump
  // into (x, x+d] already contributes rho * mu there), so the per-entry
  // tolerance must track that scale or the certificates cannot close
  double entry_scale = 1.0;
  if (tp.rho < 1.0) {
    double one_jump = tp.rho * mass_in_window(q_dist, x_max, x_max + d);
    entry_scale = std::max(one_jump, 1e-100);
  }
  opt.tol = tol * std::min(1.0, entry_scale);
  return renewal_table(q_dist, opt);
}

}  // namespace renewal
