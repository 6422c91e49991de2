#include "renewal/step_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "renewal/errors.hpp"
#include "renewal/series.hpp"

namespace renewal {

namespace {

constexpr double kMassTol = 1e-12;
// tolerance for e^{theta d} * ratio landing on the convergence boundary;
// absorbs the ulp noise of exp(log(a)) round trips
constexpr double kBoundaryEps = 1e-13;

double clamp_ratio(double r) {
  if (r > 1.0 && r <= 1.0 + kBoundaryEps) return 1.0;
  return r;
}

void check_prob(double p, const char* what) {
  if (!(p >= 0.0) || !std::isfinite(p))
    throw ConfigError(std::string("negative or non-finite probability: ") +
                      what);
}

double tail_mass_from(const PowerGeomTail& t, long k0) {
  ExtReal s = power_geom_sum(t.beta, t.ratio, k0);
  return t.coef * s.value();
}

// survival of T = -X for the RegVarExpLeft family, t >= t0
double regvar_survival(const RegVarExpLeftLaw& r, double t) {
  return (r.alpha / r.kappa0) * r.c *
         std::exp(-(r.alpha + 1.0) * std::log(t) - r.kappa0 * t);
}

// density of T = -X, t >= t0
double regvar_density(const RegVarExpLeftLaw& r, double t) {
  return (r.alpha / r.kappa0) * r.c * std::exp(-r.kappa0 * t) *
         std::pow(t, -(r.alpha + 2.0)) * ((r.alpha + 1.0) + r.kappa0 * t);
}

void validate_lattice(const LatticeLaw& law, bool user_family) {
  if (!(law.d > 0.0)) throw ConfigError("lattice span unit d must be > 0");
  double total = 0.0;
  bool has_neg = false, has_pos = false;
  for (const auto& a : law.atoms) {
    check_prob(a.p, "lattice atom");
    total += a.p;
    if (a.p > 0.0) (a.k < 0 ? has_neg : has_pos) = true;
  }
  if (law.tail) {
    const auto& t = *law.tail;
    if (!(t.coef > 0.0) || !(t.beta > 1.0) || !(t.ratio > 0.0) ||
        t.ratio > 1.0)
      throw ConfigError("tail requires coef>0, beta>1, ratio in (0,1]");
    ExtReal s = power_geom_sum(t.beta, t.ratio);
    if (!s.finite()) throw ConfigError("tail mass diverges");
    total += t.coef * s.value();
    (t.side < 0 ? has_neg : has_pos) = true;
  }
  if (std::abs(total - 1.0) > kMassTol)
    throw ConfigError("lattice masses sum to " + std::to_string(total) +
                      ", not 1");
  if (user_family && (!has_neg || !has_pos))
    throw ConfigError("lattice law needs atoms of both signs");
}

}  // namespace

StepDistribution StepDistribution::lattice_pmf(double d,
                                               std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.k < b.k; });
  LatticeLaw law{d, std::move(atoms), std::nullopt};
  validate_lattice(law, true);
  return StepDistribution(std::move(law));
}

StepDistribution StepDistribution::poly_geom(double d, double C, double beta,
                                             double a,
                                             std::vector<Atom> right_atoms) {
  if (!(a > 1.0)) throw ConfigError("poly_geom requires a > 1");
  for (const auto& at : right_atoms)
    if (at.k < 1) throw ConfigError("poly_geom right atoms need k >= 1");
  std::sort(right_atoms.begin(), right_atoms.end(),
            [](const Atom& x, const Atom& y) { return x.k < y.k; });
  LatticeLaw law{d, std::move(right_atoms),
                 PowerGeomTail{-1, C, beta, 1.0 / a}};
  validate_lattice(law, true);
  return StepDistribution(std::move(law));
}

StepDistribution StepDistribution::poly_geom_residual(double d, double C,
                                                      double beta, double a,
                                                      int right_k) {
  if (!(a > 1.0)) throw ConfigError("poly_geom requires a > 1");
  PowerGeomTail tail{-1, C, beta, 1.0 / a};
  ExtReal s = power_geom_sum(beta, tail.ratio);
  if (!s.finite()) throw ConfigError("tail mass diverges");
  double residual = 1.0 - C * s.value();
  if (!(residual > 0.0))
    throw ConfigError("poly_geom left tail mass >= 1, no residual left");
  LatticeLaw law{d, {Atom{right_k, residual}}, tail};
  validate_lattice(law, true);
  return StepDistribution(std::move(law));
}

StepDistribution StepDistribution::two_sided_exponential(double p,
                                                         double lambda,
                                                         double mu) {
  if (!(p > 0.0 && p < 1.0) || !(lambda > 0.0) || !(mu > 0.0))
    throw ConfigError("two_sided_exponential requires p in (0,1), rates > 0");
  return StepDistribution(TwoSidedExpLaw{p, lambda, mu});
}

StepDistribution StepDistribution::reg_var_exp_left(double alpha, double c,
                                                    double kappa0, double t0,
                                                    double atom_pos) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(c > 0.0) || !(kappa0 > 0.0) ||
      !(t0 > 0.0) || !(atom_pos > 0.0))
    throw ConfigError("reg_var_exp_left: need alpha in (0,1), c,kappa0,t0,atom_pos > 0");
  RegVarExpLeftLaw law{alpha, c, kappa0, t0, atom_pos, 0.0};
  double left = regvar_survival(law, t0);
  if (!(left > 0.0 && left < 1.0))
    throw ConfigError("reg_var_exp_left: left tail mass must be in (0,1)");
  law.atom_mass = 1.0 - left;
  return StepDistribution(law);
}

StepDistribution StepDistribution::unchecked_lattice(LatticeLaw law) {
  validate_lattice(law, false);
  return StepDistribution(std::move(law));
}

StepDistribution StepDistribution::unchecked_two_sided_exp(TwoSidedExpLaw law) {
  return StepDistribution(law);
}

std::string StepDistribution::family_name() const {
  if (is_lattice()) {
    const auto& l = lattice();
    if (!l.tail) return "lattice_pmf";
    return l.tail->side < 0 ? "poly_geom_lattice" : "tilted_power_lattice";
  }
  if (as_two_sided_exp()) return "two_sided_exponential";
  return "reg_var_exp_left";
}

double lattice_mass_at(const StepDistribution& dist, int k) {
  const auto& l = dist.lattice();
  double m = 0.0;
  for (const auto& a : l.atoms)
    if (a.k == k) m += a.p;
  if (l.tail) {
    const auto& t = *l.tail;
    int j = t.side * k;
    if (j >= 1)
      m += t.coef * std::pow((double)j, -t.beta) * std::pow(t.ratio, (double)j);
  }
  return m;
}

double mass_in_window(const StepDistribution& dist, double a, double b) {
  if (!(a < b)) return 0.0;
  if (dist.is_lattice()) {
    const auto& l = dist.lattice();
    double m = 0.0;
    for (const auto& at : l.atoms) {
      double x = l.d * at.k;
      if (x > a && x <= b) m += at.p;
    }
    if (l.tail) {
      const auto& t = *l.tail;
      // tail atoms at side*d*k, k >= 1; find k-range with a < side*d*k <= b
      long klo = 1, khi = 0;  // inclusive k-range
      bool khi_inf = false;   // unbounded toward the tail's far end
      if (t.side > 0) {
        if (!std::isinf(a)) klo = (long)std::floor(a / l.d) + 1;
        if (std::isinf(b))
          khi_inf = true;
        else
          khi = (long)std::floor(b / l.d + 1e-12);
      } else {
        if (!std::isinf(b)) klo = (long)std::ceil(-b / l.d - 1e-12);
        if (std::isinf(a))
          khi_inf = true;
        else
          khi = (long)std::ceil(-a / l.d) - 1;
      }
      klo = std::max(klo, 1L);
      if (khi_inf) {
        m += tail_mass_from(t, klo);
      } else if (khi >= klo) {
        if (khi - klo < 4096) {
          long double s = 0.0L;
          for (long k = klo; k <= khi; ++k)
            s += std::pow((long double)k, (long double)-t.beta) *
                 std::pow((long double)t.ratio, (long double)k);
          m += t.coef * (double)s;
        } else {
          m += tail_mass_from(t, klo) - tail_mass_from(t, khi + 1);
        }
      }
    }
    return m;
  }
  if (const auto* e = dist.as_two_sided_exp()) {
    auto cdf = [&](double x) {
      if (x == std::numeric_limits<double>::infinity()) return 1.0;
      if (x == -std::numeric_limits<double>::infinity()) return 0.0;
      if (x < 0.0) return (1.0 - e->p) * std::exp(e->mu * x);
      return 1.0 - e->p * std::exp(-e->lambda * x);
    };
    return cdf(b) - cdf(a);
  }
  const auto& r = *dist.as_reg_var();
  double m = 0.0;
  if (r.atom_pos > a && r.atom_pos <= b) m += r.atom_mass;
  // continuous left part: T = -X in [max(t0,-b), max(t0,-a))
  double lo = std::max(r.t0, -b), hi = std::max(r.t0, -a);
  if (hi > lo) m += regvar_survival(r, lo) - regvar_survival(r, hi);
  return m;
}

double upper_tail(const StepDistribution& dist, double t) {
  return mass_in_window(dist, t, std::numeric_limits<double>::infinity());
}

ExtReal finiteness_abscissa(const StepDistribution& dist) {
  if (dist.is_lattice()) {
    const auto& l = dist.lattice();
    if (l.tail && l.tail->side < 0 && l.tail->ratio < 1.0)
      return -std::log(l.tail->ratio) / l.d;
    if (l.tail && l.tail->side < 0 && l.tail->ratio == 1.0) return 0.0;
    return ExtReal::infinity();
  }
  if (const auto* e = dist.as_two_sided_exp()) return e->mu;
  return dist.as_reg_var()->kappa0;
}

ExtReal laplace(const StepDistribution& dist, double theta) {
  if (theta == 0.0) {
    // total mass; exact 1 by the construction invariant
    return 1.0;
  }
  if (dist.is_lattice()) {
    const auto& l = dist.lattice();
    long double s = 0.0L;
    for (const auto& a : l.atoms) s += a.p * std::exp(-theta * l.d * a.k);
    if (l.tail) {
      const auto& t = *l.tail;
      double r = clamp_ratio(t.ratio * std::exp(-theta * l.d * t.side));
      ExtReal tail = power_geom_sum(t.beta, r);
      if (!tail.finite()) return ExtReal::infinity();
      s += t.coef * tail.value();
    }
    return (double)s;
  }
  if (const auto* e = dist.as_two_sided_exp()) {
    if (theta >= e->mu || theta <= -e->lambda) return ExtReal::infinity();
    return e->p * e->lambda / (e->lambda + theta) +
           (1.0 - e->p) * e->mu / (e->mu - theta);
  }
  const auto& r = *dist.as_reg_var();
  double atom = r.atom_mass * std::exp(-theta * r.atom_pos);
  if (theta > r.kappa0 + kBoundaryEps) return ExtReal::infinity();
  if (std::abs(theta - r.kappa0) <= kBoundaryEps) {
    // boundary value in closed form
    double left = (r.alpha / r.kappa0) * r.c *
                      std::pow(r.t0, -(r.alpha + 1.0)) +
                  r.c * std::pow(r.t0, -r.alpha);
    return atom + left;
  }
  double lam = r.kappa0 - theta;  // effective decay rate of the integrand
  auto f = [&](double t) {
    return std::exp(theta * t) * regvar_density(r, t);
  };
  auto bound = [&](double s2) { return f(s2) / lam; };
  // relative tolerance: an absolute near-epsilon target makes the adaptive
  // rule chase roundoff
  double left =
      integrate_to_infinity(f, bound, r.t0, 1e-13 * (1.0 + f(r.t0) / lam));
  return atom + left;
}

ExtReal laplace_deriv(const StepDistribution& dist, double theta) {
  ExtReal g = laplace(dist, theta);
  if (!g.finite())
    throw std::domain_error("laplace_deriv: g(theta) is infinite");
  if (dist.is_lattice()) {
    const auto& l = dist.lattice();
    long double s = 0.0L;
    for (const auto& a : l.atoms)
      s += -(l.d * a.k) * a.p * std::exp(-theta * l.d * a.k);
    if (l.tail) {
      const auto& t = *l.tail;
      double r = clamp_ratio(t.ratio * std::exp(-theta * l.d * t.side));
      ExtReal tail = power_geom_sum(t.beta - 1.0, r);
      if (!tail.finite()) {
        if (t.side < 0) return ExtReal::infinity();
        throw std::domain_error(
            "laplace_deriv: negative part diverges (right power tail)");
      }
      s += -(double)t.side * l.d * t.coef * tail.value();
    }
    return (double)s;
  }
  if (const auto* e = dist.as_two_sided_exp()) {
    return -e->p * e->lambda / ((e->lambda + theta) * (e->lambda + theta)) +
           (1.0 - e->p) * e->mu / ((e->mu - theta) * (e->mu - theta));
  }
  const auto& r = *dist.as_reg_var();
  double atom = -r.atom_pos * r.atom_mass * std::exp(-theta * r.atom_pos);
  if (std::abs(theta - r.kappa0) <= kBoundaryEps) {
    // integral of t e^{kappa0 t} f_T(t) ~ alpha c t^{-alpha}: diverges for
    // alpha < 1, which the family construction guarantees
    return ExtReal::infinity();
  }
  double lam = r.kappa0 - theta;
  auto f = [&](double t) {
    return t * std::exp(theta * t) * regvar_density(r, t);
  };
  auto bound = [&](double s2) {
    return f(s2) * (1.0 / lam + 1.0 / (lam * lam * s2));
  };
  return atom + integrate_to_infinity(f, bound, r.t0,
                                      1e-13 * (1.0 + f(r.t0) / lam));
}

std::optional<double> detect_span(const StepDistribution& dist) {
  if (!dist.is_lattice()) return std::nullopt;
  const auto& l = dist.lattice();
  long g = 0;
  for (const auto& a : l.atoms)
    if (a.p > 0.0 && a.k != 0) g = std::gcd(g, (long)std::abs(a.k));
  if (l.tail && l.tail->coef > 0.0) g = std::gcd(g, 1L);
  if (g == 0) return std::nullopt;  // all mass at the origin
  return l.d * (double)g;
}

ExtReal mean(const StepDistribution& dist) {
  if (dist.is_lattice()) {
    const auto& l = dist.lattice();
    long double s = 0.0L;
    for (const auto& a : l.atoms) s += (long double)(l.d * a.k) * a.p;
    if (l.tail) {
      const auto& t = *l.tail;
      ExtReal m = power_geom_sum(t.beta - 1.0, t.ratio);
      if (!m.finite()) {
        if (t.side > 0) return ExtReal::infinity();
        throw std::domain_error("mean: left tail mean diverges to -inf");
      }
      s += (long double)t.side * l.d * t.coef * m.value();
    }
    return (double)s;
  }
  if (const auto* e = dist.as_two_sided_exp())
    return e->p / e->lambda - (1.0 - e->p) / e->mu;
  const auto& r = *dist.as_reg_var();
  // E T = t0 S(t0) + int_{t0}^inf S(t) dt  (integration by parts)
  auto f = [&](double t) { return regvar_survival(r, t); };
  auto bound = [&](double s2) { return regvar_survival(r, s2) / r.kappa0; };
  double et =
      r.t0 * regvar_survival(r, r.t0) +
      integrate_to_infinity(f, bound, r.t0,
                            1e-13 * (1.0 + regvar_survival(r, r.t0)));
  return r.atom_pos * r.atom_mass - et;
}

double sample(const StepDistribution& dist, PathRng& rng) {
  if (dist.is_lattice()) {
    const auto& l = dist.lattice();
    double u = rng.uniform();
    double acc = 0.0;
    for (const auto& a : l.atoms) {
      acc += a.p;
      if (u <= acc) return l.d * a.k;
    }
    if (l.tail) {
      const auto& t = *l.tail;
      double rest = u - acc;
      long double c = 0.0L;
      for (long k = 1; k < 100000000L; ++k) {
        c += std::pow((long double)k, (long double)-t.beta) *
             std::pow((long double)t.ratio, (long double)k);
        if (rest <= t.coef * (double)c) return t.side * l.d * (double)k;
      }
    }
    // top atom absorbs the rounding sliver
    return l.d * (l.atoms.empty() ? 0 : l.atoms.back().k);
  }
  if (const auto* e = dist.as_two_sided_exp()) {
    double u = rng.uniform(), v = rng.uniform();
    if (u < e->p) return -std::log(v) / e->lambda;
    return std::log(v) / e->mu;
  }
  const auto& r = *dist.as_reg_var();
  double u = rng.uniform();
  if (u < r.atom_mass) return r.atom_pos;
  // invert the survival of T = -X: S(t) = target, monotone decreasing
  double target = 1.0 - u;  // in (0, S(t0))
  double lo = r.t0, hi = r.t0 + 1.0;
  while (regvar_survival(r, hi) > target) hi = r.t0 + 2.0 * (hi - r.t0);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (regvar_survival(r, mid) > target ? lo : hi) = mid;
    if (hi - lo < 1e-14 * hi) break;
  }
  return -0.5 * (lo + hi);
}

StepDistribution calibrate_boundary(
    const std::function<StepDistribution(double)>& make, double theta_star,
    double target, double tol, double param_lo, double param_hi) {
  auto eval = [&](double c) -> double {
    ExtReal g = laplace(make(c), theta_star);
    return g.finite() ? g.value() : std::numeric_limits<double>::infinity();
  };
  // bracket scan
  const int kScan = 128;
  double prev_c = param_lo, prev_h = eval(param_lo) - target;
  double lo = 0, hi = 0;
  bool found = false;
  for (int i = 1; i <= kScan; ++i) {
    double c = param_lo + (param_hi - param_lo) * i / kScan;
    double h = eval(c) - target;
    if ((prev_h <= 0.0) != (h <= 0.0)) {
      lo = prev_c;
      hi = c;
      found = true;
      break;
    }
    prev_c = c;
    prev_h = h;
  }
  if (!found)
    throw ConfigError(
        "calibrate_boundary: no sign change of g(theta*)-target over the "
        "parameter range");
  double flo = eval(lo) - target;
  for (int i = 0; i < 500; ++i) {
    double mid = 0.5 * (lo + hi);
    double h = eval(mid) - target;
    if (std::abs(h) <= tol) return make(mid);
    if ((h <= 0.0) == (flo <= 0.0)) {
      lo = mid;
      flo = h;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-16 * std::max(1.0, std::abs(hi))) break;
  }
  return make(0.5 * (lo + hi));
}

}  // namespace renewal
