#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "renewal/extended_real.hpp"
#include "renewal/philox.hpp"

namespace renewal {

struct Atom {
  int k = 0;      // lattice index; the atom sits at d*k
  double p = 0.0;
};

// Power-geometric lattice tail: P(X = side*d*k) = coef * k^{-beta} * ratio^k
// for k >= 1.  ratio == 1 is allowed when beta > 1 (pure power tail).
struct PowerGeomTail {
  int side = -1;  // -1: left tail, +1: right tail
  double coef = 0.0;
  double beta = 2.0;
  double ratio = 0.5;
};

struct LatticeLaw {
  double d = 1.0;
  std::vector<Atom> atoms;  // sorted by k, disjoint from the tail's indices
  std::optional<PowerGeomTail> tail;
};

// density p*lambda*e^{-lambda x} for x>0 plus (1-p)*mu*e^{mu x} for x<0
struct TwoSidedExpLaw {
  double p = 0.5;
  double lambda = 1.0;
  double mu = 1.0;
};

// left tail P(-X > t) = (alpha/kappa0) * c * t^{-(alpha+1)} e^{-kappa0 t}
// for t >= t0, plus a single right atom carrying the residual mass
struct RegVarExpLeftLaw {
  double alpha = 0.75;
  double c = 1.0;
  double kappa0 = 1.0;
  double t0 = 1.0;
  double atom_pos = 1.0;
  double atom_mass = 0.0;  // derived: 1 - left mass
};

class StepDistribution {
 public:
  static StepDistribution lattice_pmf(double d, std::vector<Atom> atoms);
  // left tail C k^{-beta} a^{-k}, explicit right atoms
  static StepDistribution poly_geom(double d, double C, double beta, double a,
                                    std::vector<Atom> right_atoms);
  // same, with one right atom at +right_k absorbing the residual mass
  static StepDistribution poly_geom_residual(double d, double C, double beta,
                                             double a, int right_k);
  static StepDistribution two_sided_exponential(double p, double lambda,
                                                double mu);
  static StepDistribution reg_var_exp_left(double alpha, double c,
                                           double kappa0, double t0,
                                           double atom_pos);

  // no validity checks; used for tilted laws, which may e.g. have
  // negative mean
  static StepDistribution unchecked_lattice(LatticeLaw law);
  static StepDistribution unchecked_two_sided_exp(TwoSidedExpLaw law);

  bool is_lattice() const {
    return std::holds_alternative<LatticeLaw>(law_);
  }
  const LatticeLaw& lattice() const { return std::get<LatticeLaw>(law_); }
  const TwoSidedExpLaw* as_two_sided_exp() const {
    return std::get_if<TwoSidedExpLaw>(&law_);
  }
  const RegVarExpLeftLaw* as_reg_var() const {
    return std::get_if<RegVarExpLeftLaw>(&law_);
  }

  std::string family_name() const;

 private:
  explicit StepDistribution(
      std::variant<LatticeLaw, TwoSidedExpLaw, RegVarExpLeftLaw> law)
      : law_(std::move(law)) {}
  std::variant<LatticeLaw, TwoSidedExpLaw, RegVarExpLeftLaw> law_;
};

// P(a < X <= b); a may be -inf, b may be +inf
double mass_in_window(const StepDistribution& dist, double a, double b);

// P(X > t)
double upper_tail(const StepDistribution& dist, double t);

// g(theta) = E e^{-theta X}; +inf exactly when the series/integral diverges
ExtReal laplace(const StepDistribution& dist, double theta);

// g'(theta) = E[-X e^{-theta X}] as an extended real; +inf when the positive
// part diverges.  Rejects theta with g(theta) = inf.
ExtReal laplace_deriv(const StepDistribution& dist, double theta);

// sup{theta >= 0 : g(theta) < inf}
ExtReal finiteness_abscissa(const StepDistribution& dist);

// lattice span d*gcd(|k|), or nullopt for continuous laws
std::optional<double> detect_span(const StepDistribution& dist);

ExtReal mean(const StepDistribution& dist);

// one variate with the law of X
double sample(const StepDistribution& dist, PathRng& rng);

// lattice pmf at index k (exact, includes tail); lattice laws only
double lattice_mass_at(const StepDistribution& dist, int k);

// Bisection on one free scalar parameter: finds the instance with
// g(theta_star) = target within tol.  Scans [param_lo, param_hi] for a
// bracket first; throws ConfigError when no bracket exists.
StepDistribution calibrate_boundary(
    const std::function<StepDistribution(double)>& make, double theta_star,
    double target, double tol, double param_lo, double param_hi);

}  // namespace renewal
