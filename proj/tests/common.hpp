#pragma once

#include "renewal/step_distribution.hpp"

namespace testing_families {

using renewal::StepDistribution;

// p=0.7 up / 0.3 down nearest-neighbour walk
inline StepDistribution srw() {
  return StepDistribution::lattice_pmf(
      1.0, {renewal::Atom{-1, 0.3}, renewal::Atom{1, 0.7}});
}

// P(X=-k) = 0.5 k^{-4} 2^{-k}, residual right atom at +1; rho < 1 at the
// finiteness boundary kappa = ln 2
inline StepDistribution poly_geom4() {
  return StepDistribution::poly_geom_residual(1.0, 0.5, 4.0, 2.0, 1);
}

inline StepDistribution tse() {
  return StepDistribution::two_sided_exponential(0.6, 1.0, 2.0);
}

// coefficient calibrated so g(ln 2) = 1 with beta = 1.75: the tilted walk
// has a pure power tail with infinite mean (alpha = 0.75)
constexpr double kCalibratedC = 0.3008849822119337;
inline StepDistribution calibrated075() {
  return StepDistribution::poly_geom_residual(1.0, kCalibratedC, 1.75, 2.0, 1);
}

// high-precision series values, frozen from an independent evaluation
constexpr double kLn2 = 0.6931471805599453;
constexpr double kSrwKappa = 0.8472978603872034;     // ln(7/3)
constexpr double kPg4Rho = 0.9117918514370942;       // g(ln 2)
constexpr double kPg4GPrime = 0.2303982169982720;    // g'(ln 2)
constexpr double kPg4Mean = 0.4726538723590302;      // E X
constexpr double kPg4RightAtom = 0.7412604691630503; // P(X = +1)
constexpr double kCalibratedRightAtom = 0.8191347035649259;
constexpr double kGamma075Product = 1.1107207345395916;  // G(3/4) G(5/4)

}  // namespace testing_families
