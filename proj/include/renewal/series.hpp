#pragma once

#include <functional>

#include "renewal/extended_real.hpp"

namespace renewal {

// sum_{k>=k0} k^{-beta} r^k for r in [0,1], beta real, k0 >= 1.
// Returns +inf when the series diverges (r == 1 and beta <= 1).
// Remainder of the returned value is below ~1e-15 relative: direct
// summation up to an internal cutoff, Euler-Maclaurin beyond it.
ExtReal power_geom_sum(double beta, double r, long k0 = 1);

// Adaptive Simpson quadrature of f on [a,b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 40);

// integral_{a}^{inf} f(t) dt for eventually-decreasing positive f with a
// caller-supplied bound tail(s) >= integral_{s}^{inf} f; expands the finite
// upper limit until the bound is below tol.
double integrate_to_infinity(const std::function<double(double)>& f,
                             const std::function<double(double)>& tail_bound,
                             double a, double tol);

}  // namespace renewal
