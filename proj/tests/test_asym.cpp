#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "renewal/asymptotics.hpp"
#include "renewal/errors.hpp"

using namespace renewal;
using namespace testing_families;

namespace {

TiltParams manual_tp(double kappa, ExtReal gp, double rho,
                     std::optional<double> span) {
  TiltParams tp;
  tp.kappa = kappa;
  tp.g_prime_kappa = gp;
  tp.rho = rho;
  tp.span = span;
  return tp;
}

}  // namespace

TEST_CASE("non-arithmetic limit constant") {
  CHECK(predict_nonarithmetic(manual_tp(0.8, 10.0 / 27.0, 1.0, {})) ==
        doctest::Approx(3.375).epsilon(1e-12));
  CHECK(predict_nonarithmetic(manual_tp(1.0, 1.0, 1.0, {})) ==
        doctest::Approx(1.0));
  // c / infinity = 0 convention
  CHECK(predict_nonarithmetic(
            manual_tp(1.0, ExtReal::infinity(), 1.0, {})) == 0.0);
  CHECK_THROWS(predict_nonarithmetic(manual_tp(1.0, 1.0, 0.9, {})));
  CHECK_THROWS(predict_nonarithmetic(manual_tp(1.0, 1.0, 1.0, 1.0)));
}

TEST_CASE("arithmetic limit constant") {
  TiltParams tp = solve_tilt(srw());
  CHECK(predict_arithmetic(tp, 1.0) == doctest::Approx(1.875).epsilon(1e-9));
  // small-span consistency with the non-arithmetic constant
  double d = 1e-6;
  auto tps = manual_tp(1.0, 1.0, 1.0, d);
  CHECK(predict_arithmetic(tps, d) ==
        doctest::Approx(predict_nonarithmetic(manual_tp(1.0, 1.0, 1.0, {})))
            .epsilon(1e-5));
  CHECK(predict_arithmetic(manual_tp(1.0, ExtReal::infinity(), 1.0, 1.0),
                           1.0) == 0.0);
  CHECK_THROWS(predict_arithmetic(manual_tp(1.0, 1.0, 1.0, {}), 1.0));
}

TEST_CASE("truncated mean: idealized pure power survival") {
  auto survival = [](double t) {
    return t < 1.0 ? 1.0 : std::pow(t, -0.75);
  };
  CHECK(truncated_mean(survival, 16.0) == doctest::Approx(5.0).epsilon(1e-8));
  CHECK(truncated_mean(survival, 0.0) == 0.0);
}

TEST_CASE("truncated mean: exact lattice staircase") {
  auto d = srw();
  TiltParams tp = solve_tilt(d);
  StepDistribution q = tilt_step_law(d, tp);
  // Q(Y > t) = 0.7 on [0,1), 0 after
  CHECK(truncated_mean(q, 0.5) == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(truncated_mean(q, 2.0) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(truncated_mean(q, 50.0) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("truncated mean follows the regular-variation asymptote") {
  auto d = calibrated075();
  TiltParams tp = solve_tilt(d);
  StepDistribution q = tilt_step_law(d, tp);
  const double alpha = 0.75;
  const double c_L = kCalibratedC / alpha;
  double r3 = truncated_mean(q, 1e3) * (1.0 - alpha) /
              (c_L * std::pow(1e3, 1.0 - alpha));
  double r4 = truncated_mean(q, 1e4) * (1.0 - alpha) /
              (c_L * std::pow(1e4, 1.0 - alpha));
  CHECK(std::abs(r4 - 1.0) < std::abs(r3 - 1.0));
  CHECK(r4 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("gamma product identity") {
  for (double a : {0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9}) {
    double lhs = std::tgamma(a) * std::tgamma(2.0 - a);
    double rhs = (1.0 - a) * M_PI / std::sin(M_PI * a);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
  CHECK(std::tgamma(0.5) * std::tgamma(1.5) ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-12));
  CHECK(std::tgamma(0.75) * std::tgamma(1.25) ==
        doctest::Approx(kGamma075Product).epsilon(1e-12));
}

TEST_CASE("srt predictor plumbing and contracts") {
  auto d = calibrated075();
  TiltParams tp = solve_tilt(d);
  StepDistribution q = tilt_step_law(d, tp);
  SrtSpec spec{0.75, kCalibratedC / 0.75};
  double m200 = truncated_mean(q, 200.0);
  double expect = 1.0 / (kGamma075Product * tp.kappa * m200);
  CHECK(predict_srt_scaled(tp, spec, q, 200.0) ==
        doctest::Approx(expect).epsilon(1e-10));
  CHECK(predict_srt(tp, spec, q, 200.0) ==
        doctest::Approx(expect * std::exp(-tp.kappa * 200.0))
            .epsilon(1e-10));
  CHECK_THROWS(predict_srt_scaled(tp, spec, q, 0.0));  // m(0) = 0
  // finite g' rejects the SRT branch
  CHECK_THROWS(predict_srt_scaled(manual_tp(1.0, 1.0, 1.0, {}), spec, q,
                                  10.0));
  CHECK(!spec.requires_srtc_diagnostic());
  CHECK(SrtSpec{0.4, 1.0}.requires_srtc_diagnostic());
}

TEST_CASE("local subexponential predictor: exact lattice plug-in") {
  auto d = poly_geom4();
  TiltParams tp = solve_tilt(d);
  for (double n : {5.0, 20.0, 60.0}) {
    // the only atom of (n, n+1] is n+1; e^{kappa(n+1)} P(X=-(n+1)) =
    // 0.5 (n+1)^{-4}, so e^{kappa n} pred = 0.5 (n+1)^{-4}/(kappa (1-rho)^2)
    double q = 1.0 - tp.rho;
    double expect =
        0.5 * std::pow(n + 1.0, -4.0) / (tp.kappa * q * q);
    CHECK(predict_local_subexp_scaled(d, tp, n) ==
          doctest::Approx(expect).epsilon(1e-9));
    CHECK(predict_local_subexp(d, tp, n) ==
          doctest::Approx(expect * std::exp(-tp.kappa * n)).epsilon(1e-9));
  }
  CHECK_THROWS(predict_local_subexp(d, manual_tp(1.0, 1.0, 1.0, 1.0), 5.0));
  // empty window
  auto tp2 = tp;
  CHECK(predict_local_subexp_scaled(srw(), tp2, 5.5) ==
        0.0);  // no atom in (5.5, 6.5] below -5.5... window (5.5,6.5] has -6
}

TEST_CASE("window predictor") {
  TiltParams tp = manual_tp(0.8, 10.0 / 27.0, 1.0, {});
  CHECK(predict_window(tp, 0.0) == 0.0);
  CHECK(predict_window(tp, std::log(2.0) / 0.8) ==
        doctest::Approx(1.6875).epsilon(1e-12));
  CHECK(predict_window(tp, 1e3) == doctest::Approx(3.375).epsilon(1e-12));
  double prev = 0.0;
  for (double del : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    double v = predict_window(tp, del);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS(predict_window(manual_tp(1.0, 1.0, 1.0, 1.0), 1.0));
}

TEST_CASE("regime dispatch totality") {
  CHECK(detect_regime(solve_tilt(tse())) == Regime::A_I);
  CHECK(detect_regime(solve_tilt(srw())) == Regime::A_II);
  CHECK(detect_regime(solve_tilt(poly_geom4())) == Regime::B);
  TiltParams tp = solve_tilt(calibrated075());
  CHECK_THROWS_AS((void)detect_regime(tp), RegimeError);
  tp.ambiguous = false;  // boundary resolved by construction: g(ln 2) = 1
  CHECK(detect_regime(tp) == Regime::A_I_SRT);
  CHECK(std::string(to_string(Regime::A_I_SRT)) == "(a-i)-SRT");
}

TEST_CASE("srtc diagnostic integral") {
  auto d = srw();
  TiltParams tp = solve_tilt(d);
  StepDistribution q = tilt_step_law(d, tp);
  // bounded Q support, x far beyond it: numerator vanishes identically
  CHECK(srtc_integral(q, 0.5, 30.0) == 0.0);
  CHECK_THROWS(srtc_integral(q, 1.5, 30.0));
  CHECK_THROWS(srtc_integral(q, 0.5, 1.0));

  // pure power pmf ~ k^{-1.4} (alpha = 0.4): monotone in delta
  LatticeLaw law;
  law.d = 1.0;
  law.atoms.push_back(Atom{-1, 0.3});
  PowerGeomTail tail;
  tail.side = 1;
  tail.beta = 1.4;
  tail.ratio = 1.0;
  tail.coef = 0.7 / 3.1055472779775809;  // zeta(1.4)
  law.tail = tail;
  StepDistribution heavy = StepDistribution::unchecked_lattice(law);
  double i1 = srtc_integral(heavy, 0.1, 1e4);
  double i5 = srtc_integral(heavy, 0.5, 1e4);
  CHECK(i1 > 0.0);
  CHECK(i1 < i5);
}
