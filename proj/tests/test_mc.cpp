#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "renewal/errors.hpp"
#include "renewal/monte_carlo.hpp"

using namespace renewal;
using namespace testing_families;

TEST_CASE("naive estimator at x = 0 recovers the closed form") {
  TailEstimate e = estimate_naive(srw(), 0.0, 100000, 1000, 42);
  CHECK(e.std_error > 0.0);
  CHECK(std::abs(e.value - 1.875) < 3.0 * e.std_error);
  CHECK(e.n_paths == 100000);
  CHECK(std::string(to_string(e.method)) == "NAIVE");
}

TEST_CASE("naive estimator is deterministic across worker counts") {
  auto a = estimate_naive(srw(), 0.0, 50000, 500, 7, 1);
  auto b = estimate_naive(srw(), 0.0, 50000, 500, 7, 4);
  auto c = estimate_naive(srw(), 0.0, 50000, 500, 7, 8);
  CHECK(a.value == b.value);
  CHECK(a.value == c.value);
  CHECK(a.std_error == b.std_error);
  CHECK(a.std_error == c.std_error);
}

TEST_CASE("tilted estimator hits the rare-event closed form at x = 20") {
  auto d = srw();
  TiltParams tp = solve_tilt(d);
  TailEstimate e = estimate_tilted(d, tp, 20.0, 100000, 1e-4, 11);
  double truth = 1.875 * std::pow(3.0 / 7.0, 20);
  CHECK(std::abs(e.value - truth) < 3.0 * e.std_error + 2e-4 * truth);
  CHECK(e.std_error / e.value < 0.05);
}

TEST_CASE("tilted and naive agree at an easy level") {
  auto d = srw();
  TiltParams tp = solve_tilt(d);
  TailEstimate tn = estimate_naive(d, 0.0, 100000, 1000, 3);
  TailEstimate tt = estimate_tilted(d, tp, 0.0, 100000, 1e-5, 3);
  double sigma = std::hypot(tn.std_error, tt.std_error);
  CHECK(std::abs(tn.value - tt.value) < 3.0 * sigma + 1e-4 * tn.value);
}

TEST_CASE("variance dominance of the tilted estimator") {
  auto d = srw();
  TiltParams tp = solve_tilt(d);
  TailEstimate e = estimate_tilted(d, tp, 20.0, 100000, 1e-4, 5);
  double p_hat = 1.875 * std::pow(3.0 / 7.0, 20);
  double naive_stderr = std::sqrt(p_hat / 100000.0);
  CHECK(naive_stderr / e.std_error > 100.0);
}

TEST_CASE("common-random-number grid is pathwise monotone in x") {
  auto d = srw();
  TiltParams tp = solve_tilt(d);
  auto es = estimate_tilted_grid(d, tp, {0.0, 2.0, 5.0, 10.0, 20.0}, 20000,
                                 1e-4, 99);
  for (size_t i = 1; i < es.size(); ++i)
    CHECK(es[i].value <= es[i - 1].value);
}

TEST_CASE("tilted estimator on the two-sided exponential walk") {
  auto d = tse();
  TiltParams tp = solve_tilt(d);
  TailEstimate e = estimate_tilted(d, tp, 10.0, 100000, 1e-4, 21);
  double scaled = std::exp(0.8 * 10.0) * e.value;
  double sig = std::exp(0.8 * 10.0) * e.std_error;
  CHECK(std::abs(scaled - 3.375) < 3.0 * sig + 0.02 * 3.375);
}

TEST_CASE("tilted estimator determinism across workers (continuous law)") {
  auto d = tse();
  TiltParams tp = solve_tilt(d);
  auto a = estimate_tilted(d, tp, 5.0, 40000, 1e-4, 77, 1);
  auto b = estimate_tilted(d, tp, 5.0, 40000, 1e-4, 77, 4);
  auto c = estimate_tilted(d, tp, 5.0, 40000, 1e-4, 77, 8);
  CHECK(a.value == b.value);
  CHECK(a.value == c.value);
  CHECK(a.std_error == c.std_error);
}

TEST_CASE("step budget exhaustion is an error, not a biased estimate") {
  auto d = srw();
  TiltParams tp = solve_tilt(d);
  CHECK_THROWS_AS(
      (void)estimate_tilted(d, tp, 30.0, 1000, 1e-4, 1, 1, /*budget=*/3),
      CertificationError);
}

TEST_CASE("precondition checks") {
  auto d = srw();
  TiltParams tp = solve_tilt(d);
  CHECK_THROWS(estimate_naive(d, -1.0, 10, 10, 1));
  CHECK_THROWS(estimate_tilted(d, tp, 1.0, 10, 2.0, 1));
  CHECK_THROWS(estimate_tilted(d, tp, 1.0, 0, 1e-4, 1));
}
