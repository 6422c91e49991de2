#include "renewal/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "renewal/asymptotics.hpp"
#include "renewal/config.hpp"
#include "renewal/errors.hpp"
#include "renewal/monte_carlo.hpp"
#include "renewal/renewal_table.hpp"
#include "renewal/step_distribution.hpp"
#include "renewal/tilt.hpp"

namespace renewal {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const ExtReal& v) {
  return v.finite() ? fmt(v.value()) : std::string("inf");
}

struct Args {
  std::string command;
  std::string config_path;
  std::string out_path;  // empty: fall back to output.path / stdout
  std::optional<long> seed;
  std::optional<int> workers;
};

Args parse_args(const std::vector<std::string>& argv) {
  Args a;
  if (argv.empty()) throw ConfigError("usage: <subcommand> --config PATH");
  a.command = argv[0];
  for (size_t i = 1; i < argv.size(); ++i) {
    const std::string& s = argv[i];
    auto need_value = [&]() -> const std::string& {
      if (i + 1 >= argv.size())
        throw ConfigError("flag '" + s + "' needs a value");
      return argv[++i];
    };
    if (s == "--config")
      a.config_path = need_value();
    else if (s == "--out")
      a.out_path = need_value();
    else if (s == "--seed")
      a.seed = std::stol(need_value());
    else if (s == "--workers")
      a.workers = (int)std::stol(need_value());
    else
      throw ConfigError("unknown flag '" + s + "'");
  }
  if (a.config_path.empty()) throw ConfigError("--config PATH is required");
  return a;
}

long require_seed(const Args& a, const Config& cfg) {
  if (a.seed) return *a.seed;
  if (cfg.has("mc.seed")) return cfg.get_int("mc.seed");
  throw ConfigError(
      "an MC command needs an explicit seed (mc.seed or --seed); there is "
      "no wall-clock default");
}

int workers_of(const Args& a, const Config& cfg) {
  int w = a.workers ? *a.workers : (int)cfg.get_int("mc.workers", 1);
  if (w < 1) throw ConfigError("workers must be >= 1");
  return w;
}

// A calibrated boundary family has g(theta_fin) = 1 up to solver noise, so
// the solver flags it ambiguous and regime dispatch refuses.  When the user
// knows the boundary value is exactly 1 (e.g. by construction), the config
// key tilt.assume_rho_one=1 resolves the ambiguity explicitly.
TiltParams solve_tilt_cfg(const StepDistribution& dist, const Config& cfg) {
  TiltParams tp = solve_tilt(dist);
  if (cfg.get_int("tilt.assume_rho_one", 0) != 0 && tp.ambiguous) {
    tp.ambiguous = false;
    tp.rho = 1.0;
  }
  return tp;
}

std::string cmd_tilt(const Config& cfg) {
  StepDistribution dist = dist_from_config(cfg);
  TiltParams tp = solve_tilt_cfg(dist, cfg);
  std::ostringstream out;
  out << "kappa,rho,g_prime_kappa,theta_fin,span,boundary,ambiguous\n"
      << fmt(tp.kappa) << ',' << fmt(tp.rho) << ',' << fmt(tp.g_prime_kappa)
      << ',' << fmt(tp.theta_fin) << ','
      << (tp.span ? fmt(*tp.span) : std::string("none")) << ','
      << (tp.boundary ? 1 : 0) << ',' << (tp.ambiguous ? 1 : 0) << '\n';
  return out.str();
}

std::string cmd_oracle(const Config& cfg) {
  StepDistribution dist = dist_from_config(cfg);
  TiltParams tp = solve_tilt_cfg(dist, cfg);
  std::vector<double> xs = grid_from_config(cfg);
  double tol = cfg.get_real("oracle.tol", 1e-10);
  std::string side = cfg.get("oracle.side", "auto");
  if (side == "auto")
    side = tp.kappa * xs.back() > 500.0 ? "q" : "p";
  if (side != "p" && side != "q")
    throw ConfigError("oracle.side must be p, q or auto");

  std::ostringstream out;
  out << "x,scaled_value,value,rel_bound,method\n";
  if (side == "p") {
    RenewalTable tab = left_tail_table(dist, xs.back(), tol, tp);
    for (double x : xs) {
      double s = left_tail_direct_scaled(tab, tp.kappa, x, tol);
      out << fmt(x) << ',' << fmt(s) << ','
          << fmt(s * std::exp(-tp.kappa * x)) << ',' << fmt(tol)
          << ",dp_direct\n";
    }
  } else {
    StepDistribution q = tilt_step_law(dist, tp);
    RenewalTable tab = q_side_table(q, tp, xs.back(), tol);
    for (double x : xs) {
      double s = left_tail_from_q_scaled(tab, tp, x, tol);
      out << fmt(x) << ',' << fmt(s) << ','
          << fmt(s * std::exp(-tp.kappa * x)) << ',' << fmt(tol)
          << ",dp_q\n";
    }
  }
  return out.str();
}

std::string cmd_simulate(const Args& a, const Config& cfg) {
  StepDistribution dist = dist_from_config(cfg);
  std::vector<double> xs = grid_from_config(cfg);
  long seed = require_seed(a, cfg);
  int workers = workers_of(a, cfg);
  long paths = cfg.get_int("mc.paths", 100000);
  std::string method = cfg.get("mc.method", "tilted");

  std::ostringstream out;
  out << "x,value,std_error,n_paths,method,seed\n";
  if (method == "naive") {
    long horizon = cfg.get_int("mc.horizon", 1000);
    for (double x : xs) {
      TailEstimate e = estimate_naive(dist, x, paths, horizon,
                                      (std::uint64_t)seed, workers);
      out << fmt(e.x) << ',' << fmt(e.value) << ',' << fmt(e.std_error)
          << ',' << e.n_paths << ',' << to_string(e.method) << ',' << seed
          << '\n';
    }
  } else if (method == "tilted") {
    TiltParams tp = solve_tilt_cfg(dist, cfg);
    double eps = cfg.get_real("mc.eps_trunc", 1e-4);
    auto es = estimate_tilted_grid(dist, tp, xs, paths, eps,
                                   (std::uint64_t)seed, workers);
    for (const auto& e : es)
      out << fmt(e.x) << ',' << fmt(e.value) << ',' << fmt(e.std_error)
          << ',' << e.n_paths << ',' << to_string(e.method) << ',' << seed
          << '\n';
  } else {
    throw ConfigError("mc.method must be naive or tilted");
  }
  return out.str();
}

std::string cmd_predict(const Config& cfg) {
  StepDistribution dist = dist_from_config(cfg);
  TiltParams tp = solve_tilt_cfg(dist, cfg);
  Regime regime = detect_regime(tp);
  std::vector<double> xs = grid_from_config(cfg);

  std::ostringstream out;
  out << "x,regime,predicted_scaled,predicted\n";
  for (double x : xs) {
    double scaled = 0.0;
    switch (regime) {
      case Regime::A_I:
        scaled = predict_nonarithmetic(tp);
        break;
      case Regime::A_II:
        scaled = predict_arithmetic(tp, *tp.span);
        break;
      case Regime::A_I_SRT: {
        SrtSpec spec{cfg.get_real("srt.alpha"), cfg.get_real("srt.c_L", 1.0)};
        scaled = predict_srt_scaled(
            tp, spec, dist.is_lattice() ? tilt_step_law(dist, tp) : dist, x);
        break;
      }
      case Regime::B:
        scaled = predict_local_subexp_scaled(dist, tp, x);
        break;
    }
    out << fmt(x) << ',' << to_string(regime) << ',' << fmt(scaled) << ','
        << fmt(scaled * std::exp(-tp.kappa * x)) << '\n';
  }
  return out.str();
}

std::string cmd_compare(const Args& a, const Config& cfg) {
  StepDistribution dist = dist_from_config(cfg);
  TiltParams tp = solve_tilt_cfg(dist, cfg);
  Regime regime = detect_regime(tp);
  std::vector<double> xs = grid_from_config(cfg);
  double tol = cfg.get_real("oracle.tol", 1e-10);

  // oracle column per x, always on the e^{kappa x} scale
  std::vector<double> oracle(xs.size()), bound(xs.size());
  std::vector<std::string> method(xs.size());

  const bool deep = tp.kappa * xs.back() > 500.0;
  if (regime == Regime::A_I) {
    // continuous law: the DP oracle does not apply; importance sampling is
    // the reference
    long seed = require_seed(a, cfg);
    int workers = workers_of(a, cfg);
    long paths = cfg.get_int("mc.paths", 100000);
    double eps = cfg.get_real("mc.eps_trunc", 1e-4);
    auto es = estimate_tilted_grid(dist, tp, xs, paths, eps,
                                   (std::uint64_t)seed, workers);
    for (size_t i = 0; i < xs.size(); ++i) {
      double sc = std::exp(tp.kappa * xs[i]);
      oracle[i] = es[i].value * sc;
      bound[i] = 3.0 * es[i].std_error * sc;
      method[i] = "mc_tilted";
    }
  } else if (regime == Regime::A_I_SRT || deep) {
    StepDistribution q = tilt_step_law(dist, tp);
    RenewalTable tab = q_side_table(q, tp, xs.back(), tol);
    for (size_t i = 0; i < xs.size(); ++i) {
      oracle[i] = left_tail_from_q_scaled(tab, tp, xs[i], tol);
      bound[i] = tol * oracle[i];
      method[i] = "dp_q";
    }
  } else {
    RenewalTable tab = left_tail_table(dist, xs.back(), tol, tp);
    for (size_t i = 0; i < xs.size(); ++i) {
      oracle[i] = left_tail_direct_scaled(tab, tp.kappa, xs[i], tol);
      bound[i] = tol * oracle[i];
      method[i] = "dp_direct";
    }
  }

  std::ostringstream out;
  out << "x,oracle_scaled,oracle_value,oracle_bound,predicted_scaled,"
         "predicted,ratio,method,regime,kappa,rho,g_prime_kappa,span\n";
  for (size_t i = 0; i < xs.size(); ++i) {
    double x = xs[i];
    double predicted = 0.0;
    switch (regime) {
      case Regime::A_I:
        predicted = predict_nonarithmetic(tp);
        break;
      case Regime::A_II:
        predicted = predict_arithmetic(tp, *tp.span);
        break;
      case Regime::A_I_SRT: {
        SrtSpec spec{cfg.get_real("srt.alpha"), cfg.get_real("srt.c_L", 1.0)};
        predicted = predict_srt_scaled(
            tp, spec, dist.is_lattice() ? tilt_step_law(dist, tp) : dist, x);
        break;
      }
      case Regime::B:
        predicted = predict_local_subexp_scaled(dist, tp, x);
        break;
    }
    double unscale = std::exp(-tp.kappa * x);
    out << fmt(x) << ',' << fmt(oracle[i]) << ','
        << fmt(oracle[i] * unscale) << ',' << fmt(bound[i]) << ','
        << fmt(predicted) << ',' << fmt(predicted * unscale) << ',';
    if (predicted > 0.0) out << fmt(oracle[i] / predicted);
    out << ',' << method[i] << ',' << to_string(regime) << ','
        << fmt(tp.kappa) << ',' << fmt(tp.rho) << ','
        << fmt(tp.g_prime_kappa) << ','
        << (tp.span ? fmt(*tp.span) : std::string("none")) << '\n';
  }
  return out.str();
}

std::string cmd_srtc(const Config& cfg) {
  StepDistribution dist = dist_from_config(cfg);
  TiltParams tp = solve_tilt_cfg(dist, cfg);
  StepDistribution q = tilt_step_law(dist, tp);
  std::vector<double> deltas = cfg.get_list("srtc.delta");
  std::vector<double> xs = cfg.get_list("srtc.x");

  std::ostringstream out;
  out << "delta,x,integral\n";
  int rows = 0;
  for (double delta : deltas)
    for (double x : xs) {
      if (!(delta > 0.0 && delta < 1.0) || !(x > 1.0 / delta)) continue;
      out << fmt(delta) << ',' << fmt(x) << ','
          << fmt(srtc_integral(q, delta, x)) << '\n';
      ++rows;
    }
  if (rows == 0)
    throw ConfigError(
        "srtc: no (delta, x) pair satisfies delta in (0,1), x > 1/delta");
  return out.str();
}

std::string cmd_calibrate(const Config& cfg) {
  if (cfg.get("dist.family") != "poly_geom_lattice" ||
      !cfg.has("dist.right_k"))
    throw ConfigError(
        "calibrate: needs dist.family=poly_geom_lattice with dist.right_k "
        "(residual right atom); the scanned parameter is dist.C");
  double d = cfg.get_real("dist.d", 1.0);
  double beta = cfg.get_real("dist.beta");
  double aa = cfg.get_real("dist.a");
  int right_k = (int)cfg.get_int("dist.right_k");
  double theta_star = cfg.get_real("calib.theta_star");
  double target = cfg.get_real("calib.target", 1.0);
  double lo = cfg.get_real("calib.lo", 1e-6);
  double hi = cfg.get_real("calib.hi", 0.999);
  double tol = cfg.get_real("calib.tol", 1e-12);

  StepDistribution dist = calibrate_boundary(
      [&](double C) {
        return StepDistribution::poly_geom_residual(d, C, beta, aa, right_k);
      },
      theta_star, target, tol, lo, hi);
  // the left tail pmf at -k is C k^{-beta} a^{-k}, so C is the k=1 mass
  // times a
  double C = lattice_mass_at(dist, -1) * aa;
  ExtReal g = laplace(dist, theta_star);

  std::ostringstream out;
  out << "C,theta_star,g,right_atom_mass\n"
      << fmt(C) << ',' << fmt(theta_star) << ',' << fmt(g) << ','
      << fmt(lattice_mass_at(dist, right_k)) << '\n';
  return out.str();
}

}  // namespace

int run(const std::vector<std::string>& args) {
  std::string csv;
  std::string out_path;
  try {
    Args a = parse_args(args);
    Config cfg = Config::parse_file(a.config_path);
    out_path = !a.out_path.empty() ? a.out_path : cfg.get("output.path", "");

    if (a.command == "tilt")
      csv = cmd_tilt(cfg);
    else if (a.command == "oracle")
      csv = cmd_oracle(cfg);
    else if (a.command == "simulate")
      csv = cmd_simulate(a, cfg);
    else if (a.command == "predict")
      csv = cmd_predict(cfg);
    else if (a.command == "compare")
      csv = cmd_compare(a, cfg);
    else if (a.command == "srtc")
      csv = cmd_srtc(cfg);
    else if (a.command == "calibrate")
      csv = cmd_calibrate(cfg);
    else
      throw ConfigError("unknown subcommand '" + a.command +
                        "'; expected one of tilt, oracle, simulate, predict, "
                        "compare, srtc, calibrate");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const CertificationError& e) {
    std::cerr << "certification error: " << e.what() << '\n';
    return 3;
  } catch (const RegimeError& e) {
    std::cerr << "regime error: " << e.what() << '\n';
    return 4;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }

  // written only on success
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) {
      std::cerr << "config error: cannot write '" << out_path << "'\n";
      return 2;
    }
    f << csv;
  }
  return 0;
}

}  // namespace renewal
