// wsmarket: three-stage equilibrium solver for the integrated TV-white-space
// spectrum and information market.  Subcommands mirror the solver stages:
//   equilibrium  Stage III user dynamics at fixed prices
//   compete      Stage II price competition at a fixed commission
//   bargain      Stage I Nash bargaining over the commission
//   benchmarks   coordination / pure-info / third-party / sensing schemes
//   sweep        parameter sweeps with CSV output
//   validate     oracle cross-checks (exit 3 on violation)
//   mc-oracle    Monte Carlo interference-model utility curves
//
// Exit codes: 0 ok, 1 usage/config error, 2 solver non-convergence,
// 3 validation failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wsm/bargaining.hpp"
#include "wsm/benchmarks.hpp"
#include "wsm/competition.hpp"
#include "wsm/config.hpp"
#include "wsm/dynamics.hpp"
#include "wsm/errors.hpp"
#include "wsm/model.hpp"
#include "wsm/params.hpp"
#include "wsm/sweep.hpp"
#include "wsm/validation.hpp"

namespace {

using namespace wsm;

struct OutputTarget {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = &std::cout;

  void open(const std::string& path) {
    if (path.empty() || path == "-") return;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw std::runtime_error("cannot open output file: " + path);
    stream = file.get();
  }
  std::ostream& out() { return *stream; }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CommissionScheme parse_scheme_value(const std::string& text,
                                    const ModelParams& params) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error(
        "scheme must look like rss:<delta> or wps:<w>");
  const std::string kind = text.substr(0, colon);
  const double value = std::stod(text.substr(colon + 1));
  CommissionScheme scheme;
  if (kind == "rss")
    scheme = CommissionScheme::rss(value);
  else if (kind == "wps")
    scheme = CommissionScheme::wps(value);
  else
    throw std::runtime_error("scheme kind must be rss or wps");
  scheme.require_valid(params);
  return scheme;
}

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_equilibrium(const Config& cfg, double p_l, double p_a, double tol,
                    bool trace, OutputTarget& target) {
  const PriceProfile prices{p_l, p_a};
  if (trace) {
    const DynamicsTrajectory traj =
        iterate_dynamics({0.0, 0.0}, prices, cfg.params, tol > 0 ? tol : 1e-10);
    target.out() << "iter,eta_l,eta_a,residual\n";
    for (size_t i = 0; i < traj.points.size(); ++i) {
      double res = 0.0;
      if (i + 1 < traj.points.size())
        res = std::max(
            std::abs(traj.points[i + 1].eta_l - traj.points[i].eta_l),
            std::abs(traj.points[i + 1].eta_a - traj.points[i].eta_a));
      else
        res = traj.residual;
      target.out() << i << ',' << fmt(traj.points[i].eta_l) << ','
                   << fmt(traj.points[i].eta_a) << ',' << fmt(res) << '\n';
    }
    if (!traj.converged) return 2;
    return 0;
  }
  const StageIIIEquilibrium eq =
      solve_equilibrium(prices, cfg.params, tol > 0 ? tol : 1e-12);
  const double cs = consumer_surplus(eq.shares, prices, cfg.params);
  const UniquenessCertificate cert =
      uniqueness_certificate(prices, cfg.params, 1e-2);
  target.out() << "eta_l=" << fmt(eq.shares.eta_l) << "\n"
               << "eta_a=" << fmt(eq.shares.eta_a) << "\n"
               << "branch="
               << (eq.branch == EquilibriumBranch::advanced_active
                       ? "advanced_active"
                       : "advanced_empty")
               << "\n"
               << "fixed_point_residual=" << fmt(eq.fixed_point_residual)
               << "\n"
               << "consumer_surplus=" << fmt(cs) << "\n"
               << "certificate_holds=" << (cert.holds ? 1 : 0) << "\n"
               << "certificate_kappa=" << fmt(cert.kappa) << "\n"
               << "certificate_lhs_max=" << fmt(cert.lhs_max) << "\n";
  return 0;
}

int cmd_compete(const Config& cfg, const std::string& scheme_text, bool trace,
                OutputTarget& target) {
  const CommissionScheme scheme = parse_scheme_value(scheme_text, cfg.params);
  Stage2Options opts;
  std::vector<MarketShare> rounds;
  if (trace) opts.trace = &rounds;
  const StageIIReport rep = solve_stage2(scheme, cfg.params, opts);
  if (trace) {
    target.out() << "round,eta_l,eta_a\n";
    for (size_t i = 0; i < rounds.size(); ++i)
      target.out() << (i + 1) << ',' << fmt(rounds[i].eta_l) << ','
                   << fmt(rounds[i].eta_a) << '\n';
    return 0;
  }
  target.out() << "scheme=" << to_string(scheme) << "\n"
               << "eta_l=" << fmt(rep.shares.eta_l) << "\n"
               << "eta_a=" << fmt(rep.shares.eta_a) << "\n"
               << "p_l=" << fmt(rep.prices.p_l) << "\n"
               << "p_a=" << fmt(rep.prices.p_a) << "\n"
               << "u_licensee=" << fmt(rep.payoffs.u_licensee) << "\n"
               << "u_database=" << fmt(rep.payoffs.u_database) << "\n"
               << "rounds=" << rep.rounds << "\n"
               << "foc_residual_licensee=" << fmt(rep.foc_residuals[0]) << "\n"
               << "foc_residual_database=" << fmt(rep.foc_residuals[1]) << "\n"
               << "dominant_diagonal_holds="
               << (rep.dominant_diagonal_holds ? 1 : 0) << "\n";
  return 0;
}

int cmd_bargain(const Config& cfg, const std::string& kind_text,
                int grid_steps, OutputTarget& target) {
  SchemeKind kind;
  if (kind_text == "rss")
    kind = SchemeKind::revenue_share;
  else if (kind_text == "wps")
    kind = SchemeKind::wholesale;
  else
    throw std::runtime_error("--scheme must be rss or wps");
  BargainingConfig bc = cfg.bargaining;
  if (grid_steps > 0) bc.grid_steps = grid_steps;
  const EquilibriumReport rep = run_three_stage(kind, cfg.params, bc);
  target.out() << "scheme,delta_or_w,feasible,eta_l,eta_a,p_l,p_a,u_sl,u_db,"
                  "network_profit,consumer_surplus,social_welfare,"
                  "nash_product,u_db_disagreement\n";
  target.out() << to_string(kind) << ',' << fmt(rep.scheme.value) << ','
               << (rep.feasible ? 1 : 0) << ',' << fmt(rep.shares.eta_l) << ','
               << fmt(rep.shares.eta_a) << ',' << fmt(rep.prices.p_l) << ','
               << fmt(rep.prices.p_a) << ',' << fmt(rep.payoffs.u_licensee)
               << ',' << fmt(rep.payoffs.u_database) << ','
               << fmt(rep.network_profit) << ',' << fmt(rep.consumer_surplus)
               << ',' << fmt(rep.social_welfare) << ','
               << fmt(rep.nash_product) << ','
               << fmt(rep.disagreement.u_database) << '\n';
  return 0;
}

int cmd_benchmarks(const Config& cfg, double g1, double c_s,
                   OutputTarget& target) {
  const SensingParams sensing{g1, c_s};
  std::vector<BenchmarkReport> reps;
  reps.push_back(coordination_optimum(cfg.params));
  reps.push_back(pure_information_market(
      cfg.params, cfg.bargaining.cost_adjusted_disagreement));
  reps.push_back(third_party_scheme(cfg.params));
  reps.push_back(sensing_market_equilibrium(cfg.params, sensing,
                                            SchemeKind::revenue_share,
                                            cfg.bargaining));
  reps.push_back(sensing_market_equilibrium(cfg.params, sensing,
                                            SchemeKind::wholesale,
                                            cfg.bargaining));
  target.out() << "scheme,eta_l,eta_a,p_l,p_a,u_licensee,u_database,"
                  "network_profit,consumer_surplus,social_welfare,"
                  "energy_cost,delta_or_w\n";
  for (const BenchmarkReport& r : reps)
    target.out() << r.scheme_name << ',' << fmt(r.shares.eta_l) << ','
                 << fmt(r.shares.eta_a) << ',' << fmt(r.prices.p_l) << ','
                 << fmt(r.prices.p_a) << ',' << fmt(r.u_licensee) << ','
                 << fmt(r.u_database) << ',' << fmt(r.network_profit) << ','
                 << fmt(r.consumer_surplus) << ',' << fmt(r.social_welfare)
                 << ',' << fmt(r.energy_cost) << ','
                 << (r.bargained ? fmt(r.commission.value) : std::string())
                 << '\n';
  return 0;
}

int cmd_sweep(const Config& cfg, const SweepSpec& spec, OutputTarget& target) {
  const std::vector<SweepRow> rows = run_sweep(spec, cfg.params,
                                               cfg.bargaining);
  write_sweep_csv(target.out(), rows, spec.columns);
  for (const SweepRow& row : rows)
    if (!row.error.empty()) return 2;
  return 0;
}

int cmd_mc_oracle(const InterferenceModel& model, const std::string& curve,
                  double eta_l, int points, OutputTarget& target) {
  target.out() << "share,mean_rate,stderr\n";
  for (int i = 1; i <= points; ++i) {
    const double share = static_cast<double>(i) / (points + 1);
    McUtilities u;
    double x;
    if (curve == "basic") {
      // share axis is the unlicensed fraction 1 - eta_l
      u = monte_carlo_utilities(model, 1.0 - share, 0.0);
      x = share;
    } else if (curve == "advanced") {
      u = monte_carlo_utilities(model, eta_l, share * (1.0 - eta_l));
      x = share * (1.0 - eta_l);
    } else {
      throw std::runtime_error("--curve must be basic or advanced");
    }
    const McEstimate& e = curve == "basic" ? u.r_basic : u.r_advanced;
    target.out() << fmt(x) << ',' << fmt(e.mean) << ',' << fmt(e.std_error)
                 << '\n';
  }
  return 0;
}

int cmd_validate(const Config& cfg, std::uint64_t seed, OutputTarget& target) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok, const std::string& why) {
    target.out() << (ok ? "ok   " : "FAIL ") << name;
    if (!ok && !why.empty()) target.out() << "  (" << why << ")";
    target.out() << "\n";
    if (!ok) ++failures;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  {  // fixed-point property of the Stage III solver
    bool ok = true;
    std::string why;
    for (int i = 0; i < 50 && ok; ++i) {
      const PriceProfile prices{0.2 + 3.5 * u01(rng), 0.02 + 1.1 * u01(rng)};
      const StageIIIEquilibrium eq = solve_equilibrium(prices, cfg.params);
      if (eq.fixed_point_residual > 1e-8) {
        ok = false;
        why = "residual " + fmt(eq.fixed_point_residual) + " at p_l=" +
              fmt(prices.p_l) + " p_a=" + fmt(prices.p_a);
      }
    }
    check("stage3 fixed point (50 random prices)", ok, why);
  }
  {  // agent oracle vs continuum solver
    bool ok = true;
    std::string why;
    const int n = 20000;
    for (int i = 0; i < 5 && ok; ++i) {
      const PriceProfile prices{0.5 + 3.0 * u01(rng), 0.05 + 0.9 * u01(rng)};
      const MarketShare agents =
          agent_based_equilibrium(n, prices, cfg.params);
      const StageIIIEquilibrium eq = solve_equilibrium(prices, cfg.params);
      const double err = std::max(std::abs(agents.eta_l - eq.shares.eta_l),
                                  std::abs(agents.eta_a - eq.shares.eta_a));
      if (err > std::max(5e-3, 3.0 / n)) {
        ok = false;
        why = "gap " + fmt(err);
      }
    }
    check("agent oracle vs continuum (5 price points)", ok, why);
  }
  {  // stage2 solver vs exhaustive grid oracle
    bool ok = true;
    std::string why;
    try {
      const CommissionScheme scheme = CommissionScheme::rss(0.3);
      const StageIIReport rep = solve_stage2(scheme, cfg.params);
      const MarketShare oracle = grid_nash_oracle(scheme, cfg.params, 2e-3);
      const double err = std::max(std::abs(rep.shares.eta_l - oracle.eta_l),
                                  std::abs(rep.shares.eta_a - oracle.eta_a));
      if (err > 4e-3) {
        ok = false;
        why = "gap " + fmt(err);
      }
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    check("stage2 solver vs grid oracle (rss:0.3)", ok, why);
  }
  {  // closed-form consumer surplus vs Monte Carlo user payoffs
    bool ok = true;
    std::string why;
    for (int i = 0; i < 3 && ok; ++i) {
      const PriceProfile prices{1.0 + 2.0 * u01(rng), 0.1 + 0.5 * u01(rng)};
      const StageIIIEquilibrium eq = solve_equilibrium(prices, cfg.params);
      const double cs = consumer_surplus(eq.shares, prices, cfg.params);
      const ServiceUtilities su = service_utilities(eq.shares, cfg.params);
      double sum = 0.0;
      const long m = 100000;
      for (long s = 0; s < m; ++s) {
        const double theta = (s + u01(rng)) / m;
        const double best = std::max(
            {theta * su.r_basic, theta * su.r_advanced - prices.p_a,
             theta * su.q_leasing - prices.p_l});
        sum += best;
      }
      if (std::abs(sum / m - cs) > 3e-3) {
        ok = false;
        why = "gap " + fmt(std::abs(sum / m - cs));
      }
    }
    check("consumer surplus vs Monte Carlo (3 equilibria)", ok, why);
  }
  {  // certificate soundness: holds => multi-start agreement
    bool ok = true;
    std::string why;
    int held = 0;
    for (int i = 0; i < 200 && held < 20 && ok; ++i) {
      const PriceProfile prices{0.02 + 0.3 * u01(rng), 0.001 + 0.08 * u01(rng)};
      const UniquenessCertificate cert =
          uniqueness_certificate(prices, cfg.params, 2e-3);
      if (!cert.holds) continue;
      ++held;
      MarketShare first{};
      for (int s = 0; s < 10; ++s) {
        const double el = u01(rng);
        const MarketShare init{el, u01(rng) * (1.0 - el)};
        const DynamicsTrajectory traj =
            iterate_dynamics(init, prices, cfg.params);
        if (!traj.converged) {
          ok = false;
          why = "dynamics did not converge";
          break;
        }
        if (s == 0)
          first = traj.points.back();
        else if (std::max(std::abs(traj.points.back().eta_l - first.eta_l),
                          std::abs(traj.points.back().eta_a - first.eta_a)) >
                 1e-6) {
          ok = false;
          why = "multi-start disagreement under a holding certificate";
          break;
        }
      }
    }
    if (held == 0) {
      ok = false;
      why = "no holding certificates sampled";
    }
    check("certificate soundness (multi-start agreement)", ok, why);
  }
  {  // inverse demand round trip
    bool ok = true;
    std::string why;
    for (int i = 0; i < 10 && ok; ++i) {
      const double el = 0.05 + 0.4 * u01(rng);
      const double ea = 0.05 + u01(rng) * (0.9 - el);
      const PriceProfile prices = shares_to_prices({el, ea}, cfg.params);
      const StageIIIEquilibrium eq = solve_equilibrium(prices, cfg.params);
      const double err = std::max(std::abs(eq.shares.eta_l - el),
                                  std::abs(eq.shares.eta_a - ea));
      if (err > 1e-4) {
        ok = false;
        why = "gap " + fmt(err);
      }
    }
    check("shares -> prices -> equilibrium round trip", ok, why);
  }

  if (failures > 0) {
    target.out() << failures << " validation check(s) failed\n";
    return 3;
  }
  target.out() << "all validation checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrated spectrum and information market solver"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::string out_path;
  double tol = -1.0;
  std::uint64_t seed = 1;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--tol", tol, "solver tolerance override");
  app.add_option("--seed", seed, "random seed");

  auto* eq = app.add_subcommand("equilibrium", "Stage III market equilibrium");
  double p_l = 2.0, p_a = 0.3;
  bool eq_trace = false;
  eq->add_option("--p-l", p_l, "leasing price");
  eq->add_option("--p-a", p_a, "information price");
  eq->add_flag("--trace", eq_trace, "dump the dynamics trajectory as CSV");

  auto* compete = app.add_subcommand("compete", "Stage II price competition");
  std::string scheme_value = "rss:0.0";
  bool compete_trace = false;
  compete->add_option("--scheme", scheme_value, "rss:<delta> or wps:<w>");
  compete->add_flag("--trace", compete_trace, "per-round CSV trace");

  auto* bargain = app.add_subcommand("bargain", "Stage I Nash bargaining");
  std::string bargain_kind = "rss";
  int grid_steps = -1;
  bargain->add_option("--scheme", bargain_kind, "rss or wps");
  bargain->add_option("--grid-steps", grid_steps, "commission grid steps");

  auto* bench = app.add_subcommand("benchmarks", "reference schemes");
  double g1 = 1.0, c_s = 0.2;
  bench->add_option("--sensing-g1", g1, "sensing utility gain");
  bench->add_option("--c-s", c_s, "user sensing cost");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  SweepSpec spec;
  std::string schemes_text = "rss,wps";
  std::string columns_text;
  sweep->add_option("--parameter", spec.parameter,
                    "lambda | cost_leasing | cost_sensing")->required();
  sweep->add_option("--start", spec.start)->required();
  sweep->add_option("--stop", spec.stop)->required();
  sweep->add_option("--step", spec.step)->required();
  sweep->add_option("--schemes", schemes_text, "comma list of schemes");
  sweep->add_option("--columns", columns_text, "comma list of columns");
  sweep->add_option("--sensing-g1", spec.sensing.g1, "sensing utility gain");
  sweep->add_option("--c-s", spec.sensing.c_s,
                    "sensing cost for non-c_s sweeps");

  auto* validate = app.add_subcommand("validate", "oracle cross-checks");

  auto* mc = app.add_subcommand("mc-oracle", "interference-model curves");
  InterferenceModel model;
  std::string curve = "advanced";
  double mc_eta_l = 0.3;
  int mc_points = 9;
  mc->add_option("--channels", model.channels, "number of TV channels");
  mc->add_option("--samples", model.samples, "Monte Carlo draws per point");
  mc->add_option("--curve", curve, "basic or advanced");
  mc->add_option("--eta-l", mc_eta_l, "fixed leasing share (advanced curve)");
  mc->add_option("--points", mc_points, "points on the share grid");
  mc->add_option("--n-users", model.n_users, "population size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    OutputTarget target;
    target.open(out_path);

    if (*eq) return cmd_equilibrium(cfg, p_l, p_a, tol, eq_trace, target);
    if (*compete) return cmd_compete(cfg, scheme_value, compete_trace, target);
    if (*bargain) return cmd_bargain(cfg, bargain_kind, grid_steps, target);
    if (*bench) return cmd_benchmarks(cfg, g1, c_s, target);
    if (*sweep) {
      spec.schemes = split_csv_list(schemes_text);
      spec.columns = split_csv_list(columns_text);
      return cmd_sweep(cfg, spec, target);
    }
    if (*validate) return cmd_validate(cfg, seed, target);
    if (*mc) {
      model.seed = seed;
      return cmd_mc_oracle(model, curve, mc_eta_l, mc_points, target);
    }
  } catch (const non_convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const no_sign_change_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
