#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wsm/competition.hpp"
#include "wsm/dynamics.hpp"
#include "wsm/errors.hpp"
#include "wsm/validation.hpp"

using namespace wsm;

namespace {

ModelParams defaults_lambda(double lambda) {
  ModelParams p;
  return p.with_lambda(lambda);
}

ModelParams constant_externalities() {
  ModelParams p;
  p.beta1 = 0.0;
  p.beta2 = 1.0;
  return p;
}

}  // namespace

TEST_CASE("agent population reproduces constant-case shares exactly") {
  ModelParams flat = constant_externalities();
  const MarketShare s = agent_based_equilibrium(100000, {2.0, 0.2}, flat);
  // thresholds are constant, midpoint types never tie: one round, exact split
  CHECK(s.eta_l == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(s.eta_a == doctest::Approx(0.25).epsilon(1e-12));

  const MarketShare lease_all =
      agent_based_equilibrium(1000, {0.0, 0.4}, flat);
  CHECK(lease_all.eta_l == doctest::Approx(1.0));
  CHECK(lease_all.eta_a == doctest::Approx(0.0));

  CHECK_THROWS_AS(agent_based_equilibrium(50, {2.0, 0.2}, flat),
                  std::domain_error);
}

TEST_CASE("agents agree with the continuum solver at defaults") {
  ModelParams p = defaults_lambda(1.8);
  const int n = 100000;
  const MarketShare agents = agent_based_equilibrium(n, {2.0, 0.3}, p);
  const StageIIIEquilibrium eq = solve_equilibrium({2.0, 0.3}, p);
  CHECK(std::abs(agents.eta_l - eq.shares.eta_l) <= 5e-3);
  CHECK(std::abs(agents.eta_a - eq.shares.eta_a) <= 5e-3);
}

TEST_CASE("grid oracle matches decoupled quadratic vertices") {
  ModelParams flat = constant_externalities();
  const MarketShare oracle =
      grid_nash_oracle(CommissionScheme::rss(0.0), flat, 1e-3);
  CHECK(std::abs(oracle.eta_l - 37.0 / 95.0) <= 2e-3);
  CHECK(std::abs(oracle.eta_a - 39.0 / 190.0) <= 2e-3);

  CHECK_THROWS_AS(grid_nash_oracle(CommissionScheme::rss(0.0), flat, 5e-5),
                  std::domain_error);
}

TEST_CASE("grid oracle agrees with the stage II solver at defaults") {
  ModelParams p = defaults_lambda(1.8);
  const CommissionScheme scheme = CommissionScheme::rss(0.3);
  const MarketShare oracle = grid_nash_oracle(scheme, p, 1e-3);
  const StageIIReport rep = solve_stage2(scheme, p);
  CHECK(std::abs(oracle.eta_l - rep.shares.eta_l) <= 2e-3);
  CHECK(std::abs(oracle.eta_a - rep.shares.eta_a) <= 2e-3);
}

TEST_CASE("grid oracle reports candidate multiplicity as information") {
  // Stress the uniqueness condition with a steep information curve close to
  // the separation boundary; accept either a unique point or a diagnostic
  // listing the candidates.
  ModelParams p;
  p.beta2 = 3.8;
  p.q_leasing = 5.0;
  p.cost_advanced = 0.0;
  int candidates = 1;
  try {
    (void)grid_nash_oracle(CommissionScheme::wps(0.0), p, 2e-3);
  } catch (const oracle_ambiguity_error& e) {
    candidates = static_cast<int>(e.candidates.size());
    CHECK(candidates != 1);
  }
  CHECK(candidates >= 0);
}

TEST_CASE("monte carlo utilities: degenerate and single-channel cases") {
  InterferenceModel model;
  model.samples = 20000;
  model.mean_tv = model.mean_user = model.mean_out = 0.0;
  const McUtilities deg = monte_carlo_utilities(model, 0.3, 0.2);
  const double r0 = std::log2(1.0 + model.tx_power / model.noise_floor);
  CHECK(deg.r_basic.mean == doctest::Approx(r0).epsilon(1e-12));
  CHECK(deg.r_advanced.mean == doctest::Approx(r0).epsilon(1e-12));
  CHECK(deg.r_basic.std_error <= 1e-6);

  InterferenceModel one;
  one.channels = 1;
  one.samples = 200000;
  const McUtilities u = monte_carlo_utilities(one, 0.3, 0.2);
  const double gap = u.r_advanced.mean - u.r_basic.mean;
  const double se = 3.0 * std::hypot(u.r_basic.std_error,
                                     u.r_advanced.std_error);
  CHECK(std::abs(gap) <= se);  // no selection gain with a single channel
}

TEST_CASE("monte carlo utilities are seed-deterministic") {
  InterferenceModel model;
  model.samples = 50000;
  model.seed = 42;
  const McUtilities a = monte_carlo_utilities(model, 0.25, 0.3);
  const McUtilities b = monte_carlo_utilities(model, 0.25, 0.3);
  CHECK(a.r_basic.mean == b.r_basic.mean);  // bit-identical
  CHECK(a.r_advanced.mean == b.r_advanced.mean);
  CHECK(a.r_basic.std_error == b.r_basic.std_error);

  model.seed = 43;
  const McUtilities c = monte_carlo_utilities(model, 0.25, 0.3);
  CHECK(a.r_basic.mean != c.r_basic.mean);
}

TEST_CASE("shape checks on exact externality curves") {
  ModelParams p = defaults_lambda(1.8);
  std::vector<CurvePoint> f_curve, g_curve;
  for (int i = 0; i <= 10; ++i) {
    const double x = i / 10.0;
    f_curve.push_back({x, congestion_utility(x, p), 0.0});
    g_curve.push_back({x, info_gain(x, p), 0.0});
  }
  const ShapeReport f_rep = shape_checks(f_curve);
  CHECK(f_rep.significant_increases == 0);       // non-increasing
  CHECK(f_rep.significant_concave_seconds == 0);  // convex
  const ShapeReport g_rep = shape_checks(g_curve);
  CHECK(g_rep.significant_decreases == 0);       // non-decreasing
  CHECK(g_rep.significant_convex_seconds == 0);  // concave

  CHECK_THROWS_AS(shape_checks({{0, 1, 0}, {1, 2, 0}}), std::domain_error);
}

TEST_CASE("simulated basic rate falls with the unlicensed fraction") {
  InterferenceModel model;
  model.samples = 50000;
  std::vector<CurvePoint> curve;
  for (int i = 1; i <= 5; ++i) {
    const double unlicensed = 0.15 * i;
    const McUtilities u = monte_carlo_utilities(model, 1.0 - unlicensed, 0.0);
    curve.push_back({unlicensed, u.r_basic.mean, u.r_basic.std_error});
  }
  CHECK(shape_checks(curve).significant_increases == 0);
}
