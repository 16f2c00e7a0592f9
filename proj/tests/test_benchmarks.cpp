#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wsm/benchmarks.hpp"
#include "wsm/dynamics.hpp"
#include "wsm/errors.hpp"

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

TEST_CASE("coordination optimum under constant externalities") {
  // joint profit (0.8 - eta_l - eta_a)eta_a + (5(1-eta_l) - eta_a - 0.9)eta_l
  // has its constrained optimum on the eta_a = 0 edge at eta_l = 0.41
  ModelParams flat = constant_externalities();
  const BenchmarkReport rep = coordination_optimum(flat);
  CHECK(rep.shares.eta_l == doctest::Approx(0.41).epsilon(1e-4));
  CHECK(rep.shares.eta_a == doctest::Approx(0.0).epsilon(1e-4));
  CHECK(rep.network_profit == doctest::Approx(0.8405).epsilon(1e-6));
  CHECK(rep.network_profit ==
        doctest::Approx(rep.u_licensee + rep.u_database).epsilon(1e-12));
}

TEST_CASE("coordination shuts leasing down when it cannot cover cost") {
  ModelParams p = defaults_lambda(1.8);
  p.cost_leasing = 7.0;  // above any attainable p_l <= Q_L
  const BenchmarkReport rep = coordination_optimum(p);
  CHECK(rep.shares.eta_l == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(rep.u_licensee <= 1e-9);
}

TEST_CASE("pure information market equals the disagreement computation") {
  ModelParams unit;
  unit.beta2 = 1.0;
  const BenchmarkReport rep = pure_information_market(unit);
  CHECK(rep.prices.p_a == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(rep.shares.eta_a == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(rep.network_profit == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(rep.shares.eta_l == 0.0);
  CHECK(rep.u_licensee == 0.0);

  ModelParams p = defaults_lambda(1.8);
  const BenchmarkReport info = pure_information_market(p);
  const DisagreementPoint d = disagreement_point(p);
  CHECK(info.u_database == d.u_database);  // same code path, exact equality
  CHECK(info.social_welfare > info.network_profit);
}

TEST_CASE("third party equals zero commission under either scheme") {
  ModelParams p = defaults_lambda(1.8);
  const BenchmarkReport tp = third_party_scheme(p);
  const StageIIReport rss0 = solve_stage2(CommissionScheme::rss(0.0), p);
  const StageIIReport wps0 = solve_stage2(CommissionScheme::wps(0.0), p);
  CHECK(tp.shares.eta_l == doctest::Approx(rss0.shares.eta_l).epsilon(1e-12));
  CHECK(rss0.shares.eta_l == doctest::Approx(wps0.shares.eta_l).epsilon(1e-12));
  CHECK(rss0.shares.eta_a == doctest::Approx(wps0.shares.eta_a).epsilon(1e-12));
  CHECK(tp.network_profit ==
        doctest::Approx(tp.u_licensee + tp.u_database).epsilon(1e-12));
}

TEST_CASE("sensing stage III thresholds via the constant-gain transform") {
  // f == 1, g1 = 1, Q_L = 6, c_s = 0.1, p_l = 2:
  // thresholds (0.4, 0.1, 0.475) give shares (0.525, 0.375, 0.1)
  ModelParams inner = constant_externalities();  // alpha2 = beta2 = g1 = 1
  const StageIIIEquilibrium eq = solve_equilibrium({2.0, 0.1}, inner);
  CHECK(eq.shares.eta_l == doctest::Approx(0.525).epsilon(1e-10));
  CHECK(eq.shares.eta_a == doctest::Approx(0.375).epsilon(1e-10));

  // zero sensing cost empties the plain basic service
  const StageIIIEquilibrium free_sense = solve_equilibrium({2.0, 0.0}, inner);
  CHECK(free_sense.shares.eta_b() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("sensing market bargained outcome") {
  ModelParams p = defaults_lambda(1.8);
  p.cost_advanced = 0.1;
  const SensingParams sensing{1.0, 0.2};
  const BenchmarkReport rss =
      sensing_market_equilibrium(p, sensing, SchemeKind::revenue_share);
  CHECK(rss.feasible);
  // with zero disagreement and a delta-invariant licensee response the Nash
  // product is T^2 * delta * (1 - delta): the split is exactly one half
  CHECK(rss.commission.value == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rss.u_licensee == doctest::Approx(rss.u_database).epsilon(1e-5));
  CHECK(rss.shares.eta_b() ==
        doctest::Approx(sensing.c_s / sensing.g1).epsilon(1e-6));

  const BenchmarkReport wps =
      sensing_market_equilibrium(p, sensing, SchemeKind::wholesale);
  CHECK(wps.feasible);
  CHECK(wps.energy_cost ==
        doctest::Approx(wps.shares.eta_a * sensing.c_s).epsilon(1e-12));

  SensingParams bad{6.0, 0.2};  // Q_L <= alpha1 + g1
  CHECK_THROWS_AS(
      sensing_market_equilibrium(p, bad, SchemeKind::revenue_share),
      ordering_error);
}

TEST_CASE("energy cost comparison formulas") {
  ModelParams p = defaults_lambda(1.8);
  const SensingParams zero_cost{1.0, 0.0};
  const EnergyCosts a =
      energy_cost_comparison({0.4, 0.2}, {0.4, 0.5}, p, zero_cost);
  CHECK(a.sensing == 0.0);
  CHECK(a.integrated == doctest::Approx(0.2 * p.cost_advanced));
  const EnergyCosts b =
      energy_cost_comparison({0.4, 0.0}, {0.4, 0.5}, p, {1.0, 0.3});
  CHECK(b.integrated == 0.0);
  CHECK(b.sensing == doctest::Approx(0.15));
}

TEST_CASE("social welfare composition and commission neutrality") {
  ModelParams flat = constant_externalities();
  const MarketShare s{0.55, 0.25};
  const PriceProfile prices = shares_to_prices(s, flat);
  const double sw =
      social_welfare_at(s, prices, CommissionScheme::rss(0.2), flat);
  CHECK(sw == doctest::Approx(0.484 + 0.121 + 1.425).epsilon(1e-10));

  // transfers cancel: welfare at pinned shares is commission-invariant
  for (const CommissionScheme& other :
       {CommissionScheme::rss(0.0), CommissionScheme::rss(0.9),
        CommissionScheme::wps(0.5), CommissionScheme::wps(2.0)}) {
    CHECK(social_welfare_at(s, prices, other, flat) ==
          doctest::Approx(sw).epsilon(1e-12));
  }

  // all-leasing with free services and zero costs: SW = Q_L / 2
  ModelParams free_market = flat;
  free_market.cost_leasing = 0.0;
  free_market.cost_advanced = 0.0;
  const double all_lease = social_welfare_at(
      {1.0, 0.0}, {0.0, 0.0}, CommissionScheme::rss(0.3), free_market);
  CHECK(all_lease == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("network profit dominance at the default externality level") {
  ModelParams p = defaults_lambda(1.8);
  BargainingConfig config;
  config.grid_steps = 51;
  const BenchmarkReport coord = coordination_optimum(p);
  const BenchmarkReport tp = third_party_scheme(p);
  const BenchmarkReport info = pure_information_market(p);
  const BargainingOutcome rss =
      solve_bargaining(SchemeKind::revenue_share, p, config);
  const BargainingOutcome wps = solve_bargaining(SchemeKind::wholesale, p,
                                                 config);
  const double rss_np =
      rss.stage2.payoffs.u_licensee + rss.stage2.payoffs.u_database;
  const double wps_np =
      wps.stage2.payoffs.u_licensee + wps.stage2.payoffs.u_database;
  CHECK(coord.network_profit >= std::max(rss_np, wps_np) - 1e-6);
  CHECK(std::max(rss_np, wps_np) >= tp.network_profit - 1e-6);
  CHECK(tp.network_profit >= info.network_profit - 1e-6);
}
