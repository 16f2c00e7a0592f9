#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "wsm/competition.hpp"
#include "wsm/dynamics.hpp"
#include "wsm/errors.hpp"
#include "wsm/model.hpp"

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

// frozen Stage III golden values at defaults (lambda = 1.8), prices (2, 0.3),
// computed with an independent arbitrary-precision bisection of the
// one-variable reduction
constexpr double kEqEtaL = 0.6054608280771786;
constexpr double kEqEtaA = 0.1571064086055828;
constexpr double kEqSurplus = 1.3709732106319840;

}  // namespace

TEST_CASE("thresholds under constant externalities and at defaults") {
  ModelParams flat = constant_externalities();
  const Thresholds t = thresholds({0.1, 0.1}, {2.0, 0.2}, flat);
  CHECK(t.lb == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(t.ab == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(t.la == doctest::Approx(0.45).epsilon(1e-12));

  const Thresholds zero = thresholds({0.2, 0.3}, {0.0, 0.0}, flat);
  CHECK(zero.lb == 0.0);
  CHECK(zero.ab == 0.0);
  CHECK(zero.la == 0.0);

  ModelParams p = defaults_lambda(1.8);
  const Thresholds d = thresholds({0.6056, 0.1571}, {2.0, 0.3}, p);
  CHECK(d.lb == doctest::Approx(0.3589234489197999).epsilon(1e-10));
  CHECK(d.ab == doctest::Approx(0.2374339752904485).epsilon(1e-10));
  CHECK(d.la == doctest::Approx(0.3945496741288555).epsilon(1e-10));
  CHECK(d.la > d.lb);
  CHECK(d.lb > d.ab);

  ModelParams tight = p;
  tight.q_leasing = 2.0;  // Q_L - R_A = 0 at the all-leasing corner
  CHECK_THROWS_AS(thresholds({1.0, 0.0}, {2.0, 0.3}, tight),
                  std::domain_error);
}

TEST_CASE("appendix-B threshold ordering at random points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    ModelParams p = defaults_lambda(0.4 + 1.4 * u01(rng));
    const double ea = 0.01 + 0.98 * u01(rng);
    const MarketShare s{u01(rng) * (1.0 - ea), ea};
    const PriceProfile prices{4.0 * u01(rng), 1.2 * u01(rng)};
    const Thresholds t = thresholds(s, prices, p);
    if (t.lb > t.ab + 1e-9) CHECK(t.la > t.lb);
    if (t.lb < t.ab - 1e-9) CHECK(t.la < t.lb);
  }
}

TEST_CASE("best response map branches") {
  ModelParams flat = constant_externalities();
  // free leasing: everyone leases
  const BestResponse free_lease = best_response_map({0.3, 0.3}, {0.0, 0.5},
                                                    flat);
  CHECK(free_lease.share.eta_l == doctest::Approx(1.0));
  CHECK(free_lease.share.eta_a == doctest::Approx(0.0));

  // constant externalities make the map constant
  const BestResponse c = best_response_map({0.9, 0.05}, {2.0, 0.2}, flat);
  CHECK(c.share.eta_l == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(c.share.eta_a == doctest::Approx(0.25).epsilon(1e-12));

  // information priced out: theta_lb <= theta_ab kills the advanced share
  const BestResponse no_info = best_response_map({0.2, 0.2}, {2.0, 1.5}, flat);
  CHECK(no_info.share.eta_a == doctest::Approx(0.0));
  CHECK(no_info.share.eta_l == doctest::Approx(1.0 - 0.4).epsilon(1e-12));
}

TEST_CASE("iterate_dynamics reaches the constant-case fixed point") {
  ModelParams flat = constant_externalities();
  const DynamicsTrajectory traj =
      iterate_dynamics({0.0, 1.0}, {2.0, 0.2}, flat);
  CHECK(traj.converged);
  CHECK(traj.iterations <= 2);
  CHECK(traj.points.back().eta_l == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(traj.points.back().eta_a == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("iterate_dynamics matches the bisection solver at defaults") {
  ModelParams p = defaults_lambda(1.8);
  const DynamicsTrajectory traj =
      iterate_dynamics({0.0, 0.0}, {2.0, 0.3}, p, 1e-10);
  CHECK(traj.converged);
  CHECK(traj.points.back().eta_l == doctest::Approx(kEqEtaL).epsilon(1e-6));
  CHECK(traj.points.back().eta_a == doctest::Approx(kEqEtaA).epsilon(1e-6));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int s = 0; s < 10; ++s) {
    const double el = u01(rng);
    const DynamicsTrajectory t =
        iterate_dynamics({el, u01(rng) * (1.0 - el)}, {2.0, 0.3}, p, 1e-10);
    CHECK(t.converged);
    CHECK(std::abs(t.points.back().eta_l - kEqEtaL) < 1e-6);
    CHECK(std::abs(t.points.back().eta_a - kEqEtaA) < 1e-6);
  }
}

TEST_CASE("uniqueness certificate endpoints and frozen grid values") {
  ModelParams flat;
  flat.alpha2 = flat.beta2 = 1.0;  // g' == 0
  const UniquenessCertificate c0 =
      uniqueness_certificate({3.0, 0.7}, flat, 1e-2);
  CHECK(c0.lhs_max <= 0.0);
  CHECK(c0.holds);

  ModelParams p = defaults_lambda(1.8);
  const UniquenessCertificate free_prices =
      uniqueness_certificate({0.0, 0.0}, p, 1e-2);
  CHECK(free_prices.kappa == 0.0);
  CHECK(free_prices.holds);

  // frozen from an independent vectorized evaluation of the same grid
  const UniquenessCertificate cert =
      uniqueness_certificate({2.0, 0.3}, p, 1e-3);
  CHECK(cert.kappa == doctest::Approx(0.425).epsilon(1e-12));
  CHECK(cert.lhs_max == doctest::Approx(9.412604450280266).epsilon(1e-9));
  CHECK_FALSE(cert.holds);

  CHECK_THROWS_AS(uniqueness_certificate({1.0, 0.1}, p, 0.2),
                  std::domain_error);
}

TEST_CASE("solve_equilibrium branches and golden point") {
  ModelParams flat = constant_externalities();
  const StageIIIEquilibrium active = solve_equilibrium({2.0, 0.2}, flat);
  CHECK(active.branch == EquilibriumBranch::advanced_active);
  CHECK(active.shares.eta_l == doctest::Approx(0.55).epsilon(1e-10));
  CHECK(active.shares.eta_a == doctest::Approx(0.25).epsilon(1e-10));

  // p_a >= g: theta_ab >= 1 >= theta_lb routes to the advanced-empty branch
  const StageIIIEquilibrium empty = solve_equilibrium({2.0, 1.0}, flat);
  CHECK(empty.branch == EquilibriumBranch::advanced_empty);
  CHECK(empty.shares.eta_l == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(empty.shares.eta_a == 0.0);

  ModelParams p = defaults_lambda(1.8);
  const StageIIIEquilibrium eq = solve_equilibrium({2.0, 0.3}, p, 1e-12);
  CHECK(eq.branch == EquilibriumBranch::advanced_active);
  CHECK(eq.shares.eta_l == doctest::Approx(kEqEtaL).epsilon(1e-9));
  CHECK(eq.shares.eta_a == doctest::Approx(kEqEtaA).epsilon(1e-9));
  CHECK(eq.fixed_point_residual < 1e-10);

  // free leasing drains the whole market
  const StageIIIEquilibrium all_lease = solve_equilibrium({0.0, 0.2}, p);
  CHECK(all_lease.shares.eta_l == doctest::Approx(1.0));
}

TEST_CASE("fixed point property on random prices and parameters") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    ModelParams p;
    p.gamma1 = 0.3 + 0.7 * u01(rng);
    p.gamma2 = 0.3 + 0.7 * u01(rng);
    p.beta2 = 0.4 + 1.4 * u01(rng);
    p.q_leasing = p.alpha1 + std::max(p.alpha2, p.beta2) + 0.5 + 4.0 * u01(rng);
    p.cost_leasing = u01(rng);
    p.cost_advanced = 0.5 * u01(rng);
    const PriceProfile prices{5.0 * u01(rng), 1.5 * u01(rng)};
    const StageIIIEquilibrium eq = solve_equilibrium(prices, p);
    CHECK(eq.fixed_point_residual <= 1e-8);
    const BestResponse next = best_response_map(eq.shares, prices, p);
    CHECK(std::abs(next.share.eta_l - eq.shares.eta_l) <= 1e-8);
    CHECK(std::abs(next.share.eta_a - eq.shares.eta_a) <= 1e-8);
  }
}

TEST_CASE("raising the leasing price never raises the leasing share") {
  ModelParams p = defaults_lambda(1.8);
  double last = 2.0;
  for (double p_l = 0.5; p_l <= 4.01; p_l += 0.25) {
    const StageIIIEquilibrium eq = solve_equilibrium({p_l, 0.3}, p);
    CHECK(eq.shares.eta_l <= last + 1e-9);
    last = eq.shares.eta_l;
  }
}

TEST_CASE("consumer surplus closed form") {
  ModelParams flat = constant_externalities();
  CHECK(consumer_surplus({0.55, 0.25}, {2.0, 0.2}, flat) ==
        doctest::Approx(1.425).epsilon(1e-12));

  ModelParams p = defaults_lambda(1.8);
  // free services: everyone leases, surplus = Q_L / 2
  CHECK(consumer_surplus({1.0, 0.0}, {0.0, 0.0}, p) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(consumer_surplus({kEqEtaL, kEqEtaA}, {2.0, 0.3}, p) ==
        doctest::Approx(kEqSurplus).epsilon(1e-9));

  // a non-equilibrium point is inconsistent with its own thresholds
  CHECK_THROWS_AS(consumer_surplus({0.3, 0.2}, {2.0, 0.3}, p),
                  ordering_error);
}

TEST_CASE("consumer surplus agrees with stratified Monte Carlo payoffs") {
  ModelParams p = defaults_lambda(1.8);
  const PriceProfile prices{2.0, 0.3};
  const StageIIIEquilibrium eq = solve_equilibrium(prices, p);
  const double cs = consumer_surplus(eq.shares, prices, p);
  const ServiceUtilities u = service_utilities(eq.shares, p);
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const long n = 1000000;
  double sum = 0.0;
  for (long i = 0; i < n; ++i) {
    const double theta = (i + u01(rng)) / n;
    sum += std::max({theta * u.r_basic, theta * u.r_advanced - prices.p_a,
                     theta * u.q_leasing - prices.p_l});
  }
  CHECK(std::abs(sum / n - cs) <= 1e-3);
}

TEST_CASE("certificate soundness: holding certificates imply agreement") {
  ModelParams p = defaults_lambda(1.8);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int held = 0;
  for (int trial = 0; trial < 60 && held < 10; ++trial) {
    const double p_a = 0.001 + 0.08 * u01(rng);
    const PriceProfile prices{p_a + 0.3 * u01(rng), p_a};
    const UniquenessCertificate cert = uniqueness_certificate(prices, p, 2e-3);
    if (!cert.holds) continue;
    ++held;
    MarketShare first{};
    for (int s = 0; s < 10; ++s) {
      const double el = u01(rng);
      const DynamicsTrajectory t =
          iterate_dynamics({el, u01(rng) * (1.0 - el)}, prices, p);
      REQUIRE(t.converged);
      if (s == 0) {
        first = t.points.back();
      } else {
        CHECK(std::abs(t.points.back().eta_l - first.eta_l) <= 1e-6);
        CHECK(std::abs(t.points.back().eta_a - first.eta_a) <= 1e-6);
      }
    }
  }
  CHECK(held >= 10);
}
