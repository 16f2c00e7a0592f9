#include "wsm/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wsm/dynamics.hpp"
#include "wsm/errors.hpp"
#include "wsm/model.hpp"
#include "wsm/scalar_opt.hpp"

namespace wsm {

namespace {

double joint_profit(const MarketShare& s, const ModelParams& p) {
  const PriceProfile prices = shares_to_prices(s, p);
  return (prices.p_a - p.cost_advanced) * s.eta_a +
         (prices.p_l - p.cost_leasing) * s.eta_l;
}

// A leasing price high enough that theta_la lands at 2: clamps the leasing
// breakpoint to 1 so consumer_surplus integrates a no-leasing market.
double prohibitive_leasing_price(const MarketShare& s, double p_a,
                                 const ModelParams& p) {
  const ServiceUtilities u = service_utilities(s, p);
  return p_a + 2.0 * (u.q_leasing - u.r_advanced);
}

void require_sensing_ordering(const ModelParams& p, const SensingParams& s) {
  if (!(s.g1 > 0.0)) throw ordering_error("sensing gain g1 must be > 0");
  // Q_L > R_S(.) = f + g1 > f everywhere; f peaks at alpha1.
  if (!(p.q_leasing > p.alpha1 + s.g1))
    throw ordering_error("ordering Q_L > R_S violated: Q_L <= alpha1 + g1");
  if (s.c_s < 0.0) throw std::domain_error("sensing cost must be >= 0");
}

// The sensing market is the Stage III machinery with a constant information
// curve g == g1 and the information price replaced by the sensing cost.
ModelParams sensing_transform(const ModelParams& p, const SensingParams& s) {
  ModelParams out = p;
  out.alpha2 = s.g1;
  out.beta2 = s.g1;
  return out;
}

struct SensingStage2 {
  double p_l = 0.0;
  MarketShare shares;       // (eta_l, eta_s)
  double leasing_margin = 0.0;  // (p_l - c_l) * eta_l
};

// Licensee's 1-D price choice given the per-transaction commission cost
// (0 under RSS, w under WPS); the (1 - delta) scaling cannot move the argmax.
SensingStage2 solve_sensing_stage2(const ModelParams& params,
                                   const SensingParams& sensing,
                                   double commission_cost) {
  const ModelParams inner = sensing_transform(params, sensing);
  auto shares_at = [&](double p_l) {
    return solve_equilibrium({p_l, sensing.c_s}, inner, 1e-12).shares;
  };
  auto objective = [&](double p_l) {
    return (p_l - commission_cost - params.cost_leasing) *
           shares_at(p_l).eta_l;
  };
  const ScalarMax best = grid_golden_max(objective, 0.0, params.q_leasing,
                                         2001);
  SensingStage2 out;
  out.p_l = best.x;
  out.shares = shares_at(best.x);
  out.leasing_margin = (best.x - params.cost_leasing) * out.shares.eta_l;
  return out;
}

}  // namespace

BenchmarkReport coordination_optimum(const ModelParams& params, int grid_n) {
  params.require_valid();
  if (grid_n < 21) throw std::domain_error("coordination grid too coarse");

  double lo_l = 0.0, hi_l = 1.0, lo_a = 0.0, hi_a = 1.0;
  MarketShare best{0.0, 0.0};
  double best_v = -std::numeric_limits<double>::infinity();
  int n = grid_n;
  for (int pass = 0; pass < 4; ++pass) {
    const double hl = (hi_l - lo_l) / (n - 1);
    const double ha = (hi_a - lo_a) / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double el = lo_l + i * hl;
      for (int j = 0; j < n; ++j) {
        const double ea = lo_a + j * ha;
        if (el + ea > 1.0) break;
        const double v = joint_profit({el, ea}, params);
        if (v > best_v) {
          best_v = v;
          best = {el, ea};
        }
      }
    }
    // zoom on the best cell for the next pass
    lo_l = std::max(0.0, best.eta_l - hl);
    hi_l = std::min(1.0, best.eta_l + hl);
    lo_a = std::max(0.0, best.eta_a - ha);
    hi_a = std::min(1.0, best.eta_a + ha);
    n = 41;
  }

  BenchmarkReport rep;
  rep.scheme_name = "coordination";
  rep.shares = best;
  rep.prices = shares_to_prices(best, params);
  rep.u_licensee = (rep.prices.p_l - params.cost_leasing) * best.eta_l;
  rep.u_database = (rep.prices.p_a - params.cost_advanced) * best.eta_a;
  rep.network_profit = best_v;
  rep.consumer_surplus = consumer_surplus(best, rep.prices, params);
  rep.social_welfare = rep.network_profit + rep.consumer_surplus;
  rep.energy_cost = best.eta_a * params.cost_advanced;
  return rep;
}

BenchmarkReport pure_information_market(const ModelParams& params,
                                        bool cost_adjusted) {
  const DisagreementPoint d = disagreement_point(params, cost_adjusted);
  BenchmarkReport rep;
  rep.scheme_name = "pure_info";
  rep.shares = {0.0, d.eta_a};
  rep.prices.p_a = d.p_info;
  rep.prices.p_l = prohibitive_leasing_price(rep.shares, d.p_info, params);
  rep.u_licensee = 0.0;
  rep.u_database = d.u_database;
  rep.network_profit = d.u_database;
  rep.consumer_surplus = consumer_surplus(rep.shares, rep.prices, params);
  rep.social_welfare = rep.network_profit + rep.consumer_surplus;
  rep.energy_cost = d.eta_a * params.cost_advanced;
  return rep;
}

BenchmarkReport third_party_scheme(const ModelParams& params) {
  const StageIIReport s2 = solve_stage2(CommissionScheme::rss(0.0), params);
  BenchmarkReport rep;
  rep.scheme_name = "third_party";
  rep.shares = s2.shares;
  rep.prices = s2.prices;
  rep.u_licensee = s2.payoffs.u_licensee;
  rep.u_database = s2.payoffs.u_database;
  rep.network_profit = rep.u_licensee + rep.u_database;
  rep.consumer_surplus = consumer_surplus(s2.shares, s2.prices, params);
  rep.social_welfare = rep.network_profit + rep.consumer_surplus;
  rep.energy_cost = s2.shares.eta_a * params.cost_advanced;
  return rep;
}

BenchmarkReport sensing_market_equilibrium(const ModelParams& params,
                                           const SensingParams& sensing,
                                           SchemeKind kind,
                                           const BargainingConfig& config) {
  params.require_valid();
  require_sensing_ordering(params, sensing);

  // Stage I: both disagreement payoffs are zero (without the platform deal
  // there is no leasing and the database sells nothing in this market), so
  // the Nash product is U_db * U_sl under either pairing.
  const int steps = std::max(11, config.grid_steps);
  const double hi = kind == SchemeKind::revenue_share ? 1.0 : params.q_leasing;
  const double h = hi / (steps - 1);

  // Under RSS the licensee's price is commission-invariant: one Stage II
  // solve serves every delta.
  SensingStage2 rss_stage2;
  if (kind == SchemeKind::revenue_share)
    rss_stage2 = solve_sensing_stage2(params, sensing, 0.0);

  struct Eval {
    double product;
    SensingStage2 s2;
    double u_sl, u_db;
  };
  auto eval_at = [&](double x) {
    Eval e;
    if (kind == SchemeKind::revenue_share) {
      e.s2 = rss_stage2;
      e.u_sl = e.s2.leasing_margin * (1.0 - x);
      e.u_db = e.s2.leasing_margin * x;
    } else {
      e.s2 = solve_sensing_stage2(params, sensing, x);
      e.u_sl = (e.s2.p_l - x - params.cost_leasing) * e.s2.shares.eta_l;
      e.u_db = x * e.s2.shares.eta_l;
    }
    e.product = (e.u_sl >= -1e-9 && e.u_db >= -1e-9) ? e.u_sl * e.u_db
               : -std::numeric_limits<double>::infinity();
    return e;
  };

  int best_i = -1;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < steps; ++i) {
    const Eval e = eval_at(std::min(hi, i * h));
    if (e.product > best_v) {
      best_v = e.product;
      best_i = i;
    }
  }
  const double lo_x = std::max(0.0, (best_i - 1) * h);
  const double hi_x = std::min(hi, (best_i + 1) * h);
  const ScalarMax refined = golden_section_max(
      [&](double x) { return eval_at(x).product; }, lo_x, hi_x, 1e-10);
  const double x_star =
      refined.value >= best_v ? refined.x : std::min(hi, best_i * h);
  const Eval e = eval_at(x_star);

  BenchmarkReport rep;
  rep.scheme_name = kind == SchemeKind::revenue_share ? "sensing_rss"
                                                      : "sensing_wps";
  rep.shares = e.s2.shares;  // eta_a slot carries eta_s
  rep.prices = {e.s2.p_l, sensing.c_s};
  rep.u_licensee = e.u_sl;
  rep.u_database = e.u_db;
  rep.network_profit = e.u_sl + e.u_db;
  rep.consumer_surplus = consumer_surplus(
      e.s2.shares, rep.prices, sensing_transform(params, sensing));
  rep.social_welfare = rep.network_profit + rep.consumer_surplus;
  rep.energy_cost = e.s2.shares.eta_a * sensing.c_s;
  rep.commission = kind == SchemeKind::revenue_share
                       ? CommissionScheme::rss(x_star)
                       : CommissionScheme::wps(x_star);
  rep.bargained = true;
  rep.feasible = e.product >= 0.0;
  return rep;
}

EnergyCosts energy_cost_comparison(const MarketShare& integrated_shares,
                                   const MarketShare& sensing_shares,
                                   const ModelParams& params,
                                   const SensingParams& sensing) {
  return {integrated_shares.eta_a * params.cost_advanced,
          sensing_shares.eta_a * sensing.c_s};
}

double social_welfare(const BenchmarkReport& report) {
  return report.u_licensee + report.u_database + report.consumer_surplus;
}

double social_welfare_at(const MarketShare& shares, const PriceProfile& prices,
                         const CommissionScheme& scheme,
                         const ModelParams& params) {
  const FirmPayoffs payoffs = firm_payoffs(shares, scheme, params);
  return payoffs.u_licensee + payoffs.u_database +
         consumer_surplus(shares, prices, params);
}

}  // namespace wsm
