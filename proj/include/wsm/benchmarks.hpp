#ifndef WSM_BENCHMARKS_HPP
#define WSM_BENCHMARKS_HPP

#include <string>

#include "wsm/bargaining.hpp"
#include "wsm/params.hpp"

namespace wsm {

// Common result row for the reference schemes.  For the sensing market the
// eta_a slot of `shares` carries the sensing fraction eta_s and p_a is the
// users' sensing cost.
struct BenchmarkReport {
  std::string scheme_name;
  MarketShare shares;
  PriceProfile prices;
  double u_licensee = 0.0;
  double u_database = 0.0;
  double network_profit = 0.0;
  double consumer_surplus = 0.0;
  double social_welfare = 0.0;
  double energy_cost = 0.0;
  CommissionScheme commission{};  // meaningful for bargained schemes only
  bool bargained = false;
  bool feasible = true;
};

// Joint profit maximization (p_a - c_a)*eta_a + (p_l - c_l)*eta_l over the
// simplex with prices from the inverse demand; 2-D grid plus local zoom.
BenchmarkReport coordination_optimum(const ModelParams& params,
                                     int grid_n = 401);

// Non-cooperation: the database runs the information market alone.  The
// database profit equals the bargaining module's disagreement payoff exactly
// (one code path).
BenchmarkReport pure_information_market(const ModelParams& params,
                                        bool cost_adjusted = false);

// Two-stage competition with zero commission (RSS delta = 0 == WPS w = 0).
BenchmarkReport third_party_scheme(const ModelParams& params);

struct SensingParams {
  double g1 = 1.0;   // constant sensing gain: R_S = f + g1
  double c_s = 0.2;  // users' per-period sensing cost
};

// Sensing-market benchmark: users choose {leasing, sensing, basic}, the
// licensee alone prices p_l in Stage II, and Stage I bargains the commission
// with the database paid from commission only (disagreement (0,0)).
BenchmarkReport sensing_market_equilibrium(const ModelParams& params,
                                           const SensingParams& sensing,
                                           SchemeKind kind,
                                           const BargainingConfig& config = {});

struct EnergyCosts {
  double integrated = 0.0;  // eta_a * c_a
  double sensing = 0.0;     // eta_s * c_s
};

EnergyCosts energy_cost_comparison(const MarketShare& integrated_shares,
                                   const MarketShare& sensing_shares,
                                   const ModelParams& params,
                                   const SensingParams& sensing);

double social_welfare(const BenchmarkReport& report);

// Welfare recomputed from scratch at pinned shares/prices; the commission
// transfer cancels, so this is independent of delta and w.
double social_welfare_at(const MarketShare& shares, const PriceProfile& prices,
                         const CommissionScheme& scheme,
                         const ModelParams& params);

}  // namespace wsm

#endif
