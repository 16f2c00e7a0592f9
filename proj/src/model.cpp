#include "wsm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wsm {

namespace {

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::domain_error(std::string(name) + " must lie in [0,1]");
}

}  // namespace

double congestion_utility(double x, const ModelParams& params) {
  require_unit_interval(x, "unlicensed-user fraction");
  return params.alpha1 - params.beta1 * std::pow(x, params.gamma1);
}

double info_gain(double eta_a, const ModelParams& params) {
  require_unit_interval(eta_a, "eta_a");
  if (eta_a == 0.0) return params.alpha2;  // 0^gamma2 with gamma2 > 0
  return params.alpha2 +
         (params.beta2 - params.alpha2) * std::pow(eta_a, params.gamma2);
}

InfoGainSlope info_gain_slope(double eta_a, const ModelParams& params) {
  require_unit_interval(eta_a, "eta_a");
  const double coeff = params.gamma2 * (params.beta2 - params.alpha2);
  if (eta_a < kSlopeFloor) {
    if (coeff == 0.0) return {0.0, false};
    if (params.gamma2 == 1.0) return {coeff, false};
    return {coeff > 0.0 ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity(),
            true};
  }
  return {coeff * std::pow(eta_a, params.gamma2 - 1.0), false};
}

ServiceUtilities service_utilities(const MarketShare& shares,
                                   const ModelParams& params) {
  if (!shares.in_simplex())
    throw std::domain_error("shares outside the market-share simplex");
  ServiceUtilities u;
  u.r_basic = congestion_utility(std::clamp(1.0 - shares.eta_l, 0.0, 1.0),
                                 params);
  u.r_advanced = u.r_basic + info_gain(std::clamp(shares.eta_a, 0.0, 1.0),
                                       params);
  u.q_leasing = params.q_leasing;
  u.ordering_ok = u.q_leasing > u.r_advanced && u.r_advanced > u.r_basic;
  return u;
}

double user_payoff(double theta, Service choice, const MarketShare& shares,
                   const PriceProfile& prices, const ModelParams& params) {
  require_unit_interval(theta, "theta");
  const ServiceUtilities u = service_utilities(shares, params);
  switch (choice) {
    case Service::basic:
      return theta * u.r_basic;
    case Service::advanced:
      return theta * u.r_advanced - prices.p_a;
    case Service::leasing:
      return theta * u.q_leasing - prices.p_l;
    case Service::sensing:
      throw std::domain_error(
          "sensing payoffs live in the sensing-market benchmark");
  }
  return 0.0;
}

AssumptionReport validate_params(const ModelParams& params) {
  params.require_valid();  // structural invariants; throws when g can hit 0
  AssumptionReport rep;

  const double f_peak = params.alpha1 + std::max(params.alpha2, params.beta2);
  rep.separation.witness = f_peak;
  rep.separation.pass = params.q_leasing > f_peak;
  rep.separation.note = rep.separation.pass
                            ? "Q_L exceeds max attainable R_A"
                            : "Q_L <= alpha1 + max(alpha2, beta2)";

  rep.congestion_shape.witness = params.beta1;
  rep.congestion_shape.pass = params.beta1 >= 0.0 && params.gamma1 > 0.0 &&
                              params.gamma1 <= 1.0;
  rep.congestion_shape.note = "f non-increasing and convex on [0,1]";

  rep.info_gain_monotone.witness = params.beta2 - params.alpha2;
  rep.info_gain_monotone.pass = params.beta2 >= params.alpha2;
  rep.info_gain_monotone.note =
      rep.info_gain_monotone.pass
          ? "g non-decreasing"
          : "negative-dominant regime, monotonicity of g violated";

  rep.info_gain_positive.witness = std::min(params.alpha2, params.beta2);
  rep.info_gain_positive.pass = rep.info_gain_positive.witness > 0.0;
  rep.info_gain_positive.note = "g stays positive on [0,1]";

  return rep;
}

DominanceReport externality_dominance(const ModelParams& params,
                                      const MarketShare& shares) {
  if (!shares.in_simplex())
    throw std::domain_error("shares outside the market-share simplex");
  if (!(shares.eta_a > 0.0))
    throw std::domain_error(
        "dominance indicator is unbounded at eta_a = 0");
  const double unlicensed = 1.0 - shares.eta_l;  // eta_a + eta_b
  DominanceReport rep;
  rep.indicator =
      -params.gamma1 * params.beta1 * std::pow(unlicensed, params.gamma1 - 1.0) +
      params.gamma2 * params.beta2 * std::pow(shares.eta_a, params.gamma2 - 1.0);
  rep.lambda = params.beta1 > 0.0 ? params.beta2 / params.beta1
                                  : std::numeric_limits<double>::infinity();
  rep.lambda_threshold =
      std::pow(unlicensed / shares.eta_a, 1.0 - params.gamma1);
  if (rep.indicator > kCompareTol)
    rep.kind = Dominance::positive_dominant;
  else if (rep.indicator < -kCompareTol)
    rep.kind = Dominance::negative_dominant;
  else
    rep.kind = Dominance::neutral;
  return rep;
}

}  // namespace wsm
