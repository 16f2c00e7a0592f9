#ifndef WSM_MODEL_HPP
#define WSM_MODEL_HPP

#include <string>

#include "wsm/params.hpp"

namespace wsm {

// Derivative consumers never evaluate g' below this share; the one-sided
// limit at eta_a = 0 is unbounded whenever beta2 != alpha2 and gamma2 < 1.
inline constexpr double kSlopeFloor = 1e-9;

// Absolute tolerance for threshold comparisons throughout the solvers.
inline constexpr double kCompareTol = 1e-12;

// Congestion utility f(x) = alpha1 - beta1 * x^gamma1 for the unlicensed-user
// fraction x in [0,1].  R_B(eta_l) = congestion_utility(1 - eta_l).
double congestion_utility(double x, const ModelParams& params);

// Information value g(eta_a) = alpha2 + (beta2 - alpha2) * eta_a^gamma2.
double info_gain(double eta_a, const ModelParams& params);

struct InfoGainSlope {
  double value = 0.0;
  bool unbounded = false;  // one-sided limit at eta_a below kSlopeFloor
};

// Analytic derivative g'(eta_a) = gamma2 * (beta2 - alpha2) * eta_a^(gamma2-1).
InfoGainSlope info_gain_slope(double eta_a, const ModelParams& params);

struct ServiceUtilities {
  double r_basic = 0.0;
  double r_advanced = 0.0;
  double q_leasing = 0.0;
  bool ordering_ok = false;  // Q_L > R_A > R_B at this share point
};

ServiceUtilities service_utilities(const MarketShare& shares,
                                   const ModelParams& params);

// Payoff of a type-theta user under the given choice: theta*R_B for basic,
// theta*R_A - p_a for advanced, theta*Q_L - p_l for leasing.
double user_payoff(double theta, Service choice, const MarketShare& shares,
                   const PriceProfile& prices, const ModelParams& params);

struct AssumptionCheck {
  bool pass = false;
  double witness = 0.0;
  std::string note;
};

// Pass/fail report for the model's standing assumptions.  A failing check is
// informational, not fatal: the lambda sweeps deliberately run parameter
// points where g is decreasing.
struct AssumptionReport {
  AssumptionCheck separation;         // Q_L > alpha1 + max(alpha2, beta2)
  AssumptionCheck congestion_shape;   // f non-increasing convex (sign checks)
  AssumptionCheck info_gain_monotone; // beta2 >= alpha2
  AssumptionCheck info_gain_positive; // min(alpha2, beta2) > 0

  bool all_pass() const {
    return separation.pass && congestion_shape.pass &&
           info_gain_monotone.pass && info_gain_positive.pass;
  }
};

// Throws std::domain_error only when g can reach zero (the advanced/basic
// threshold would be undefined); every other violation is reported.
AssumptionReport validate_params(const ModelParams& params);

enum class Dominance { positive_dominant, negative_dominant, neutral };

struct DominanceReport {
  Dominance kind = Dominance::neutral;
  double indicator = 0.0;         // -g1*b1*(ea+eb)^(g1-1) + g2*b2*ea^(g2-1)
  double lambda = 0.0;            // beta2/beta1
  double lambda_threshold = 0.0;  // ((ea+eb)/ea)^(1-gamma1)
};

// Classifies which network externality dominates at a share point, using the
// study's printed indicator (coefficient beta2, not beta2 - alpha2; the exact
// dR_A/deta_a is available separately via info_gain_slope).
DominanceReport externality_dominance(const ModelParams& params,
                                      const MarketShare& shares);

}  // namespace wsm

#endif
