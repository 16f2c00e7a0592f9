#ifndef WSM_PARAMS_HPP
#define WSM_PARAMS_HPP

#include <string>

namespace wsm {

// All scalar parameters of the integrated spectrum-and-information market.
//
// The congestion curve is f(x) = alpha1 - beta1 * x^gamma1 with x the
// fraction of users on unlicensed channels, and the information-value curve
// is g(eta_a) = alpha2 + (beta2 - alpha2) * eta_a^gamma2.  Defaults follow
// the reference numerical study (lambda = beta2/beta1 = 1.8).
struct ModelParams {
  double alpha1 = 1.0;          // utility with zero congestion
  double beta1 = 1.0;           // congestion depth
  double gamma1 = 0.6;          // congestion elasticity, in (0,1]
  double alpha2 = 1.0;          // minimum information gain, > 0
  double beta2 = 1.8;           // maximum information gain, > 0
  double gamma2 = 0.6;          // information elasticity, in (0,1]
  double q_leasing = 6.0;       // leasing-service utility Q_L
  double cost_advanced = 0.2;   // database cost per advanced subscriber
  double cost_leasing = 0.9;    // licensee cost per lessee

  // Degree of network externality, beta2/beta1.  Only defined for beta1 > 0.
  double lambda() const;

  // Copy with beta2 = lambda * beta1 (the lambda-sweep construction).
  ModelParams with_lambda(double lambda) const;

  // Throws std::domain_error when any structural invariant fails
  // (elasticities outside (0,1], non-positive information gain, negative
  // depths or costs, non-finite values).
  void require_valid() const;
};

// Point (eta_l, eta_a) in the market-share simplex Omega.
struct MarketShare {
  double eta_l = 0.0;  // leasing fraction
  double eta_a = 0.0;  // advanced-information fraction

  double eta_b() const { return 1.0 - eta_l - eta_a; }
  bool in_simplex(double tol = 1e-12) const;
};

struct PriceProfile {
  double p_l = 0.0;  // licensee's channel price
  double p_a = 0.0;  // database's information price
};

enum class Service { basic, advanced, leasing, sensing };

enum class SchemeKind { revenue_share, wholesale };

// Commission agreed in Stage I: a revenue share delta in [0,1] under RSS,
// or a per-transaction wholesale price w in [0, Q_L] under WPS.
struct CommissionScheme {
  SchemeKind kind = SchemeKind::revenue_share;
  double value = 0.0;

  static CommissionScheme rss(double delta) {
    return {SchemeKind::revenue_share, delta};
  }
  static CommissionScheme wps(double w) { return {SchemeKind::wholesale, w}; }

  // Throws std::domain_error when the commission lies outside its domain.
  void require_valid(const ModelParams& params) const;
};

std::string to_string(SchemeKind kind);
std::string to_string(const CommissionScheme& scheme);

}  // namespace wsm

#endif
