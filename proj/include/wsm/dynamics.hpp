#ifndef WSM_DYNAMICS_HPP
#define WSM_DYNAMICS_HPP

#include <vector>

#include "wsm/model.hpp"
#include "wsm/params.hpp"

namespace wsm {

// User-type thresholds of the subscription game, unclamped (they may fall
// outside [0,1]; the best-response map does the clamping).
struct Thresholds {
  double lb = 0.0;  // indifferent between leasing and basic
  double ab = 0.0;  // indifferent between advanced and basic
  double la = 0.0;  // indifferent between leasing and advanced
};

// theta_lb = p_l/(Q_L - R_B), theta_ab = p_a/(R_A - R_B),
// theta_la = (p_l - p_a)/(Q_L - R_A).  Requires Q_L > R_A > R_B at the point
// and denominators above kCompareTol.
Thresholds thresholds(const MarketShare& shares, const PriceProfile& prices,
                      const ModelParams& params);

struct BestResponse {
  MarketShare share;
  bool clipped = false;  // pair exceeded the simplex and eta_a was reduced
};

// One synchronous best-response round: eta_l+ = max{1 - max{la, lb}, 0},
// eta_a+ = max{min{la, 1} - ab, 0}, clipped into the simplex.
BestResponse best_response_map(const MarketShare& shares,
                               const PriceProfile& prices,
                               const ModelParams& params);

struct DynamicsTrajectory {
  std::vector<MarketShare> points;  // includes the initial point
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // max coordinate change at termination
  bool clipped_any = false;
};

DynamicsTrajectory iterate_dynamics(const MarketShare& init,
                                    const PriceProfile& prices,
                                    const ModelParams& params,
                                    double tol = 1e-10, int max_iter = 100000);

// Grid certificate for the sufficient uniqueness/convergence condition:
//   max over Omega of (g'/g) * (Q_L - R_B)/(Q_L - R_A)  <=  1/kappa,
//   kappa = max over Omega of max{(p_l - p_a)/(Q_L - R_A), p_a/(R_A - R_B)}
// (negative first term clamped at 0; kappa = 0 means 1/kappa = +inf).
// A grid max is a lower bound on the true max, so `holds` is advisory.
struct UniquenessCertificate {
  double kappa = 0.0;
  double lhs_max = 0.0;
  bool holds = false;
  double grid_resolution = 0.0;
};

UniquenessCertificate uniqueness_certificate(const PriceProfile& prices,
                                             const ModelParams& params,
                                             double grid_resolution);

enum class EquilibriumBranch { advanced_active, advanced_empty };

struct StageIIIEquilibrium {
  MarketShare shares;
  EquilibriumBranch branch = EquilibriumBranch::advanced_active;
  double fixed_point_residual = 0.0;  // ||map(shares) - shares||_inf
};

// Solves the market-equilibrium fixed point by bisection on the one-variable
// reduction.  Branch test: theta_lb at eta_l=0 vs theta_ab at eta_a=0 (ties
// go to the advanced-empty branch).  The returned point always satisfies
// best_response_map(point) = point within 10*tol.
StageIIIEquilibrium solve_equilibrium(const PriceProfile& prices,
                                      const ModelParams& params,
                                      double tol = 1e-12);

// Closed-form piecewise-quadratic consumer surplus at an equilibrium point.
// Throws ordering_error when the thresholds are inconsistent with the
// equilibrium branch implied by the shares.
double consumer_surplus(const MarketShare& shares, const PriceProfile& prices,
                        const ModelParams& params);

}  // namespace wsm

#endif
