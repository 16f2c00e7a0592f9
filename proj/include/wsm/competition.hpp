#ifndef WSM_COMPETITION_HPP
#define WSM_COMPETITION_HPP

#include <array>
#include <vector>

#include "wsm/dynamics.hpp"
#include "wsm/params.hpp"

namespace wsm {

// Inverse demand of the share-space competition game:
//   p_a = (1 - eta_l - eta_a) * g(eta_a)
//   p_l = (1 - eta_l) * (Q_L - f(1-eta_l) - g(eta_a)) + p_a
// Evaluated at eta_a = 0 this reduces to the advanced-empty inverse
// p_l = (1 - eta_l) * (Q_L - f(1 - eta_l)).
PriceProfile shares_to_prices(const MarketShare& shares,
                              const ModelParams& params);

struct FirmPayoffs {
  double u_licensee = 0.0;
  double u_database = 0.0;
};

// Firm profits at a share point, prices implied by shares_to_prices.
// RSS(delta):  U_sl = (p_l - c_l) * eta_l * (1 - delta)
//              U_db = (p_a - c_a) * eta_a + (p_l - c_l) * eta_l * delta
// WPS(w):      U_sl = (p_l - w - c_l) * eta_l
//              U_db = (p_a - c_a) * eta_a + w * eta_l
FirmPayoffs firm_payoffs(const MarketShare& shares,
                         const CommissionScheme& scheme,
                         const ModelParams& params);

// Licensee's best market share against a fixed database share, argmax over
// [0, 1 - eta_a]: dense grid scan plus golden-section refinement on the
// bracketing cell.  Under RSS the argmax is invariant to delta (positive
// scaling), so the unscaled leasing profit is maximized.
double licensee_best_response(double eta_a, const CommissionScheme& scheme,
                              const ModelParams& params,
                              int grid_points = 2001);

// Database mirror over eta_a in [0, 1 - eta_l].
double database_best_response(double eta_l, const CommissionScheme& scheme,
                              const ModelParams& params,
                              int grid_points = 2001);

struct Stage2Options {
  double tol = 1e-9;
  int max_rounds = 10000;
  int br_grid = 2001;
  bool check_dominant_diagonal = true;
  double dd_resolution = 0.02;
  std::vector<MarketShare>* trace = nullptr;  // per-round iterates, if set
};

struct StageIIReport {
  MarketShare shares;
  PriceProfile prices;
  FirmPayoffs payoffs;
  int rounds = 0;
  bool converged = false;
  // Interior first-order-condition residuals (licensee, database); NaN when
  // the corresponding coordinate sits on a boundary.
  std::array<double, 2> foc_residuals{0.0, 0.0};
  bool dominant_diagonal_holds = false;
};

// Jacobi best-response iteration from (eta_l, eta_a) = (0, 1): both firms
// respond to the opponent's previous-round share.  Throws
// non_convergence_error (with an oscillation flag from a period-2 check)
// after max_rounds.
StageIIReport solve_stage2(const CommissionScheme& scheme,
                           const ModelParams& params,
                           const Stage2Options& opts = {});

// Finite-difference check (step 1e-5) of the dominant-diagonal uniqueness
// condition over an Omega grid: own second partial <= mixed partial for both
// firms at every interior grid point.
bool dominant_diagonal_check(const CommissionScheme& scheme,
                             const ModelParams& params,
                             double grid_resolution);

}  // namespace wsm

#endif
