#ifndef WSM_BARGAINING_HPP
#define WSM_BARGAINING_HPP

#include "wsm/competition.hpp"
#include "wsm/params.hpp"

namespace wsm {

struct BargainingConfig {
  // Subtract c_a * eta_a from the disagreement profit (the printed form is
  // plain revenue p_a * eta_a).
  bool cost_adjusted_disagreement = false;
  // Use the pairing exactly as printed, (U_db - U_sl0)(U_sl - U_db0), with
  // the crossed disagreement subscripts; default pairs each firm with its
  // own disagreement payoff.
  bool literal_pairing = false;
  int grid_steps = 201;
  Stage2Options stage2;
};

// Payoffs when Stage I fails: the licensee earns nothing and the database
// runs the pure information market alone (eta_l = 0, theta_la = 1).
struct DisagreementPoint {
  double u_licensee = 0.0;
  double u_database = 0.0;
  double p_info = 0.0;   // the database's optimal stand-alone price p_a
  double eta_a = 0.0;    // the corresponding market share
};

DisagreementPoint disagreement_point(const ModelParams& params,
                                     bool cost_adjusted = false);

struct NashProductEval {
  double product = 0.0;  // -inf sentinel when infeasible
  FirmPayoffs payoffs;
  bool feasible = false;
  StageIIReport stage2;
};

// Nash product at one commission value (delta under RSS, w under WPS); runs
// the Stage II solve internally.
NashProductEval nash_product(double x, const ModelParams& params,
                             SchemeKind kind,
                             const BargainingConfig& config = {});

struct BargainingOutcome {
  CommissionScheme scheme;  // with the solved delta* or w*
  StageIIReport stage2;
  double nash_product = 0.0;
  DisagreementPoint disagreement;
  bool feasible = false;
};

// Uniform grid over the commission domain ([0,1] for RSS, [0,Q_L] for WPS)
// plus golden-section refinement on the best bracketing cell.  When no grid
// point is feasible the disagreement outcome is returned with
// feasible = false.
BargainingOutcome solve_bargaining(SchemeKind kind, const ModelParams& params,
                                   const BargainingConfig& config = {});

}  // namespace wsm

#endif
