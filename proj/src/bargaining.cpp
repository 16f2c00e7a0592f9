#include "wsm/bargaining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wsm/errors.hpp"
#include "wsm/model.hpp"
#include "wsm/scalar_opt.hpp"

namespace wsm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kGainSlack = 1e-9;

// Stand-alone information market: share responding to a price p_a is the
// largest root of eta_a = 1 - p_a/g(eta_a) (the root the high-priority
// dynamics reach from eta_a = 1), or 0 when no root exists.
double info_market_share(double p_a, const ModelParams& params) {
  auto resid = [&](double ea) {
    return 1.0 - p_a / info_gain(ea, params) - ea;
  };
  if (resid(1.0) >= 0.0) return 1.0;
  const int coarse = 256;
  double hi = 1.0;
  for (int i = coarse - 1; i >= 0; --i) {
    const double ea = static_cast<double>(i) / coarse;
    if (resid(ea) >= 0.0) return bisect_root(resid, ea, hi, 1e-14, 250);
    hi = ea;
  }
  return 0.0;
}

struct Gains {
  double db = 0.0;
  double sl = 0.0;
};

Gains pairing_gains(const FirmPayoffs& payoffs, const DisagreementPoint& d,
                    bool literal) {
  // Printed pairing crosses the subscripts: the database is measured against
  // the licensee's disagreement payoff and vice versa.
  if (literal) return {payoffs.u_database - d.u_licensee,
                       payoffs.u_licensee - d.u_database};
  return {payoffs.u_database - d.u_database,
          payoffs.u_licensee - d.u_licensee};
}

NashProductEval eval_at(double x, SchemeKind kind, const ModelParams& params,
                        const DisagreementPoint& d,
                        const BargainingConfig& config) {
  NashProductEval out;
  const CommissionScheme scheme =
      kind == SchemeKind::revenue_share ? CommissionScheme::rss(x)
                                        : CommissionScheme::wps(x);
  out.stage2 = solve_stage2(scheme, params, config.stage2);
  out.payoffs = out.stage2.payoffs;
  const Gains gains = pairing_gains(out.payoffs, d, config.literal_pairing);
  out.feasible = gains.db >= -kGainSlack && gains.sl >= -kGainSlack;
  out.product = out.feasible ? gains.db * gains.sl : kNegInf;
  return out;
}

}  // namespace

DisagreementPoint disagreement_point(const ModelParams& params,
                                     bool cost_adjusted) {
  params.require_valid();
  DisagreementPoint d;
  const double hi = std::max(params.alpha2, params.beta2);
  auto objective = [&](double p_a) {
    const double ea = info_market_share(p_a, params);
    const double margin = cost_adjusted ? p_a - params.cost_advanced : p_a;
    return margin * ea;
  };
  const ScalarMax best = grid_golden_max(objective, 0.0, hi, 2001);
  d.p_info = best.x;
  d.eta_a = info_market_share(best.x, params);
  d.u_database = best.value;
  d.u_licensee = 0.0;
  return d;
}

NashProductEval nash_product(double x, const ModelParams& params,
                             SchemeKind kind, const BargainingConfig& config) {
  const DisagreementPoint d =
      disagreement_point(params, config.cost_adjusted_disagreement);
  return eval_at(x, kind, params, d, config);
}

BargainingOutcome solve_bargaining(SchemeKind kind, const ModelParams& params,
                                   const BargainingConfig& config) {
  if (config.grid_steps < 11)
    throw std::domain_error("grid_steps must be at least 11");
  params.require_valid();
  const DisagreementPoint d =
      disagreement_point(params, config.cost_adjusted_disagreement);
  const double hi = kind == SchemeKind::revenue_share ? 1.0 : params.q_leasing;
  const double h = hi / (config.grid_steps - 1);

  // The dominant-diagonal scan depends only on the final commission; skip it
  // during the search and evaluate it once at the solution.
  BargainingConfig search_config = config;
  search_config.stage2.check_dominant_diagonal = false;

  int best_i = -1;
  double best_v = kNegInf;
  for (int i = 0; i < config.grid_steps; ++i) {
    const double x = (i == config.grid_steps - 1) ? hi : i * h;
    const NashProductEval e = eval_at(x, kind, params, d, search_config);
    if (e.feasible && e.product > best_v) {
      best_v = e.product;
      best_i = i;
    }
  }

  BargainingOutcome out;
  out.disagreement = d;
  if (best_i < 0) {
    // No feasible commission: the parties walk away.
    out.feasible = false;
    out.scheme = kind == SchemeKind::revenue_share ? CommissionScheme::rss(0.0)
                                                   : CommissionScheme::wps(0.0);
    out.nash_product = 0.0;
    return out;
  }

  const double lo_x = std::max(0.0, (best_i - 1) * h);
  const double hi_x = std::min(hi, (best_i + 1) * h);
  auto product_of = [&](double x) {
    return eval_at(x, kind, params, d, search_config).product;
  };
  const ScalarMax refined = golden_section_max(product_of, lo_x, hi_x, 1e-10);
  double x_star = refined.x;
  if (refined.value < best_v) x_star = best_i * h;

  const NashProductEval e = eval_at(x_star, kind, params, d, config);
  out.scheme = kind == SchemeKind::revenue_share
                   ? CommissionScheme::rss(x_star)
                   : CommissionScheme::wps(x_star);
  out.stage2 = e.stage2;
  out.nash_product = e.product;
  out.feasible = e.feasible;
  return out;
}

}  // namespace wsm
