#include "wsm/competition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wsm/errors.hpp"
#include "wsm/scalar_opt.hpp"

namespace wsm {

namespace {

constexpr double kFocStep = 1e-5;
constexpr double kFdSlack = 1e-6;  // noise floor of central differences

double leasing_revenue_term(double eta_l, const ModelParams& p) {
  // (1 - eta_l) * (Q_L - f(1 - eta_l)); the eta_a-dependence of p_l is the
  // separate additive term -eta_a * g(eta_a).
  const double x = 1.0 - eta_l;
  return x * (p.q_leasing - (p.alpha1 - p.beta1 * std::pow(x, p.gamma1)));
}

// Payoffs as smooth functions on the simplex (used by the best responses and
// the finite-difference checks).
double licensee_payoff(double eta_l, double eta_a,
                       const CommissionScheme& scheme, const ModelParams& p) {
  const double p_l = leasing_revenue_term(eta_l, p) -
                     eta_a * info_gain(eta_a, p);
  if (scheme.kind == SchemeKind::revenue_share)
    return (p_l - p.cost_leasing) * eta_l * (1.0 - scheme.value);
  return (p_l - scheme.value - p.cost_leasing) * eta_l;
}

double database_payoff(double eta_l, double eta_a,
                       const CommissionScheme& scheme, const ModelParams& p) {
  const double g = info_gain(eta_a, p);
  const double p_a = (1.0 - eta_l - eta_a) * g;
  const double info = (p_a - p.cost_advanced) * eta_a;
  if (scheme.kind == SchemeKind::revenue_share) {
    const double p_l = leasing_revenue_term(eta_l, p) - eta_a * g;
    return info + (p_l - p.cost_leasing) * eta_l * scheme.value;
  }
  return info + scheme.value * eta_l;
}

bool is_interior(double x, double lo, double hi) {
  return x > lo + 1e-7 && x < hi - 1e-7;
}

}  // namespace

PriceProfile shares_to_prices(const MarketShare& shares,
                              const ModelParams& params) {
  if (!shares.in_simplex())
    throw std::domain_error("shares outside the market-share simplex");
  const double g = info_gain(std::clamp(shares.eta_a, 0.0, 1.0), params);
  const double f =
      congestion_utility(std::clamp(1.0 - shares.eta_l, 0.0, 1.0), params);
  PriceProfile prices;
  prices.p_a = shares.eta_b() * g;
  prices.p_l = (1.0 - shares.eta_l) * (params.q_leasing - f - g) + prices.p_a;
  return prices;
}

FirmPayoffs firm_payoffs(const MarketShare& shares,
                         const CommissionScheme& scheme,
                         const ModelParams& params) {
  scheme.require_valid(params);
  const PriceProfile prices = shares_to_prices(shares, params);
  FirmPayoffs out;
  const double leasing_margin = (prices.p_l - params.cost_leasing) * shares.eta_l;
  const double info_margin = (prices.p_a - params.cost_advanced) * shares.eta_a;
  if (scheme.kind == SchemeKind::revenue_share) {
    out.u_licensee = leasing_margin * (1.0 - scheme.value);
    out.u_database = info_margin + leasing_margin * scheme.value;
  } else {
    out.u_licensee = (prices.p_l - scheme.value - params.cost_leasing) *
                     shares.eta_l;
    out.u_database = info_margin + scheme.value * shares.eta_l;
  }
  return out;
}

double licensee_best_response(double eta_a, const CommissionScheme& scheme,
                              const ModelParams& params, int grid_points) {
  if (!(eta_a >= 0.0 && eta_a <= 1.0))
    throw std::domain_error("eta_a must lie in [0,1]");
  // Hoist the opponent-dependent constant; under RSS drop the (1 - delta)
  // scaling so the argmax is well defined for every delta including 1.
  const double cross = eta_a * info_gain(eta_a, params);
  const double cost = params.cost_leasing +
                      (scheme.kind == SchemeKind::wholesale ? scheme.value
                                                            : 0.0);
  auto objective = [&](double eta_l) {
    return (leasing_revenue_term(eta_l, params) - cross - cost) * eta_l;
  };
  return grid_golden_max(objective, 0.0, 1.0 - eta_a, grid_points).x;
}

double database_best_response(double eta_l, const CommissionScheme& scheme,
                              const ModelParams& params, int grid_points) {
  if (!(eta_l >= 0.0 && eta_l <= 1.0))
    throw std::domain_error("eta_l must lie in [0,1]");
  const double base = leasing_revenue_term(eta_l, params);
  const bool rss = scheme.kind == SchemeKind::revenue_share;
  auto objective = [&](double eta_a) {
    const double g = info_gain(eta_a, params);
    double v = ((1.0 - eta_l - eta_a) * g - params.cost_advanced) * eta_a;
    if (rss)
      v += (base - eta_a * g - params.cost_leasing) * eta_l * scheme.value;
    return v;
  };
  return grid_golden_max(objective, 0.0, 1.0 - eta_l, grid_points).x;
}

StageIIReport solve_stage2(const CommissionScheme& scheme,
                           const ModelParams& params,
                           const Stage2Options& opts) {
  scheme.require_valid(params);
  params.require_valid();
  if (!(opts.tol > 0.0)) throw std::domain_error("tol must be > 0");

  StageIIReport rep;
  MarketShare cur{0.0, 1.0};  // database starts from its largest share
  MarketShare prev2 = cur;
  double osc_gap = std::numeric_limits<double>::infinity();
  for (int round = 1; round <= opts.max_rounds; ++round) {
    MarketShare next;
    next.eta_l = licensee_best_response(cur.eta_a, scheme, params,
                                        opts.br_grid);
    next.eta_a = database_best_response(cur.eta_l, scheme, params,
                                        opts.br_grid);
    const double move = std::max(std::abs(next.eta_l - cur.eta_l),
                                 std::abs(next.eta_a - cur.eta_a));
    osc_gap = std::max(std::abs(next.eta_l - prev2.eta_l),
                       std::abs(next.eta_a - prev2.eta_a));
    prev2 = cur;
    cur = next;
    if (opts.trace) opts.trace->push_back(cur);
    rep.rounds = round;
    if (move <= opts.tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged) {
    const bool period2 = osc_gap <= 100.0 * opts.tol;
    throw non_convergence_error("solve_stage2: best-response iteration did "
                                "not converge",
                                rep.rounds, period2);
  }

  rep.shares = cur;
  rep.prices = shares_to_prices(cur, params);
  rep.payoffs = firm_payoffs(cur, scheme, params);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.foc_residuals = {nan, nan};
  if (is_interior(cur.eta_l, 0.0, 1.0 - cur.eta_a)) {
    const double x = 1.0 - cur.eta_l;
    const double f = params.alpha1 - params.beta1 * std::pow(x, params.gamma1);
    const double fp = -params.beta1 * params.gamma1 *
                      std::pow(x, params.gamma1 - 1.0);
    double r = (1.0 - 2.0 * cur.eta_l) * (params.q_leasing - f) +
               x * cur.eta_l * fp - cur.eta_a * info_gain(cur.eta_a, params) -
               params.cost_leasing;
    if (scheme.kind == SchemeKind::wholesale) r -= scheme.value;
    rep.foc_residuals[0] = r;
  }
  if (is_interior(cur.eta_a, 0.0, 1.0 - cur.eta_l)) {
    const double g = info_gain(cur.eta_a, params);
    const double gp = info_gain_slope(cur.eta_a, params).value;
    double r = (1.0 - cur.eta_l - cur.eta_a) * (g + cur.eta_a * gp) -
               cur.eta_a * g - params.cost_advanced;
    if (scheme.kind == SchemeKind::revenue_share)
      r -= cur.eta_l * scheme.value * (g + cur.eta_a * gp);
    rep.foc_residuals[1] = r;
  }

  rep.dominant_diagonal_holds =
      opts.check_dominant_diagonal
          ? dominant_diagonal_check(scheme, params, opts.dd_resolution)
          : false;
  return rep;
}

bool dominant_diagonal_check(const CommissionScheme& scheme,
                             const ModelParams& params,
                             double grid_resolution) {
  if (!(grid_resolution > 0.0 && grid_resolution <= 0.1))
    throw std::domain_error("grid_resolution must lie in (0, 0.1]");
  const double h = kFocStep;
  const int n = std::max(2, static_cast<int>(std::lround(1.0 / grid_resolution)));
  const double step = 1.0 / n;

  auto second_own = [&](auto&& payoff, double x, double y, bool in_x) {
    if (in_x)
      return (payoff(x + h, y) - 2.0 * payoff(x, y) + payoff(x - h, y)) /
             (h * h);
    return (payoff(x, y + h) - 2.0 * payoff(x, y) + payoff(x, y - h)) /
           (h * h);
  };
  auto mixed = [&](auto&& payoff, double x, double y) {
    return (payoff(x + h, y + h) - payoff(x + h, y - h) -
            payoff(x - h, y + h) + payoff(x - h, y - h)) /
           (4.0 * h * h);
  };
  auto u_sl = [&](double el, double ea) {
    return licensee_payoff(el, ea, scheme, params);
  };
  auto u_db = [&](double el, double ea) {
    return database_payoff(el, ea, scheme, params);
  };

  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i * step + j * step <= 1.0 + kCompareTol && j <= n; ++j) {
      double el = std::clamp(i * step, 2.0 * h, 1.0 - 2.0 * h);
      double ea = std::clamp(j * step, 2.0 * h, 1.0 - 2.0 * h);
      if (el + ea > 1.0 - 2.0 * h) continue;  // FD stencil must stay in Omega
      const double sl_own = second_own(u_sl, el, ea, true);
      const double sl_mix = mixed(u_sl, el, ea);
      if (sl_own > sl_mix + kFdSlack) return false;
      const double db_own = second_own(u_db, el, ea, false);
      const double db_mix = mixed(u_db, el, ea);
      if (db_own > db_mix + kFdSlack) return false;
    }
  }
  return true;
}

}  // namespace wsm
