#include "wsm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wsm/errors.hpp"
#include "wsm/scalar_opt.hpp"

namespace wsm {

namespace {

// Unclamped congestion curve for solver internals: the one-variable
// reduction can momentarily push eta_l below 0, i.e. x = 1 - eta_l above 1.
double raw_f(double x, const ModelParams& p) {
  return p.alpha1 - p.beta1 * std::pow(x, p.gamma1);
}

double raw_g(double eta_a, const ModelParams& p) {
  if (eta_a <= 0.0) return p.alpha2;
  return p.alpha2 + (p.beta2 - p.alpha2) * std::pow(eta_a, p.gamma2);
}

Thresholds thresholds_at(double r_basic, double r_advanced,
                         const PriceProfile& prices, const ModelParams& p) {
  const double d_lb = p.q_leasing - r_basic;
  const double d_ab = r_advanced - r_basic;
  const double d_la = p.q_leasing - r_advanced;
  if (d_lb <= kCompareTol || d_ab <= kCompareTol || d_la <= kCompareTol)
    throw std::domain_error(
        "degenerate threshold denominator: Q_L > R_A > R_B violated");
  return {prices.p_l / d_lb, prices.p_a / d_ab,
          (prices.p_l - prices.p_a) / d_la};
}

MarketShare clamp_to_simplex(MarketShare s) {
  s.eta_l = std::clamp(s.eta_l, 0.0, 1.0);
  s.eta_a = std::clamp(s.eta_a, 0.0, 1.0 - s.eta_l);
  return s;
}

double map_residual(const MarketShare& point, const PriceProfile& prices,
                    const ModelParams& params) {
  const BestResponse next = best_response_map(point, prices, params);
  return std::max(std::abs(next.share.eta_l - point.eta_l),
                  std::abs(next.share.eta_a - point.eta_a));
}

}  // namespace

Thresholds thresholds(const MarketShare& shares, const PriceProfile& prices,
                      const ModelParams& params) {
  const ServiceUtilities u = service_utilities(shares, params);
  return thresholds_at(u.r_basic, u.r_advanced, prices, params);
}

BestResponse best_response_map(const MarketShare& shares,
                               const PriceProfile& prices,
                               const ModelParams& params) {
  const Thresholds t = thresholds(shares, prices, params);
  BestResponse out;
  out.share.eta_l = std::max(1.0 - std::max(t.la, t.lb), 0.0);
  out.share.eta_a = std::max(std::min(t.la, 1.0) - t.ab, 0.0);
  if (out.share.eta_l + out.share.eta_a > 1.0) {
    out.share.eta_a = 1.0 - out.share.eta_l;
    out.clipped = true;
  }
  return out;
}

DynamicsTrajectory iterate_dynamics(const MarketShare& init,
                                    const PriceProfile& prices,
                                    const ModelParams& params, double tol,
                                    int max_iter) {
  if (!(tol > 0.0)) throw std::domain_error("tol must be > 0");
  if (!init.in_simplex())
    throw std::domain_error("initial shares outside the simplex");
  DynamicsTrajectory traj;
  traj.points.push_back(init);
  MarketShare cur = init;
  for (int it = 1; it <= max_iter; ++it) {
    const BestResponse next = best_response_map(cur, prices, params);
    traj.clipped_any = traj.clipped_any || next.clipped;
    traj.residual = std::max(std::abs(next.share.eta_l - cur.eta_l),
                             std::abs(next.share.eta_a - cur.eta_a));
    cur = next.share;
    traj.points.push_back(cur);
    traj.iterations = it;
    if (traj.residual <= tol) {
      traj.converged = true;
      break;
    }
  }
  return traj;
}

UniquenessCertificate uniqueness_certificate(const PriceProfile& prices,
                                             const ModelParams& params,
                                             double grid_resolution) {
  if (!(grid_resolution > 0.0 && grid_resolution <= 0.1))
    throw std::domain_error("grid_resolution must lie in (0, 0.1]");
  params.require_valid();
  const int n = std::max(2, static_cast<int>(std::lround(1.0 / grid_resolution)));
  const double h = 1.0 / n;

  std::vector<double> rb(n + 1), g(n + 1), gp(n + 1);
  for (int i = 0; i <= n; ++i) {
    rb[i] = raw_f(1.0 - i * h, params);  // R_B at eta_l = i*h
    const double ea = i * h;
    g[i] = raw_g(ea, params);
    gp[i] = i == 0 ? 0.0
                   : params.gamma2 * (params.beta2 - params.alpha2) *
                         std::pow(ea, params.gamma2 - 1.0);
  }

  UniquenessCertificate cert;
  cert.grid_resolution = h;
  cert.kappa = 0.0;
  cert.lhs_max = -std::numeric_limits<double>::infinity();
  bool degenerate = false;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      const double r_a = rb[i] + g[j];
      const double d_la = params.q_leasing - r_a;
      if (d_la <= kCompareTol) {
        degenerate = true;
        continue;
      }
      const double t1 = std::max((prices.p_l - prices.p_a) / d_la, 0.0);
      const double t2 = prices.p_a / g[j];
      cert.kappa = std::max(cert.kappa, std::max(t1, t2));
      if (j >= 1) {
        const double lhs =
            (gp[j] / g[j]) * (params.q_leasing - rb[i]) / d_la;
        cert.lhs_max = std::max(cert.lhs_max, lhs);
      }
    }
  }
  if (degenerate) {
    cert.holds = false;
  } else if (cert.kappa <= 0.0) {
    cert.holds = true;  // 1/kappa = +inf convention
  } else {
    cert.holds = cert.lhs_max * cert.kappa <= 1.0 + kCompareTol;
  }
  return cert;
}

StageIIIEquilibrium solve_equilibrium(const PriceProfile& prices,
                                      const ModelParams& params, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("tol must be > 0");
  params.require_valid();
  const double x_tol = tol * 1e-2;  // two digits of slope margin
  const double verify_bound = 10.0 * tol;
  const double eps = kSlopeFloor;

  const double d0 = params.q_leasing - raw_f(1.0, params);
  if (d0 <= kCompareTol)
    throw std::domain_error("Q_L - R_B degenerate at eta_l = 0");
  const double t_lb0 = prices.p_l / d0;
  const double t_ab0 = prices.p_a / params.alpha2;  // g(0) = alpha2

  auto try_candidate = [&](MarketShare cand, EquilibriumBranch branch)
      -> std::pair<bool, StageIIIEquilibrium> {
    cand = clamp_to_simplex(cand);
    StageIIIEquilibrium eq;
    eq.shares = cand;
    eq.branch = branch;
    eq.fixed_point_residual = map_residual(cand, prices, params);
    return {eq.fixed_point_residual <= verify_bound, eq};
  };

  // Advanced-empty reduction: eta_l = 1 - p_l/(Q_L - f(1 - eta_l)).
  auto solve_empty = [&]() -> std::pair<bool, StageIIIEquilibrium> {
    auto resid = [&](double el) {
      return 1.0 - prices.p_l / (params.q_leasing - raw_f(1.0 - el, params)) -
             el;
    };
    if (resid(0.0) <= 0.0) return try_candidate({0.0, 0.0},
                                                EquilibriumBranch::advanced_empty);
    if (resid(1.0) >= 0.0) return try_candidate({1.0, 0.0},
                                                EquilibriumBranch::advanced_empty);
    const double el = bisect_root(resid, 0.0, 1.0, x_tol, 250);
    return try_candidate({el, 0.0}, EquilibriumBranch::advanced_empty);
  };

  // Advanced-active reduction: substitute eta_l = 1 - eta_a - p_a/g(eta_a)
  // and bisect theta_la - theta_ab - eta_a in eta_a.
  auto solve_active = [&]() -> std::pair<bool, StageIIIEquilibrium> {
    auto resid = [&](double ea) {
      const double gv = raw_g(ea, params);
      const double t_ab = prices.p_a / gv;
      const double el = 1.0 - ea - t_ab;
      const double r_a = raw_f(1.0 - el, params) + gv;
      const double d_la = params.q_leasing - r_a;
      if (d_la <= kCompareTol)
        return -std::numeric_limits<double>::infinity();
      return (prices.p_l - prices.p_a) / d_la - t_ab - ea;
    };
    const double ea = bisect_root(resid, eps, 1.0, x_tol, 250);
    const double el = 1.0 - ea - prices.p_a / raw_g(ea, params);
    return try_candidate({el, ea}, EquilibriumBranch::advanced_active);
  };

  // Leasing priced out entirely (theta_la >= 1): eta_a = 1 - p_a/g(eta_a),
  // taking the largest root, which the high-priority dynamics select.
  auto solve_info_only = [&]() -> std::pair<bool, StageIIIEquilibrium> {
    auto resid = [&](double ea) {
      return 1.0 - prices.p_a / raw_g(ea, params) - ea;
    };
    if (resid(1.0) >= 0.0) return try_candidate({0.0, 1.0},
                                                EquilibriumBranch::advanced_active);
    const int coarse = 256;
    double hi = 1.0;
    for (int i = coarse - 1; i >= 0; --i) {
      const double ea = static_cast<double>(i) / coarse;
      if (resid(ea) >= 0.0) {
        const double root = bisect_root(resid, ea, hi, x_tol, 250);
        return try_candidate({0.0, root}, EquilibriumBranch::advanced_active);
      }
      hi = ea;
    }
    return try_candidate({0.0, 0.0}, EquilibriumBranch::advanced_empty);
  };

  const bool empty_first = t_lb0 <= t_ab0;
  no_sign_change_error primary_failure("", 0.0, 0.0);
  bool have_failure = false;

  auto attempt = [&](int which) -> std::pair<bool, StageIIIEquilibrium> {
    try {
      switch (which) {
        case 0: return solve_empty();
        case 1: return solve_active();
        default: return solve_info_only();
      }
    } catch (const no_sign_change_error& e) {
      if (!have_failure) {
        primary_failure = e;
        have_failure = true;
      }
      return {false, StageIIIEquilibrium{}};
    }
  };

  const int order[3] = {empty_first ? 0 : 1, empty_first ? 1 : 0, 2};
  for (int which : order) {
    auto [ok, eq] = attempt(which);
    if (ok) return eq;
  }
  if (have_failure) throw primary_failure;
  throw no_sign_change_error(
      "solve_equilibrium: no branch produced a verified fixed point", 0.0,
      0.0);
}

double consumer_surplus(const MarketShare& shares, const PriceProfile& prices,
                        const ModelParams& params) {
  const ServiceUtilities u = service_utilities(shares, params);
  const Thresholds t = thresholds_at(u.r_basic, u.r_advanced, prices, params);
  const double consistency_tol = 1e-6;

  const bool advanced_active = shares.eta_a > kCompareTol;
  double b1, b2;
  if (advanced_active) {
    b1 = std::clamp(t.ab, 0.0, 1.0);
    b2 = std::clamp(t.la, 0.0, 1.0);
    if (std::abs(b2 - (1.0 - shares.eta_l)) > consistency_tol ||
        std::abs((b2 - b1) - shares.eta_a) > consistency_tol)
      throw ordering_error(
          "thresholds inconsistent with an advanced-active equilibrium");
  } else {
    b1 = b2 = std::clamp(t.lb, 0.0, 1.0);
    if (std::abs(b1 - (1.0 - shares.eta_l)) > consistency_tol)
      throw ordering_error(
          "thresholds inconsistent with an advanced-empty equilibrium");
  }

  double cs = u.r_basic * b1 * b1 / 2.0;
  if (advanced_active)
    cs += u.r_advanced * (b2 * b2 - b1 * b1) / 2.0 - prices.p_a * (b2 - b1);
  cs += u.q_leasing * (1.0 - b2 * b2) / 2.0 - prices.p_l * (1.0 - b2);
  return cs;
}

}  // namespace wsm
