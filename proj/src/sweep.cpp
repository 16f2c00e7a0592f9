#include "wsm/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "wsm/dynamics.hpp"
#include "wsm/model.hpp"

namespace wsm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kCertResolution = 5e-3;

double map_residual_at(const MarketShare& shares, const PriceProfile& prices,
                       const ModelParams& params) {
  const BestResponse next = best_response_map(shares, prices, params);
  return std::max(std::abs(next.share.eta_l - shares.eta_l),
                  std::abs(next.share.eta_a - shares.eta_a));
}

SweepRow row_from_benchmark(const BenchmarkReport& rep) {
  SweepRow row;
  row.scheme = rep.scheme_name;
  row.delta_or_w = rep.bargained ? rep.commission.value : kNan;
  row.shares = rep.shares;
  row.prices = rep.prices;
  row.u_sl = rep.u_licensee;
  row.u_db = rep.u_database;
  row.network_profit = rep.network_profit;
  row.social_welfare = rep.social_welfare;
  row.consumer_surplus = rep.consumer_surplus;
  row.energy_cost = rep.energy_cost;
  row.converged = true;
  return row;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

const char* const kSweepSchemaVersion = "wsmarket-sweep-v1";

EquilibriumReport run_three_stage(SchemeKind kind, const ModelParams& params,
                                  const BargainingConfig& config) {
  const BargainingOutcome bargain = solve_bargaining(kind, params, config);
  EquilibriumReport rep;
  rep.scheme = bargain.scheme;
  rep.feasible = bargain.feasible;
  rep.disagreement = bargain.disagreement;
  rep.nash_product = bargain.nash_product;

  if (!bargain.feasible) {
    // Disagreement outcome: the database falls back to the stand-alone
    // information market and no leasing is offered.
    const BenchmarkReport pure =
        pure_information_market(params, config.cost_adjusted_disagreement);
    rep.shares = pure.shares;
    rep.prices = pure.prices;
    rep.payoffs = {pure.u_licensee, pure.u_database};
    rep.consumer_surplus = pure.consumer_surplus;
    rep.network_profit = pure.network_profit;
    rep.social_welfare = pure.social_welfare;
    rep.fixed_point_residual = map_residual_at(rep.shares, rep.prices, params);
    rep.certificate =
        uniqueness_certificate(rep.prices, params, kCertResolution);
    return rep;
  }

  rep.shares = bargain.stage2.shares;
  rep.prices = bargain.stage2.prices;
  rep.payoffs = bargain.stage2.payoffs;
  rep.stage2_rounds = bargain.stage2.rounds;
  rep.stage2_converged = bargain.stage2.converged;
  rep.foc_residuals = bargain.stage2.foc_residuals;
  rep.dominant_diagonal_holds = bargain.stage2.dominant_diagonal_holds;
  rep.consumer_surplus = consumer_surplus(rep.shares, rep.prices, params);
  rep.network_profit = rep.payoffs.u_licensee + rep.payoffs.u_database;
  rep.social_welfare = rep.network_profit + rep.consumer_surplus;
  rep.fixed_point_residual = map_residual_at(rep.shares, rep.prices, params);
  rep.certificate = uniqueness_certificate(rep.prices, params, kCertResolution);
  return rep;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                const ModelParams& params,
                                const BargainingConfig& config) {
  if (spec.parameter != "lambda" && spec.parameter != "cost_leasing" &&
      spec.parameter != "cost_sensing")
    throw std::domain_error("unknown sweep parameter: " + spec.parameter);
  if (!(spec.step > 0.0) || !(spec.start < spec.stop))
    throw std::domain_error("sweep range requires start < stop and step > 0");
  if (spec.schemes.empty())
    throw std::domain_error("sweep needs at least one scheme");
  for (const std::string& s : spec.schemes)
    if (s != "rss" && s != "wps" && s != "coordination" && s != "pure_info" &&
        s != "third_party" && s != "sensing")
      throw std::domain_error("unknown sweep scheme: " + s);

  std::vector<double> grid;
  for (double v = spec.start; v <= spec.stop + 1e-9 * spec.step;
       v += spec.step)
    grid.push_back(std::min(v, spec.stop));

  std::vector<SweepRow> rows;
  for (double value : grid) {
    ModelParams p = params;
    SensingParams sensing = spec.sensing;
    if (spec.parameter == "lambda")
      p = params.with_lambda(value);
    else if (spec.parameter == "cost_leasing")
      p.cost_leasing = value;
    else
      sensing.c_s = value;

    auto emit = [&](const std::string& scheme_label, auto&& compute) {
      SweepRow row;
      row.parameter = spec.parameter;
      row.value = value;
      row.scheme = scheme_label;
      row.delta_or_w = kNan;
      row.shares = {kNan, kNan};
      row.prices = {kNan, kNan};
      row.u_sl = row.u_db = row.network_profit = kNan;
      row.social_welfare = row.consumer_surplus = row.energy_cost = kNan;
      try {
        compute(row);
      } catch (const std::exception& e) {
        row.error = e.what();
        row.converged = false;
      }
      rows.push_back(std::move(row));
    };

    for (const std::string& scheme : spec.schemes) {
      if (scheme == "rss" || scheme == "wps") {
        emit(scheme, [&](SweepRow& row) {
          const EquilibriumReport rep = run_three_stage(
              scheme == "rss" ? SchemeKind::revenue_share
                              : SchemeKind::wholesale,
              p, config);
          row.delta_or_w = rep.scheme.value;
          row.shares = rep.shares;
          row.prices = rep.prices;
          row.u_sl = rep.payoffs.u_licensee;
          row.u_db = rep.payoffs.u_database;
          row.network_profit = rep.network_profit;
          row.social_welfare = rep.social_welfare;
          row.consumer_surplus = rep.consumer_surplus;
          row.energy_cost = rep.shares.eta_a * p.cost_advanced;
          row.converged = rep.feasible ? rep.stage2_converged : true;
          row.cert_holds = rep.certificate.holds ? 1 : 0;
          row.dd_holds = rep.feasible ? (rep.dominant_diagonal_holds ? 1 : 0)
                                      : -1;
        });
      } else if (scheme == "coordination") {
        emit(scheme, [&](SweepRow& row) {
          row = row_from_benchmark(coordination_optimum(p));
          row.parameter = spec.parameter;
          row.value = value;
        });
      } else if (scheme == "pure_info") {
        emit(scheme, [&](SweepRow& row) {
          row = row_from_benchmark(
              pure_information_market(p, config.cost_adjusted_disagreement));
          row.parameter = spec.parameter;
          row.value = value;
        });
      } else if (scheme == "third_party") {
        emit(scheme, [&](SweepRow& row) {
          row = row_from_benchmark(third_party_scheme(p));
          row.parameter = spec.parameter;
          row.value = value;
        });
      } else {  // sensing: one row per commission scheme
        for (SchemeKind kind :
             {SchemeKind::revenue_share, SchemeKind::wholesale}) {
          emit(kind == SchemeKind::revenue_share ? "sensing_rss"
                                                 : "sensing_wps",
               [&](SweepRow& row) {
                 row = row_from_benchmark(
                     sensing_market_equilibrium(p, sensing, kind, config));
                 row.parameter = spec.parameter;
                 row.value = value;
               });
        }
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::vector<std::string>& columns) {
  struct Column {
    const char* name;
    std::string (*get)(const SweepRow&);
  };
  static const Column all_columns[] = {
      {"parameter", [](const SweepRow& r) { return r.parameter; }},
      {"value", [](const SweepRow& r) { return format_double(r.value); }},
      {"scheme", [](const SweepRow& r) { return r.scheme; }},
      {"delta_or_w",
       [](const SweepRow& r) { return format_double(r.delta_or_w); }},
      {"eta_l", [](const SweepRow& r) { return format_double(r.shares.eta_l); }},
      {"eta_a", [](const SweepRow& r) { return format_double(r.shares.eta_a); }},
      {"p_l", [](const SweepRow& r) { return format_double(r.prices.p_l); }},
      {"p_a", [](const SweepRow& r) { return format_double(r.prices.p_a); }},
      {"u_sl", [](const SweepRow& r) { return format_double(r.u_sl); }},
      {"u_db", [](const SweepRow& r) { return format_double(r.u_db); }},
      {"network_profit",
       [](const SweepRow& r) { return format_double(r.network_profit); }},
      {"social_welfare",
       [](const SweepRow& r) { return format_double(r.social_welfare); }},
      {"consumer_surplus",
       [](const SweepRow& r) { return format_double(r.consumer_surplus); }},
      {"energy_cost",
       [](const SweepRow& r) { return format_double(r.energy_cost); }},
      {"converged",
       [](const SweepRow& r) { return std::string(r.converged ? "1" : "0"); }},
      {"cert_holds",
       [](const SweepRow& r) {
         return r.cert_holds < 0 ? std::string()
                                 : std::string(r.cert_holds ? "1" : "0");
       }},
      {"dd_holds",
       [](const SweepRow& r) {
         return r.dd_holds < 0 ? std::string()
                               : std::string(r.dd_holds ? "1" : "0");
       }},
      {"error", [](const SweepRow& r) { return r.error; }},
  };

  std::vector<const Column*> selected;
  if (columns.empty()) {
    for (const Column& c : all_columns) selected.push_back(&c);
  } else {
    for (const std::string& want : columns) {
      bool found = false;
      for (const Column& c : all_columns)
        if (want == c.name) {
          selected.push_back(&c);
          found = true;
          break;
        }
      if (!found) throw std::domain_error("unknown sweep column: " + want);
    }
  }

  out << "# " << kSweepSchemaVersion << "\n";
  for (size_t i = 0; i < selected.size(); ++i)
    out << (i ? "," : "") << selected[i]->name;
  out << "\n";
  for (const SweepRow& row : rows) {
    for (size_t i = 0; i < selected.size(); ++i)
      out << (i ? "," : "") << selected[i]->get(row);
    out << "\n";
  }
}

}  // namespace wsm
