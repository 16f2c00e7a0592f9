#ifndef WSM_SWEEP_HPP
#define WSM_SWEEP_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "wsm/bargaining.hpp"
#include "wsm/benchmarks.hpp"
#include "wsm/params.hpp"

namespace wsm {

// Consolidated result of one full Stage I -> II -> III solve.
struct EquilibriumReport {
  CommissionScheme scheme;
  bool feasible = true;  // false: bargaining failed, disagreement outcome
  MarketShare shares;
  PriceProfile prices;
  FirmPayoffs payoffs;
  double consumer_surplus = 0.0;
  double network_profit = 0.0;
  double social_welfare = 0.0;
  double nash_product = 0.0;
  DisagreementPoint disagreement;
  int stage2_rounds = 0;
  bool stage2_converged = false;
  std::array<double, 2> foc_residuals{0.0, 0.0};
  bool dominant_diagonal_holds = false;
  double fixed_point_residual = 0.0;  // Stage III map residual at the solution
  UniquenessCertificate certificate;
};

EquilibriumReport run_three_stage(SchemeKind kind, const ModelParams& params,
                                  const BargainingConfig& config = {});

struct SweepSpec {
  std::string parameter;  // lambda | cost_leasing | cost_sensing
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
  // subset of {rss, wps, coordination, pure_info, third_party, sensing};
  // "sensing" expands to one row per commission scheme
  std::vector<std::string> schemes;
  std::vector<std::string> columns;  // empty = all columns
  SensingParams sensing;             // g1 and the off-sweep sensing cost
};

struct SweepRow {
  std::string parameter;
  double value = 0.0;
  std::string scheme;
  double delta_or_w = 0.0;  // NaN for non-bargained schemes
  MarketShare shares;
  PriceProfile prices;
  double u_sl = 0.0;
  double u_db = 0.0;
  double network_profit = 0.0;
  double social_welfare = 0.0;
  double consumer_surplus = 0.0;
  double energy_cost = 0.0;
  bool converged = false;
  int cert_holds = -1;  // -1 n/a, else 0/1
  int dd_holds = -1;
  std::string error;  // per-row failure; the sweep continues
};

// Runs the full chain for every (grid value, scheme) pair in deterministic
// order.  Row failures land in the error column instead of aborting.
std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                const ModelParams& params,
                                const BargainingConfig& config = {});

extern const char* const kSweepSchemaVersion;

// Fixed, versioned CSV schema; an empty `columns` selection writes all.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::vector<std::string>& columns = {});

}  // namespace wsm

#endif
