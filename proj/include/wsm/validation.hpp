#ifndef WSM_VALIDATION_HPP
#define WSM_VALIDATION_HPP

#include <cstdint>
#include <vector>

#include "wsm/params.hpp"

namespace wsm {

// Discrete-agent Stage III oracle on the deterministic type grid
// theta_i = (i - 0.5)/n, all agents starting on the basic service.  Each
// round every agent synchronously picks the payoff-maximizing service given
// the previous round's empirical shares, ties resolved toward the cheaper
// service.  Stops when no agent changes; a persistent two-state cycle with
// amplitude above 3/n raises cycle_error (sub-quantization flapping counts
// as converged).
MarketShare agent_based_equilibrium(int n, const PriceProfile& prices,
                                    const ModelParams& params,
                                    int max_rounds = 10000);

// Exhaustive Stage II oracle: discretizes the simplex at `resolution` (in
// [1e-4, 1e-2]) and returns the unique point where each firm's share is a
// best response, within one grid cell, to the other's.  Zero or multiple
// candidate clusters raise oracle_ambiguity_error carrying all of them.
MarketShare grid_nash_oracle(const CommissionScheme& scheme,
                             const ModelParams& params, double resolution);

// Channel interference model grounding f and g empirically: all components
// exponential (means configurable), rate R(I) = log2(1 + P/(I + n0)).
struct InterferenceModel {
  int channels = 10;
  int n_users = 200;
  double mean_tv = 1.0;    // interference from TV stations
  double mean_user = 0.5;  // per-user interference on a shared channel
  double mean_out = 0.5;   // outside-system interference
  double tx_power = 10.0;
  double noise_floor = 0.1;
  long samples = 1000000;
  std::uint64_t seed = 1;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct McUtilities {
  McEstimate r_basic;     // random channel, total interference
  McEstimate r_advanced;  // argmin of database-known interference across k
};

// Seed-deterministic regardless of worker count: draws are partitioned into
// fixed blocks with independently derived sub-streams and merged in block
// order.
McUtilities monte_carlo_utilities(const InterferenceModel& model, double eta_l,
                                  double eta_a);

struct CurvePoint {
  double x = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
};

struct ShapeReport {
  int n_points = 0;
  int significant_increases = 0;      // first difference > 3 combined SE
  int significant_decreases = 0;
  int significant_convex_seconds = 0;   // second difference > 3 combined SE
  int significant_concave_seconds = 0;  // second difference < -3 combined SE
  bool all_nonnegative_3se = true;      // every mean >= -3 SE
};

// Monotonicity and curvature diagnostics for a sampled utility curve;
// requires at least 5 points with strictly increasing x.
ShapeReport shape_checks(const std::vector<CurvePoint>& curve);

}  // namespace wsm

#endif
