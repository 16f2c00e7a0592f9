#include "wsm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "wsm/errors.hpp"
#include "wsm/model.hpp"

namespace wsm {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Small self-contained generator so estimates are bit-stable across
// platforms and standard-library versions.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  double uniform() {  // (0, 1]
    const std::uint64_t bits = splitmix64(state) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }
  double exponential(double mean) { return -mean * std::log(uniform()); }
};

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  long n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  void merge(const Accumulator& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    n += o.n;
  }
  McEstimate estimate() const {
    McEstimate e;
    e.mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - e.mean * e.mean);
    e.std_error = std::sqrt(var / n);
    return e;
  }
};

}  // namespace

MarketShare agent_based_equilibrium(int n, const PriceProfile& prices,
                                    const ModelParams& params,
                                    int max_rounds) {
  if (n < 100) throw std::domain_error("agent population must be >= 100");
  params.require_valid();

  std::vector<std::uint8_t> choice(n, 0), prev(n, 0), prev2(n, 0);
  auto shares_of = [&](const std::vector<std::uint8_t>& c) {
    long n_l = 0, n_a = 0;
    for (std::uint8_t v : c) {
      n_l += v == 2;
      n_a += v == 1;
    }
    return MarketShare{static_cast<double>(n_l) / n,
                       static_cast<double>(n_a) / n};
  };

  MarketShare cur{0.0, 0.0};  // everyone starts on the basic service
  for (int round = 1; round <= max_rounds; ++round) {
    const ServiceUtilities u = service_utilities(cur, params);
    // evaluate in order of increasing cost so strict improvement keeps the
    // cheaper service on ties
    struct Option {
      double slope, cost;
      std::uint8_t tag;
    };
    Option opts[3] = {{u.r_basic, 0.0, 0},
                      {u.r_advanced, prices.p_a, 1},
                      {u.q_leasing, prices.p_l, 2}};
    std::stable_sort(std::begin(opts), std::end(opts),
                     [](const Option& a, const Option& b) {
                       return a.cost < b.cost;
                     });
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      const double theta = (i + 0.5) / n;
      std::uint8_t best = opts[0].tag;
      double best_pay = theta * opts[0].slope - opts[0].cost;
      for (int k = 1; k < 3; ++k) {
        const double pay = theta * opts[k].slope - opts[k].cost;
        if (pay > best_pay) {
          best_pay = pay;
          best = opts[k].tag;
        }
      }
      if (best != choice[i]) changed = true;
      prev2[i] = prev[i];
      prev[i] = choice[i];
      choice[i] = best;
    }
    const MarketShare next = shares_of(choice);
    if (!changed) return next;
    if (round >= 3 && choice == prev2) {
      const MarketShare other = shares_of(prev);
      const double amplitude = std::max(std::abs(next.eta_l - other.eta_l),
                                        std::abs(next.eta_a - other.eta_a));
      if (amplitude > 3.0 / n)
        throw cycle_error("agent dynamics entered a period-2 cycle",
                          {next.eta_l, next.eta_a},
                          {other.eta_l, other.eta_a});
      return next;
    }
    cur = next;
  }
  throw non_convergence_error("agent dynamics did not stabilize", max_rounds,
                              false);
}

MarketShare grid_nash_oracle(const CommissionScheme& scheme,
                             const ModelParams& params, double resolution) {
  if (!(resolution >= 1e-4 && resolution <= 1e-2))
    throw std::domain_error("oracle resolution must lie in [1e-4, 1e-2]");
  scheme.require_valid(params);
  params.require_valid();

  const int n = static_cast<int>(std::lround(1.0 / resolution));
  const double h = 1.0 / n;
  const bool rss = scheme.kind == SchemeKind::revenue_share;
  const double delta = rss ? scheme.value : 0.0;
  const double w = rss ? 0.0 : scheme.value;

  std::vector<double> F(n + 1), G(n + 1);  // leasing revenue term, info gain
  for (int i = 0; i <= n; ++i) {
    const double x = i * h;
    F[i] = (1.0 - x) *
           (params.q_leasing -
            (params.alpha1 - params.beta1 * std::pow(1.0 - x, params.gamma1)));
    G[i] = params.alpha2 +
           (params.beta2 - params.alpha2) * std::pow(x, params.gamma2);
  }
  G[0] = params.alpha2;

  // Licensee's grid best response to each database share (delta-invariant
  // under RSS, so the unscaled margin is compared).
  std::vector<int> br_l(n + 1), br_a(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double cross = j * h * G[j];
    int best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i + j <= n; ++i) {
      const double v = (F[i] - cross - w - params.cost_leasing) * (i * h);
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    br_l[j] = best;
  }
  for (int i = 0; i <= n; ++i) {
    const double el = i * h;
    int best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int j = 0; i + j <= n; ++j) {
      const double ea = j * h;
      double v = ((1.0 - el - ea) * G[j] - params.cost_advanced) * ea;
      if (rss) v += (F[i] - ea * G[j] - params.cost_leasing) * el * delta;
      if (v > best_v) {
        best_v = v;
        best = j;
      }
    }
    br_a[i] = best;
  }

  struct Cand {
    int i, j, dev;
  };
  std::vector<Cand> cands;
  for (int j = 0; j <= n; ++j) {
    const int i0 = br_l[j];
    for (int i = std::max(0, i0 - 1); i <= std::min(n, i0 + 1); ++i) {
      if (i + j > n) continue;
      const int dev_j = std::abs(j - br_a[i]);
      if (dev_j <= 1)
        cands.push_back({i, j, std::max(std::abs(i - i0), dev_j)});
    }
  }

  auto to_pair = [&](const Cand& c) {
    return std::make_pair(c.i * h, c.j * h);
  };
  if (cands.empty())
    throw oracle_ambiguity_error("grid oracle found no equilibrium candidate",
                                 {});

  // Cluster by grid adjacency; several clusters mean genuinely distinct
  // equilibria.
  std::vector<int> cluster(cands.size(), -1);
  int n_clusters = 0;
  for (size_t s = 0; s < cands.size(); ++s) {
    if (cluster[s] >= 0) continue;
    std::vector<size_t> stack{s};
    cluster[s] = n_clusters;
    while (!stack.empty()) {
      const size_t t = stack.back();
      stack.pop_back();
      for (size_t u = 0; u < cands.size(); ++u) {
        if (cluster[u] >= 0) continue;
        if (std::abs(cands[u].i - cands[t].i) <= 1 &&
            std::abs(cands[u].j - cands[t].j) <= 1) {
          cluster[u] = n_clusters;
          stack.push_back(u);
        }
      }
    }
    ++n_clusters;
  }
  if (n_clusters > 1) {
    std::vector<std::pair<double, double>> reps;
    for (int c = 0; c < n_clusters; ++c) {
      const Cand* best = nullptr;
      for (size_t s = 0; s < cands.size(); ++s)
        if (cluster[s] == c && (!best || cands[s].dev < best->dev))
          best = &cands[s];
      reps.push_back(to_pair(*best));
    }
    throw oracle_ambiguity_error("grid oracle found multiple equilibrium "
                                 "candidates",
                                 reps);
  }

  const Cand* best = &cands[0];
  for (const Cand& c : cands)
    if (c.dev < best->dev) best = &c;
  return {best->i * h, best->j * h};
}

McUtilities monte_carlo_utilities(const InterferenceModel& model, double eta_l,
                                  double eta_a) {
  if (!(eta_l >= 0.0 && eta_l <= 1.0 && eta_a >= 0.0 && eta_a <= 1.0 &&
        eta_l + eta_a <= 1.0 + 1e-12))
    throw std::domain_error("infeasible shares");
  if (model.channels < 1 || model.n_users < 1 || model.samples < 1)
    throw std::domain_error("interference model sizes must be positive");

  const double per_channel = static_cast<double>(model.n_users) / model.channels;
  const int n_total = static_cast<int>(std::lround(per_channel * (1.0 - eta_l)));
  int n_adv = static_cast<int>(std::lround(per_channel * eta_a));
  n_adv = std::min(n_adv, n_total);
  const int n_basic = n_total - n_adv;

  auto rate = [&](double interference) {
    return std::log2(1.0 + model.tx_power /
                               (interference + model.noise_floor));
  };

  constexpr int kBlocks = 128;
  struct BlockResult {
    Accumulator basic, advanced;
  };
  std::vector<BlockResult> blocks(kBlocks);
  const long base = model.samples / kBlocks;
  const long extra = model.samples % kBlocks;

  auto run_block = [&](int b) {
    std::uint64_t seed_state = model.seed;
    for (int i = 0; i <= b; ++i) splitmix64(seed_state);
    Rng rng(splitmix64(seed_state));
    const long count = base + (b < extra ? 1 : 0);
    BlockResult& out = blocks[b];
    std::vector<double> known(model.channels);
    for (long s = 0; s < count; ++s) {
      // basic service: random channel, full interference
      double total = rng.exponential(model.mean_tv);
      for (int m = 0; m < n_total; ++m)
        total += rng.exponential(model.mean_user);
      total += rng.exponential(model.mean_out);
      out.basic.add(rate(total));

      // advanced service: pick the channel with minimum known interference
      for (int k = 0; k < model.channels; ++k) {
        double v = rng.exponential(model.mean_tv);
        for (int m = 0; m < n_adv; ++m) v += rng.exponential(model.mean_user);
        known[k] = v;
      }
      double best = known[0];
      for (int k = 1; k < model.channels; ++k) best = std::min(best, known[k]);
      double unknown = rng.exponential(model.mean_out);
      for (int m = 0; m < n_basic; ++m)
        unknown += rng.exponential(model.mean_user);
      out.advanced.add(rate(best + unknown));
    }
  };

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, kBlocks);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back([&, t] {
      for (int b = static_cast<int>(t); b < kBlocks; b += workers)
        run_block(b);
    });
  for (auto& th : pool) th.join();

  // merged in fixed block order: the estimate never depends on worker count
  Accumulator basic, advanced;
  for (const BlockResult& b : blocks) {
    basic.merge(b.basic);
    advanced.merge(b.advanced);
  }
  return {basic.estimate(), advanced.estimate()};
}

ShapeReport shape_checks(const std::vector<CurvePoint>& curve) {
  if (curve.size() < 5)
    throw std::domain_error("shape_checks needs at least 5 points");
  for (size_t i = 1; i < curve.size(); ++i)
    if (!(curve[i].x > curve[i - 1].x))
      throw std::domain_error("curve abscissas must be strictly increasing");

  ShapeReport rep;
  rep.n_points = static_cast<int>(curve.size());
  const double eps = 1e-12;
  for (size_t i = 0; i + 1 < curve.size(); ++i) {
    const double d = curve[i + 1].mean - curve[i].mean;
    const double se = 3.0 * std::hypot(curve[i].std_error,
                                       curve[i + 1].std_error) + eps;
    if (d > se) ++rep.significant_increases;
    if (d < -se) ++rep.significant_decreases;
  }
  for (size_t i = 1; i + 1 < curve.size(); ++i) {
    const double d2 =
        curve[i + 1].mean - 2.0 * curve[i].mean + curve[i - 1].mean;
    const double se =
        3.0 * std::sqrt(curve[i + 1].std_error * curve[i + 1].std_error +
                        4.0 * curve[i].std_error * curve[i].std_error +
                        curve[i - 1].std_error * curve[i - 1].std_error) +
        eps;
    if (d2 > se) ++rep.significant_convex_seconds;
    if (d2 < -se) ++rep.significant_concave_seconds;
  }
  for (const CurvePoint& p : curve)
    if (p.mean < -3.0 * p.std_error) rep.all_nonnegative_3se = false;
  return rep;
}

}  // namespace wsm
