#ifndef WSM_ERRORS_HPP
#define WSM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wsm {

// Root-finding failed: the residual has the same sign at both bracket ends.
// Usually indicates an assumption breakdown (e.g. prices outside the region
// where the market admits the presumed equilibrium branch).
class no_sign_change_error : public std::runtime_error {
public:
  no_sign_change_error(const std::string& what, double res_lo, double res_hi)
      : std::runtime_error(what), residual_lo(res_lo), residual_hi(res_hi) {}
  double residual_lo;
  double residual_hi;
};

// Stage II best-response iteration did not settle within max_rounds.
class non_convergence_error : public std::runtime_error {
public:
  non_convergence_error(const std::string& what, int rounds, bool oscillating)
      : std::runtime_error(what), rounds(rounds), oscillating(oscillating) {}
  int rounds;
  bool oscillating;
};

// Exhaustive grid search found zero or several equilibrium candidates.
// Multiplicity is information, not a bug: the caller can inspect them.
class oracle_ambiguity_error : public std::runtime_error {
public:
  oracle_ambiguity_error(const std::string& what,
                         std::vector<std::pair<double, double>> cands)
      : std::runtime_error(what), candidates(std::move(cands)) {}
  std::vector<std::pair<double, double>> candidates;
};

// Agent population entered a persistent choice cycle.
class cycle_error : public std::runtime_error {
public:
  cycle_error(const std::string& what, std::pair<double, double> a,
              std::pair<double, double> b)
      : std::runtime_error(what), state_a(a), state_b(b) {}
  std::pair<double, double> state_a;
  std::pair<double, double> state_b;
};

// Threshold ordering inconsistent with the claimed equilibrium branch.
class ordering_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace wsm

#endif
