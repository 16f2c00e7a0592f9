#include "wsm/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wsm {

double ModelParams::lambda() const {
  if (!(beta1 > 0.0))
    throw std::domain_error("lambda is undefined: beta1 must be > 0");
  return beta2 / beta1;
}

ModelParams ModelParams::with_lambda(double lambda) const {
  ModelParams out = *this;
  out.beta2 = lambda * beta1;
  return out;
}

void ModelParams::require_valid() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(alpha1) || !finite(beta1) || !finite(gamma1) || !finite(alpha2) ||
      !finite(beta2) || !finite(gamma2) || !finite(q_leasing) ||
      !finite(cost_advanced) || !finite(cost_leasing))
    throw std::domain_error("model parameters must be finite");
  if (!(gamma1 > 0.0 && gamma1 <= 1.0))
    throw std::domain_error("gamma1 must lie in (0,1]");
  if (!(gamma2 > 0.0 && gamma2 <= 1.0))
    throw std::domain_error("gamma2 must lie in (0,1]");
  if (!(alpha2 > 0.0) || !(beta2 > 0.0))
    throw std::domain_error(
        "alpha2 and beta2 must be > 0 (g must stay positive)");
  if (beta1 < 0.0) throw std::domain_error("beta1 must be >= 0");
  if (cost_advanced < 0.0 || cost_leasing < 0.0)
    throw std::domain_error("operational costs must be >= 0");
}

bool MarketShare::in_simplex(double tol) const {
  return eta_l >= -tol && eta_a >= -tol && eta_l + eta_a <= 1.0 + tol;
}

void CommissionScheme::require_valid(const ModelParams& params) const {
  if (!std::isfinite(value))
    throw std::domain_error("commission value must be finite");
  if (kind == SchemeKind::revenue_share) {
    if (value < 0.0 || value > 1.0)
      throw std::domain_error("revenue share delta must lie in [0,1]");
  } else {
    if (value < 0.0 || value > params.q_leasing)
      throw std::domain_error("wholesale price w must lie in [0, Q_L]");
  }
}

std::string to_string(SchemeKind kind) {
  return kind == SchemeKind::revenue_share ? "rss" : "wps";
}

std::string to_string(const CommissionScheme& scheme) {
  std::ostringstream os;
  os << to_string(scheme.kind) << ":" << scheme.value;
  return os.str();
}

}  // namespace wsm
