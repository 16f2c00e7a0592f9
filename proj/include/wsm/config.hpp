#ifndef WSM_CONFIG_HPP
#define WSM_CONFIG_HPP

#include <iosfwd>
#include <string>

#include "wsm/bargaining.hpp"
#include "wsm/params.hpp"

namespace wsm {

struct Config {
  ModelParams params;
  BargainingConfig bargaining;
};

// JSON config with keys exactly matching the ModelParams field names, plus
// an optional "bargaining" object ({grid_steps, literal_pairing,
// cost_adjusted_disagreement}).  Unknown keys are rejected.
Config load_config(const std::string& path);
Config parse_config(std::istream& in);

}  // namespace wsm

#endif
