#include "gantt/energy.hpp"

#include <numeric>

#include "gantt/error.hpp"

namespace gantt {

double energy_per_tag(std::int64_t carriers, std::int64_t tags, const EnergyParams& p) {
  if (tags == 0) throw Error(ErrorCode::kZeroTags, "energy per tag needs at least one tag");
  if (tags < 0 || carriers < 0) throw Error(ErrorCode::kBadConfig, "carrier and tag counts must be non-negative");
  if (!(p.p_tx > 0 && p.p_rx > 0 && p.t_req > 0 && p.t_tx > 0 && p.t_rx > 0 && p.t_cg > 0)) {
    throw Error(ErrorCode::kBadConfig, "energy parameters must be strictly positive");
  }
  // Reduce C/T first so the single division is correctly rounded.
  const std::int64_t g = std::gcd(carriers, tags);
  const double ratio = g == 0 ? 0.0 : static_cast<double>(carriers / g) / static_cast<double>(tags / g);
  return p.p_tx * p.t_tx + p.p_rx * (ratio * p.t_req + p.t_rx) + p.p_tx * (p.t_req + ratio * p.t_cg);
}

}  // namespace gantt
