#pragma once

#include <cstdint>

namespace gantt {

/// Radio power (watts) and interrogation phase durations (seconds).
struct EnergyParams {
  double p_tx = 0.102;
  double p_rx = 0.072;
  double t_req = 128e-6;
  double t_tx = 128e-6;
  double t_rx = 256e-6;
  double t_cg = 15.75e-3;

  /// Zolertia Firefly figures; identical to the defaults.
  static EnergyParams firefly() { return {}; }
};

/// Average energy per tag interrogation in joules for a schedule using
/// `carriers` carrier slots over `tags` tags:
///   p_tx*t_tx + p_rx*((C/T)*t_req + t_rx) + p_tx*(t_req + (C/T)*t_cg)
/// Throws kZeroTags when tags == 0 and kBadConfig for negative inputs or
/// non-positive parameters.
double energy_per_tag(std::int64_t carriers, std::int64_t tags, const EnergyParams& params = {});

}  // namespace gantt
