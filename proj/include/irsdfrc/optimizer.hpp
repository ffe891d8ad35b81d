// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "irsdfrc/config.hpp"
#include "irsdfrc/fractional_transform.hpp"
#include "irsdfrc/scenario.hpp"
#include "irsdfrc/signal_model.hpp"
#include "irsdfrc/waveform.hpp"

namespace irsdfrc {

enum class Method { qtmm, qtsdr };

std::string to_string(Method m);
/// Accepts "qtmm" / "qtsdr"; throws ConfigError otherwise.
Method method_from_string(const std::string& s);

/// Metrics after outer iteration `index` (1-based), scored on the true channels.
///
/// secrecy_rate .. irs_* describe the iterate the two updates just produced;
/// output_secrecy is the secrecy rate of the design the run would return at
/// this point (the best iterate so far when cfg.keep_best is set).
struct IterationRecord {
  int index = 0;
  double output_secrecy = 0.0;
  double secrecy_rate = 0.0;
  double r_u = 0.0;
  double r_te = 0.0;
  double gamma_r_true = 0.0;
  SolveStatus waveform_status = SolveStatus::optimal;
  bool irs_feasible_true = false;
  bool irs_feasible_surrogate = false;
  bool irs_failed = false;
  std::optional<double> rho_star;
  double wall_time_s = 0.0;
};

struct RunResult {
  std::vector<IterationRecord> trace;
  DesignState initial_state;
  DesignState final_state;
  double initial_secrecy = 0.0;  // true channels, before the first iteration
  bool converged = false;
  int iterations_used = 0;
  double wall_time_s = 0.0;
};

/// Starting point from the estimated channels: random (or all-ones) phases,
/// w matched to the effective user channel with power omega P, and white AN
/// with the rest.
std::pair<DesignState, AuxState> initialize_state(const ChannelSet& estimate,
                                                  const SystemConfig& cfg, Rng& rng);

/// Alternating optimization. Inputs come from scenario.estimate; every
/// recorded metric uses scenario.truth.
RunResult optimize(const CsiView& scenario, const SystemConfig& cfg, Method method, Rng& rng);

/// Same, with an RNG seeded from cfg.seed.
RunResult optimize(const CsiView& scenario, const SystemConfig& cfg, Method method);

nlohmann::json to_json(const RunResult& r);

}  // namespace irsdfrc
