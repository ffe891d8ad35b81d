// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "irsdfrc/types.hpp"

namespace irsdfrc {

/// One value per channel: g (radar->user), f (IRS->user), h_dl (radar->IRS),
/// h_ul (IRS->radar).
struct PerChannel {
  double g = 0.0;
  double f = 0.0;
  double h_dl = 0.0;
  double h_ul = 0.0;

  static PerChannel uniform(double v) { return {v, v, v, v}; }
};

enum class PowerSplit { total, omega };
enum class PhiInit { random, ones };
/// How qtMM linearizes its indefinite quadratics. `shifted` adds the constant
/// lambda (|phi|^2 - N) (zero on the unit circle) so each tangent is a true
/// minorant; `none` linearizes the raw quadratic.
enum class MmCurvature { shifted, none };

/// Elevation/azimuth pair in degrees.
struct AnglePair {
  double elevation_deg = 0.0;
  double azimuth_deg = 0.0;
};

/// All scenario, physical and algorithm parameters.
///
/// Powers and gains are stored in linear units (mW for powers); the JSON
/// form uses the dB / dBm names and is converted once in from_json().
struct SystemConfig {
  int n_tx = 16;
  int n_rx = 16;
  int irs_rows = 8;
  int irs_cols = 8;
  double spacing_over_lambda = 0.5;

  double p_radar = 1000.0;  // 30 dBm
  double omega = 0.5;
  double noise_radar = 1.0;  // 0 dBm
  double noise_user = 1.0;
  double noise_ed = 1.0;
  double beta = 0.01;     // amplitude, |beta| = -40 dB
  double beta_h = 0.01;   // power, -20 dB
  double gamma_r_th = std::pow(10.0, -1.1);  // -11 dB

  AnglePair target{60.0, 30.0};
  AnglePair user_irs{-45.0, -45.0};
  AnglePair radar_irs{90.0, 240.0};
  double user_azimuth_radar = -30.0;
  double irs_azimuth_radar = 60.0;

  PerChannel rician = PerChannel::uniform(100.0);  // 20 dB, linear
  PerChannel zeta = PerChannel::uniform(1.0);
  double sigma_e2 = 0.0;

  int t_max = 15;
  double epsilon = 0.01;  // -20 dB
  int randomization_count = 100;
  int x_ini = -20;
  double eps_in = 1e-2;
  bool keep_best = true;        // return / converge on the best iterate so far
  int qtmm_inner = 50;          // qtMM steps per outer iteration
  double qtmm_inner_tol = 1e-6;  // relative change that ends the inner loop
  std::uint64_t seed = 0;

  PowerSplit power_split = PowerSplit::omega;
  PhiInit phi_init = PhiInit::random;
  MmCurvature mm_curvature = MmCurvature::shifted;

  int n_irs() const { return irs_rows * irs_cols; }

  /// Resize the IRS to n elements with the most square rows x cols layout.
  void set_irs_size(int n);

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

/// Parse a JSON object. Unknown keys are rejected; missing keys keep defaults.
SystemConfig config_from_json(const nlohmann::json& j);
SystemConfig load_config(const std::string& path);
nlohmann::json config_to_json(const SystemConfig& cfg);

}  // namespace irsdfrc
