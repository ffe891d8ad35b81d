// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "irsdfrc/config.hpp"
#include "irsdfrc/scenario.hpp"
#include "irsdfrc/types.hpp"

namespace irsdfrc {

/// Decision variables: information precoder w, AN precoder W_n and the IRS
/// reflection vector phi = diag(Phi).
struct DesignState {
  CVec w;
  CMat w_n;
  CVec phi;

  double transmit_power() const { return w.squaredNorm() + w_n.squaredNorm(); }
  bool unit_modulus(double tol = 1e-12) const;
};

/// c_u, c_te are the user / target channels seen as row vectors (c^T x);
/// c_t is the radar round-trip matrix.
struct EffectiveChannels {
  CVec c_u;
  CVec c_te;
  CMat c_t;
};

struct Rates {
  double r_u = 0.0;
  double r_te = 0.0;
  double secrecy = 0.0;
};

/// D = sqrt(beta_H) diag(f) H_dl.
CMat user_cascade(const ChannelSet& ch, const SystemConfig& cfg);
/// E = sqrt(beta) diag(a_target) H_dl.
CMat target_cascade(const ChannelSet& ch, const SystemConfig& cfg);

EffectiveChannels effective_channels(const ChannelSet& ch, const CVec& phi,
                                     const SystemConfig& cfg);

/// tr(C_T (w w^H + W_n W_n^H) C_T^H) / sigma_R^2.
double radar_snr(const EffectiveChannels& eff, const DesignState& s, double sigma_r2);

/// |c^T w|^2 / (||c^T W_n||^2 + noise).
double sinr(const CVec& c, const DesignState& s, double noise);

/// Rates in bits/s/Hz. The secrecy rate is r_u - r_te and may be negative.
Rates achievable_rates(const EffectiveChannels& eff, const DesignState& s, double sigma_u2,
                       double sigma_te2);

/// Convenience: effective channels + rates + radar SNR for a channel view.
struct Metrics {
  Rates rates;
  double gamma_r = 0.0;
};
Metrics evaluate(const ChannelSet& ch, const DesignState& s, const SystemConfig& cfg);

struct RadarPattern {
  std::vector<double> info_db;
  std::vector<double> an_db;
  bool info_zero_power = false;
  bool an_zero_power = false;
};

/// Transmit patterns |a_T(theta)^T w|^2 and ||a_T(theta)^T W_n||^2, each
/// normalized to a 0 dB peak.
RadarPattern beampattern_radar(const DesignState& s, const SystemConfig& cfg,
                               const std::vector<double>& theta_grid_deg);

struct IrsPattern {
  std::vector<double> gain_db;  // normalized to a 0 dB peak
  double peak_linear = 0.0;
  bool zero_power = false;
};

/// Unnormalized reflected power |a_I^T Phi H_dl w|^2 + ||a_I^T Phi H_dl W_n||^2
/// toward (psi_e, psi_a).
double irs_gain(const ChannelSet& ch, const DesignState& s, const SystemConfig& cfg,
                const AnglePair& dir);

IrsPattern beampattern_irs(const ChannelSet& ch, const DesignState& s, const SystemConfig& cfg,
                           const std::vector<AnglePair>& grid);

/// -90..90 degrees in 0.5 degree steps.
std::vector<double> default_radar_grid();
/// Azimuth sweep -90..90 (0.5 degree steps) at the target elevation.
std::vector<AnglePair> default_irs_grid(const SystemConfig& cfg);

}  // namespace irsdfrc
