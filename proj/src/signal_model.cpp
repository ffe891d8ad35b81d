// SPDX-License-Identifier: Apache-2.0
#include "irsdfrc/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace irsdfrc {

bool DesignState::unit_modulus(double tol) const {
  for (Eigen::Index i = 0; i < phi.size(); ++i)
    if (std::abs(std::abs(phi[i]) - 1.0) > tol) return false;
  return true;
}

CMat user_cascade(const ChannelSet& ch, const SystemConfig& cfg) {
  return std::sqrt(cfg.beta_h) * (ch.f.asDiagonal() * ch.h_dl);
}

CMat target_cascade(const ChannelSet& ch, const SystemConfig& cfg) {
  return std::sqrt(cfg.beta) * (ch.a_target.asDiagonal() * ch.h_dl);
}

EffectiveChannels effective_channels(const ChannelSet& ch, const CVec& phi,
                                     const SystemConfig& cfg) {
  ch.validate();
  if (phi.size() != ch.n_irs())
    throw DimensionError("effective_channels: phi must have length N");
  EffectiveChannels eff;
  eff.c_u = ch.g + user_cascade(ch, cfg).transpose() * phi;
  eff.c_te = target_cascade(ch, cfg).transpose() * phi;
  const CVec pa = phi.cwiseProduct(ch.a_target);
  eff.c_t = cfg.beta * (ch.h_ul * pa) * (pa.transpose() * ch.h_dl);
  return eff;
}

double radar_snr(const EffectiveChannels& eff, const DesignState& s, double sigma_r2) {
  double p = 0.0;
  if (s.w.size() > 0) p += (eff.c_t * s.w).squaredNorm();
  if (s.w_n.size() > 0) p += (eff.c_t * s.w_n).squaredNorm();
  return p / sigma_r2;
}

double sinr(const CVec& c, const DesignState& s, double noise) {
  const double sig = std::norm(tdot(c, s.w));
  const double interference = (c.transpose() * s.w_n).squaredNorm();
  return sig / (interference + noise);
}

Rates achievable_rates(const EffectiveChannels& eff, const DesignState& s, double sigma_u2,
                       double sigma_te2) {
  Rates r;
  r.r_u = std::log2(1.0 + sinr(eff.c_u, s, sigma_u2));
  r.r_te = std::log2(1.0 + sinr(eff.c_te, s, sigma_te2));
  r.secrecy = r.r_u - r.r_te;
  return r;
}

Metrics evaluate(const ChannelSet& ch, const DesignState& s, const SystemConfig& cfg) {
  const EffectiveChannels eff = effective_channels(ch, s.phi, cfg);
  Metrics m;
  m.rates = achievable_rates(eff, s, cfg.noise_user, cfg.noise_ed);
  m.gamma_r = radar_snr(eff, s, cfg.noise_radar);
  return m;
}

namespace {

// Normalizes linear powers to a 0 dB peak; an all-zero pattern is reported
// flat at 0 dB.
std::vector<double> normalize_db(const std::vector<double>& p, bool& zero_power) {
  const double peak = p.empty() ? 0.0 : *std::max_element(p.begin(), p.end());
  zero_power = !(peak > 0.0);
  std::vector<double> out(p.size(), 0.0);
  if (zero_power) return out;
  for (size_t i = 0; i < p.size(); ++i)
    out[i] = p[i] > 0.0 ? 10.0 * std::log10(p[i] / peak) : -std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace

RadarPattern beampattern_radar(const DesignState& s, const SystemConfig& cfg,
                               const std::vector<double>& theta_grid_deg) {
  if (theta_grid_deg.empty()) throw std::invalid_argument("beampattern_radar: empty grid");
  const int nt = static_cast<int>(s.w.size());
  std::vector<double> info, an;
  info.reserve(theta_grid_deg.size());
  an.reserve(theta_grid_deg.size());
  for (double th : theta_grid_deg) {
    const CVec a = steering_ula(nt, cfg.spacing_over_lambda, th);
    info.push_back(std::norm(tdot(a, s.w)));
    an.push_back((a.transpose() * s.w_n).squaredNorm());
  }
  RadarPattern out;
  out.info_db = normalize_db(info, out.info_zero_power);
  out.an_db = normalize_db(an, out.an_zero_power);
  return out;
}

double irs_gain(const ChannelSet& ch, const DesignState& s, const SystemConfig& cfg,
                const AnglePair& dir) {
  const CVec a = steering_upa(cfg.irs_rows, cfg.irs_cols, cfg.spacing_over_lambda,
                              dir.elevation_deg, dir.azimuth_deg);
  // a^T Phi H_dl as a row vector.
  const Eigen::RowVectorXcd row = a.cwiseProduct(s.phi).transpose() * ch.h_dl;
  return std::norm((row * s.w).value()) + (row * s.w_n).squaredNorm();
}

IrsPattern beampattern_irs(const ChannelSet& ch, const DesignState& s, const SystemConfig& cfg,
                           const std::vector<AnglePair>& grid) {
  if (grid.empty()) throw std::invalid_argument("beampattern_irs: empty grid");
  if (cfg.n_irs() != ch.n_irs()) throw DimensionError("beampattern_irs: IRS size mismatch");
  std::vector<double> p;
  p.reserve(grid.size());
  for (const auto& dir : grid) p.push_back(irs_gain(ch, s, cfg, dir));
  IrsPattern out;
  out.peak_linear = *std::max_element(p.begin(), p.end());
  out.gain_db = normalize_db(p, out.zero_power);
  return out;
}

std::vector<double> default_radar_grid() {
  std::vector<double> g;
  for (int i = -180; i <= 180; ++i) g.push_back(0.5 * i);
  return g;
}

std::vector<AnglePair> default_irs_grid(const SystemConfig& cfg) {
  std::vector<AnglePair> g;
  for (int i = -180; i <= 180; ++i) g.push_back({cfg.target.elevation_deg, 0.5 * i});
  return g;
}

}  // namespace irsdfrc
