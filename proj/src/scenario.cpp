// SPDX-License-Identifier: Apache-2.0
#include "irsdfrc/scenario.hpp"

#include <cmath>
#include <string>

namespace irsdfrc {

void ChannelSet::validate() const {
  const auto n = f.size();
  const auto nt = g.size();
  auto fail = [](const std::string& what) { throw DimensionError("ChannelSet: " + what); };
  if (nt < 1 || n < 1) fail("empty channel");
  if (h_dl.rows() != n || h_dl.cols() != nt) fail("h_dl must be N x N_T");
  if (h_ul.cols() != n || h_ul.rows() < 1) fail("h_ul must be N_R x N");
  if (a_target.size() != n) fail("a_target must have length N");
}

CVec steering_ula(int n, double spacing_over_lambda, double theta_deg) {
  CVec a(n);
  const double k = 2.0 * kPi * spacing_over_lambda * std::sin(deg2rad(theta_deg));
  for (int i = 0; i < n; ++i) a[i] = std::polar(1.0, k * i);
  return a;
}

CVec steering_upa(int rows, int cols, double spacing_over_lambda, double psi_e_deg,
                  double psi_a_deg) {
  const double e = deg2rad(psi_e_deg);
  const double az = deg2rad(psi_a_deg);
  const double kr = 2.0 * kPi * spacing_over_lambda * std::sin(e) * std::cos(az);
  const double kc = 2.0 * kPi * spacing_over_lambda * std::sin(e) * std::sin(az);
  CVec a(rows * cols);
  for (int m = 0; m < rows; ++m)
    for (int n = 0; n < cols; ++n) a[m * cols + n] = std::polar(1.0, kr * m + kc * n);
  return a;
}

CMat complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s = std::sqrt(variance / 2.0);
  CMat out(rows, cols);
  // Column-major fill keeps the stream order well defined.
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(r, c) = cd(s * re, s * im);
    }
  return out;
}

CMat draw_rician(const CMat& los, double kappa_db, double zeta, Rng& rng) {
  const double k = db2lin(kappa_db);
  const CMat nlos = complex_gaussian(los.rows(), los.cols(), zeta, rng);
  return std::sqrt(k / (k + 1.0)) * los + std::sqrt(1.0 / (k + 1.0)) * nlos;
}

std::pair<CMat, CMat> apply_csi_error(const CMat& los, double kappa, double zeta,
                                      double sigma_e2, Rng& rng) {
  if (!(sigma_e2 >= 0.0 && sigma_e2 < 1.0))
    throw ConfigError("apply_csi_error: sigma_e2 must lie in [0, 1)");
  const CMat scatter = complex_gaussian(los.rows(), los.cols(), zeta, rng);
  const CMat err = complex_gaussian(los.rows(), los.cols(), zeta, rng);
  CMat estimate = std::sqrt(kappa / (kappa + 1.0)) * los +
                  std::sqrt((1.0 - sigma_e2) / (kappa + 1.0)) * scatter;
  if (sigma_e2 == 0.0) return {estimate, estimate};
  CMat truth = estimate + std::sqrt(sigma_e2 / (kappa + 1.0)) * err;
  return {std::move(truth), std::move(estimate)};
}

ChannelSet line_of_sight(const SystemConfig& cfg) {
  const int rows = cfg.irs_rows, cols = cfg.irs_cols;
  const double d = cfg.spacing_over_lambda;
  ChannelSet los;
  los.g = steering_ula(cfg.n_tx, d, cfg.user_azimuth_radar);
  los.f = steering_upa(rows, cols, d, cfg.user_irs.elevation_deg, cfg.user_irs.azimuth_deg);
  const CVec irs_to_radar =
      steering_upa(rows, cols, d, cfg.radar_irs.elevation_deg, cfg.radar_irs.azimuth_deg);
  const CVec tx = steering_ula(cfg.n_tx, d, cfg.irs_azimuth_radar);
  const CVec rx = steering_ula(cfg.n_rx, d, cfg.irs_azimuth_radar);
  los.h_dl = irs_to_radar * tx.transpose();
  los.h_ul = rx * irs_to_radar.transpose();
  los.a_target =
      steering_upa(rows, cols, d, cfg.target.elevation_deg, cfg.target.azimuth_deg);
  return los;
}

CsiView make_scenario(const SystemConfig& cfg, Rng& rng) {
  cfg.validate();
  const ChannelSet los = line_of_sight(cfg);
  CsiView view;
  auto draw = [&](const CMat& l, double kappa, double zeta, CMat& truth, CMat& est) {
    auto [t, e] = apply_csi_error(l, kappa, zeta, cfg.sigma_e2, rng);
    truth = std::move(t);
    est = std::move(e);
  };
  CMat t, e;
  draw(los.g, cfg.rician.g, cfg.zeta.g, t, e);
  view.truth.g = t.col(0);
  view.estimate.g = e.col(0);
  draw(los.f, cfg.rician.f, cfg.zeta.f, t, e);
  view.truth.f = t.col(0);
  view.estimate.f = e.col(0);
  draw(los.h_dl, cfg.rician.h_dl, cfg.zeta.h_dl, view.truth.h_dl, view.estimate.h_dl);
  draw(los.h_ul, cfg.rician.h_ul, cfg.zeta.h_ul, view.truth.h_ul, view.estimate.h_ul);
  view.truth.a_target = los.a_target;
  view.estimate.a_target = los.a_target;
  view.truth.validate();
  view.estimate.validate();
  return view;
}

}  // namespace irsdfrc
