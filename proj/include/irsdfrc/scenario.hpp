// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "irsdfrc/config.hpp"
#include "irsdfrc/types.hpp"

namespace irsdfrc {

/// Channels of one realization.
///
///   g      radar -> user,            length N_T
///   f      IRS -> user,              length N
///   h_dl   radar -> IRS,             N x N_T
///   h_ul   IRS -> radar,             N_R x N
///   a_target  IRS steering toward the target, length N, unit modulus
struct ChannelSet {
  CVec g;
  CVec f;
  CMat h_dl;
  CMat h_ul;
  CVec a_target;

  int n_tx() const { return static_cast<int>(g.size()); }
  int n_irs() const { return static_cast<int>(f.size()); }
  int n_rx() const { return static_cast<int>(h_ul.rows()); }

  /// Throws DimensionError when the shapes are inconsistent.
  void validate() const;
};

/// The channels the optimizer sees (estimate) and the ones used to score it (truth).
struct CsiView {
  ChannelSet truth;
  ChannelSet estimate;
};

/// ULA response, element k = exp(j 2 pi (d/lambda) k sin(theta)).
CVec steering_ula(int n, double spacing_over_lambda, double theta_deg);

/// UPA response flattened row-major; element (m, n) has phase
/// 2 pi (d/lambda) (m sin(psi_e) cos(psi_a) + n sin(psi_e) sin(psi_a)).
CVec steering_upa(int rows, int cols, double spacing_over_lambda, double psi_e_deg,
                  double psi_a_deg);

/// Circular complex Gaussian entries with variance `variance` (real and
/// imaginary parts each variance/2).
CMat complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, Rng& rng);

/// sqrt(k/(k+1)) los + sqrt(1/(k+1)) nlos, nlos ~ CN(0, zeta) i.i.d.
CMat draw_rician(const CMat& los, double kappa_db, double zeta, Rng& rng);

/// Imperfect-CSI draw for one channel.
///
/// estimate ~ CN(sqrt(k/(k+1)) los, (1 - sigma_e2) zeta / (1 + k)),
/// error ~ CN(0, sigma_e2 zeta / (1 + k)), truth = estimate + error.
/// Both Gaussian blocks are always drawn (estimate first) so the RNG stream
/// does not depend on sigma_e2. Returns {truth, estimate}.
std::pair<CMat, CMat> apply_csi_error(const CMat& los, double kappa, double zeta,
                                      double sigma_e2, Rng& rng);

/// Line-of-sight components built from the configured geometry.
ChannelSet line_of_sight(const SystemConfig& cfg);

/// Draws the full truth/estimate pair for one Monte-Carlo realization.
CsiView make_scenario(const SystemConfig& cfg, Rng& rng);

}  // namespace irsdfrc
