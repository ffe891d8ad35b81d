// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsdfrc/config.hpp"
#include "irsdfrc/fractional_transform.hpp"
#include "irsdfrc/scenario.hpp"
#include "irsdfrc/signal_model.hpp"
#include "irsdfrc/types.hpp"

namespace irsdfrc {

/// Everything the IRS update needs at the anchor phi_t.
///
/// Over phi the surrogate objective is
///   phi^T (L1 + L1bar) phi^* + Re(phi^T (eta - mu - mubar)) + const
/// and the radar SNR surrogate is
///   phi^H L2 phi^* + phi^T L3 phi - snr_scale * u_t^H Z u_t.
///
/// Z = B^T kron A with A = H_ul^H H_ul and B = H_dl R H_dl^H is kept in factored
/// form (it has N^4 entries); materialize_z() builds it for small checks.
struct IrsSubproblemData {
  CVec phi_t;
  CVec a_target;
  CMat d_mat;
  CMat e_mat;
  CVec eta;
  double c1 = 0.0;
  CMat l1;
  CVec mu;
  double c2 = 0.0;
  CMat l1_bar;
  CVec mu_bar;
  double c2_bar = 0.0;

  CMat a_fac;  // A = H_ul^H H_ul
  CMat b_fac;  // B = H_dl (w w^H + W_n W_n^H) H_dl^H
  CMat u_t;    // U_t = Phi_t a a^T Phi_t, vec(U_t) = u_t
  CMat v_mat;  // V = A U_t B, vec(V) = Z u_t
  CMat y_mat;  // Y = conj(V), vec(Y) = Z^T conj(u_t)
  CMat l2;
  CMat l3;
  double snr_scale = 0.0;  // beta^2 / sigma_R^2
  double zt = 0.0;         // u_t^H Z u_t
  double gamma_th = 0.0;
  double gamma_th_prime = 0.0;

  // Derived once for the update rules.
  CMat l_sum;  // L1 + L1bar
  CVec q;      // eta - mu - mubar
  CMat l2s;    // symmetric parts; same quadratic forms as l2 / l3
  CMat l3s;

  // Curvature shifts for the qtMM tangents (0 when disabled). With them
  // g0 and g1 each gain 2 shift (Re(phi_t^H phi) - N), which vanishes at phi_t.
  double shift_obj = 0.0;  // max(0, -lambda_min(L1 + L1bar))
  double shift_snr = 0.0;  // largest singular value of 2 L3s
  MmCurvature curvature = MmCurvature::shifted;

  int n() const { return static_cast<int>(phi_t.size()); }
};

IrsSubproblemData assemble_irs_data(const ChannelSet& ch, const DesignState& state,
                                    const AuxState& aux, const SystemConfig& cfg);

/// Moves the anchor to phi: recomputes u_t, V, Y, L2, L3, zt, gamma' and the
/// SNR curvature shift. The objective pieces do not depend on the anchor.
void reanchor(IrsSubproblemData& d, const CVec& phi);

/// Z = B^T kron A (N^2 x N^2).
CMat materialize_z(const IrsSubproblemData& d);

/// phi^T (L1 + L1bar) phi^* + Re(phi^T q): the part of the surrogate that depends on phi.
double irs_objective(const IrsSubproblemData& d, const CVec& phi);

/// Radar SNR at phi with the waveform the data were built from.
double irs_true_snr(const IrsSubproblemData& d, const CVec& phi);

/// phi^H L2 phi^* + phi^T L3 phi - snr_scale * zt.
double irs_snr_surrogate(const IrsSubproblemData& d, const CVec& phi);

struct Linearization {
  /// g0(phi) = phi_t^T L phi^* + phi^T L phi_t^* - phi_t^T L phi_t^* + Re(phi^T q)
  double g0(const CVec& phi) const;
  /// Affine minorant of the SNR surrogate minus gamma'.
  double g1(const CVec& phi) const;

  const IrsSubproblemData* data = nullptr;
};

Linearization qtmm_linearize(const IrsSubproblemData& d);

/// Unit-modulus maximizer of Re[g0 + rho g1].
CVec phase_update(const IrsSubproblemData& d, double rho);

struct IrsSolution {
  CVec phi;
  double rho_star = 0.0;
  bool feasible_true_snr = false;
  bool feasible_surrogate = false;
  bool failed = false;
};

/// One linearize / dual-bisection step anchored at d.phi_t.
IrsSolution qtmm_step(const IrsSubproblemData& d, const SystemConfig& cfg);

/// Repeats qtmm_step, re-anchoring at each result, until the phi objective
/// changes by at most cfg.qtmm_inner_tol (relative) or cfg.qtmm_inner steps
/// were taken. While the anchor misses the SNR threshold, steps that raise the
/// true SNR are re-anchored first. Stops early if a step from a feasible
/// anchor cannot meet the linearized SNR bound. Leaves d anchored at the last
/// accepted point.
IrsSolution qtmm_update(IrsSubproblemData& d, const SystemConfig& cfg);

IrsSolution qtsdr_step(const IrsSubproblemData& d, const SystemConfig& cfg, Rng& rng);

}  // namespace irsdfrc
