// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsdfrc/signal_model.hpp"
#include "irsdfrc/types.hpp"

namespace irsdfrc {

/// Quadratic-transform auxiliaries for the user (u) and the target/ED (te).
///
/// gamma is the SINR at the anchor state and alpha the (nonnegative)
/// quadratic-transform weight. phase is c^T w / |c^T w| at the anchor (1 when
/// c^T w = 0): the linear term Re(conj(phase) c^T w) then equals |c^T w| at
/// the anchor, which makes the surrogate exact for any complex c^T w.
struct AuxState {
  double gamma_u = 0.0;
  double alpha_u = 0.0;
  double gamma_te = 0.0;
  double alpha_te = 0.0;
  cd phase_u{1.0, 0.0};
  cd phase_te{1.0, 0.0};

  /// 2 alpha sqrt(1 + gamma) conj(phase): weight of c^T w in the linear term.
  cd weight_u() const { return 2.0 * alpha_u * std::sqrt(1.0 + gamma_u) * std::conj(phase_u); }
  cd weight_te() const { return 2.0 * alpha_te * std::sqrt(1.0 + gamma_te) * std::conj(phase_te); }
};

/// Pieces of the non-fractional objective Re(v^T w) + tr(M (W_n W_n^H + w w^H)) + c.
struct SurrogatePieces {
  double c = 0.0;
  CVec v;
  CMat m;  // Hermitian
};

AuxState update_aux(const EffectiveChannels& eff, const DesignState& s, double sigma_u2,
                    double sigma_te2);

SurrogatePieces assemble_pieces(const AuxState& aux, const EffectiveChannels& eff,
                                double sigma_u2, double sigma_te2);

double surrogate_objective(const SurrogatePieces& p, const DesignState& s);

/// Same objective on lifted covariances: Re(v^T w) + tr(M (R_w + R_wn)) + c.
double surrogate_objective(const SurrogatePieces& p, const CVec& w, const CMat& r_total);

}  // namespace irsdfrc
