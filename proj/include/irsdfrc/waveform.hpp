// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsdfrc/config.hpp"
#include "irsdfrc/fractional_transform.hpp"
#include "irsdfrc/sdp.hpp"
#include "irsdfrc/signal_model.hpp"
#include "irsdfrc/types.hpp"

namespace irsdfrc {

enum class SolveStatus { optimal, infeasible, numerical_failure };

std::string to_string(SolveStatus s);

struct WaveformSolution {
  CVec w;
  CMat r_w;   // relaxed info covariance (>= w w^H)
  CMat r_wn;  // AN covariance
  SolveStatus status = SolveStatus::numerical_failure;
  double objective_value = 0.0;  // Re(v^T w) + tr(M (R_w + R_wn)), constant c excluded
};

/// Relaxed waveform/AN design at fixed IRS phases.
///
///   max  Re(v^T w) + tr(M (R_w + R_wn))
///   s.t. power budget (total, or split by omega),
///        tr(C_T^H C_T (R_w + R_wn)) / sigma_R^2 >= gamma_th,
///        [[R_w, w], [w^H, 1]] PSD, R_wn PSD.
WaveformSolution solve_waveform_an(const SurrogatePieces& pieces, const EffectiveChannels& eff,
                                   const SystemConfig& cfg, PowerSplit split);

/// Same, using cfg.power_split.
WaveformSolution solve_waveform_an(const SurrogatePieces& pieces, const EffectiveChannels& eff,
                                   const SystemConfig& cfg);

/// Hermitian PSD square root. Eigenvalues down to -1e-6 are clamped to zero;
/// anything more negative throws std::invalid_argument.
CMat psd_sqrt(const CMat& r);

/// Largest violation of the waveform constraints by (r_w, w, r_wn), in the
/// units of each constraint. Zero when everything holds.
struct WaveformCheck {
  double power = 0.0;
  double snr = 0.0;
  double schur = 0.0;  // -min eig of [[R_w, w], [w^H, 1]]
  double psd = 0.0;    // -min eig of R_wn
};
WaveformCheck check_waveform(const WaveformSolution& s, const EffectiveChannels& eff,
                             const SystemConfig& cfg, PowerSplit split);

}  // namespace irsdfrc
