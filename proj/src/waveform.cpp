// SPDX-License-Identifier: Apache-2.0
#include "irsdfrc/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsdfrc {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

CMat psd_sqrt(const CMat& r) {
  if (r.rows() != r.cols()) throw DimensionError("psd_sqrt: matrix must be square");
  if (r.size() == 0) return r;
  const CMat h = 0.5 * (r + r.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  RVec ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -1e-6 * scale)
    throw std::invalid_argument("psd_sqrt: matrix has a negative eigenvalue");
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

double min_eig(const CMat& h) {
  if (h.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<CMat>(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

CMat schur_block(const CMat& r_w, const CVec& w) {
  const Eigen::Index n = w.size();
  CMat k(n + 1, n + 1);
  k.topLeftCorner(n, n) = r_w;
  k.topRightCorner(n, 1) = w;
  k.bottomLeftCorner(1, n) = w.adjoint();
  k(n, n) = 1.0;
  return k;
}

// Diagonal entries of the embedded trace over the first n complex indices of
// an embedding with half-size `half`.
sdp::BlockCoef trace_coef(int block, int n, int half) {
  sdp::BlockCoef c;
  c.block = block;
  for (int i = 0; i < n; ++i) {
    c.entries.push_back({i, i, 0.5});
    c.entries.push_back({half + i, half + i, 0.5});
  }
  return c;
}

sdp::BlockCoef dense_coef(int block, const CMat& h, double scale) {
  sdp::BlockCoef c;
  c.block = block;
  c.dense = true;
  c.matrix = 0.5 * scale * sdp::real_embedding(h);
  return c;
}

}  // namespace

WaveformCheck check_waveform(const WaveformSolution& s, const EffectiveChannels& eff,
                             const SystemConfig& cfg, PowerSplit split) {
  WaveformCheck c;
  const double tr_w = s.r_w.trace().real();
  const double tr_n = s.r_wn.trace().real();
  if (split == PowerSplit::total) {
    c.power = std::max(0.0, tr_w + tr_n - cfg.p_radar);
  } else {
    c.power = std::max({0.0, tr_w - cfg.omega * cfg.p_radar,
                        tr_n - (1.0 - cfg.omega) * cfg.p_radar});
  }
  const CMat q = eff.c_t.adjoint() * eff.c_t;
  const double snr = (q * (s.r_w + s.r_wn)).trace().real() / cfg.noise_radar;
  c.snr = std::max(0.0, cfg.gamma_r_th - snr);
  c.schur = std::max(0.0, -min_eig(schur_block(s.r_w, s.w)));
  c.psd = std::max(0.0, -min_eig(s.r_wn));
  return c;
}

WaveformSolution solve_waveform_an(const SurrogatePieces& pieces, const EffectiveChannels& eff,
                                   const SystemConfig& cfg) {
  return solve_waveform_an(pieces, eff, cfg, cfg.power_split);
}

WaveformSolution solve_waveform_an(const SurrogatePieces& pieces, const EffectiveChannels& eff,
                                   const SystemConfig& cfg, PowerSplit split) {
  const int nt = static_cast<int>(pieces.v.size());
  if (pieces.m.rows() != nt || pieces.m.cols() != nt || eff.c_t.cols() != nt)
    throw DimensionError("solve_waveform_an: inconsistent transmit dimension");
  if (!std::isfinite(cfg.gamma_r_th))
    throw std::invalid_argument("solve_waveform_an: radar SNR threshold must be finite");

  WaveformSolution out;
  out.w = CVec::Zero(nt);
  out.r_w = CMat::Zero(nt, nt);
  out.r_wn = CMat::Zero(nt, nt);

  const double p = cfg.p_radar;
  const CMat q = eff.c_t.adjoint() * eff.c_t;
  const double q_max =
      nt > 0 ? Eigen::SelfAdjointEigenSolver<CMat>(q, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff()
             : 0.0;
  const double snr_need = cfg.gamma_r_th * cfg.noise_radar;  // tr(Q R) >= snr_need
  if (snr_need > p * q_max * (1.0 + 1e-12)) {
    out.status = SolveStatus::infeasible;
    return out;
  }
  if (p <= 0.0) {
    out.status = SolveStatus::optimal;
    return out;
  }

  // Work on R = p R~, w = sqrt(p) w~ so every variable is O(1).
  const double sp = std::sqrt(p);
  const double info_budget = split == PowerSplit::total ? 1.0 : cfg.omega;
  const double an_budget = split == PowerSplit::total ? 1.0 : 1.0 - cfg.omega;
  const bool use_info = info_budget > 0.0;
  const bool use_an = an_budget > 0.0;
  if (!use_info && !use_an) {
    out.status = snr_need <= 0.0 ? SolveStatus::optimal : SolveStatus::infeasible;
    return out;
  }

  const int half1 = nt + 1;
  CMat c1 = CMat::Zero(half1, half1);
  c1.topLeftCorner(nt, nt) = p * pieces.m;
  c1.topRightCorner(nt, 1) = 0.5 * sp * pieces.v.conjugate();
  c1.bottomLeftCorner(1, nt) = 0.5 * sp * pieces.v.transpose();
  const CMat c2 = p * pieces.m;
  double obj_scale = std::max(c1.cwiseAbs().maxCoeff(), c2.cwiseAbs().maxCoeff());
  obj_scale = obj_scale > 0.0 ? 1.0 / obj_scale : 1.0;

  sdp::Problem prob;
  int b_info = -1, b_an = -1;
  if (use_info) {
    b_info = static_cast<int>(prob.block_sizes.size());
    prob.block_sizes.push_back(2 * half1);
    prob.objective.push_back(-0.5 * obj_scale * sdp::real_embedding(c1));
  }
  if (use_an) {
    b_an = static_cast<int>(prob.block_sizes.size());
    prob.block_sizes.push_back(2 * nt);
    prob.objective.push_back(-0.5 * obj_scale * sdp::real_embedding(c2));
  }

  if (use_info) {
    sdp::Constraint corner;
    sdp::BlockCoef cc;
    cc.block = b_info;
    cc.entries.push_back({nt, nt, 1.0});
    cc.entries.push_back({2 * nt + 1, 2 * nt + 1, 1.0});
    corner.blocks.push_back(cc);
    corner.rhs = 2.0;
    prob.constraints.push_back(corner);
  }

  int slack = 0;
  auto budget = [&](bool info, bool an, double rhs) {
    sdp::Constraint c;
    if (info) c.blocks.push_back(trace_coef(b_info, nt, half1));
    if (an) c.blocks.push_back(trace_coef(b_an, nt, nt));
    c.lp.push_back({slack++, 1.0});
    c.rhs = rhs;
    prob.constraints.push_back(c);
  };
  if (split == PowerSplit::total) {
    budget(use_info, use_an, 1.0);
  } else {
    if (use_info) budget(true, false, info_budget);
    if (use_an) budget(false, true, an_budget);
  }

  if (q_max > 0.0 && snr_need > 0.0) {
    sdp::Constraint c;
    const double qs = 1.0 / q_max;
    if (use_info) {
      CMat qe = CMat::Zero(half1, half1);
      qe.topLeftCorner(nt, nt) = q;
      c.blocks.push_back(dense_coef(b_info, qe, qs));
    }
    if (use_an) c.blocks.push_back(dense_coef(b_an, q, qs));
    c.lp.push_back({slack++, -1.0});
    c.rhs = snr_need / p * qs;
    prob.constraints.push_back(c);
  }
  prob.lp_size = slack;
  prob.objective_lp = RVec::Zero(slack);

  const sdp::Solution sol = sdp::solve(prob);
  if (sol.status == sdp::Status::infeasible) {
    out.status = SolveStatus::infeasible;
    return out;
  }

  if (use_info) {
    const CMat k = sdp::complex_from_embedding(sol.x[b_info]);
    out.r_w = p * k.topLeftCorner(nt, nt);
    out.w = sp * k.topRightCorner(nt, 1);
    out.r_w = 0.5 * (out.r_w + out.r_w.adjoint());
  }
  if (use_an) {
    out.r_wn = p * sdp::complex_from_embedding(sol.x[b_an]);
    out.r_wn = 0.5 * (out.r_wn + out.r_wn.adjoint());
  }
  out.objective_value = std::real(tdot(pieces.v, out.w)) +
                        std::real((pieces.m * (out.r_w + out.r_wn)).trace());

  const WaveformCheck chk = check_waveform(out, eff, cfg, split);
  const bool holds = chk.power <= 1e-6 * p && chk.snr <= 1e-6 * std::max(1.0, cfg.gamma_r_th) &&
                     chk.schur <= 1e-6 * std::max(1.0, p) && chk.psd <= 1e-8 * std::max(1.0, p);
  out.status = (sol.status == sdp::Status::optimal && holds) ? SolveStatus::optimal
                                                             : SolveStatus::numerical_failure;
  return out;
}

}  // namespace irsdfrc
