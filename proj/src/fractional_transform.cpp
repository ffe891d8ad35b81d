// SPDX-License-Identifier: Apache-2.0
#include "irsdfrc/fractional_transform.hpp"

#include <cmath>

namespace irsdfrc {

namespace {

struct Link {
  double gamma = 0.0;
  double alpha = 0.0;
  cd phase{1.0, 0.0};
};

Link link_aux(const CVec& c, const DesignState& s, double noise) {
  const cd cw = tdot(c, s.w);
  const double sig = std::norm(cw);
  const double interference = (c.transpose() * s.w_n).squaredNorm();
  Link l;
  l.gamma = sig / (interference + noise);
  l.alpha = std::sqrt(1.0 + l.gamma) * std::abs(cw) / (sig + interference + noise);
  if (std::abs(cw) > 0.0) l.phase = cw / std::abs(cw);
  return l;
}

}  // namespace

AuxState update_aux(const EffectiveChannels& eff, const DesignState& s, double sigma_u2,
                    double sigma_te2) {
  const Link u = link_aux(eff.c_u, s, sigma_u2);
  const Link te = link_aux(eff.c_te, s, sigma_te2);
  AuxState a;
  a.gamma_u = u.gamma;
  a.alpha_u = u.alpha;
  a.phase_u = u.phase;
  a.gamma_te = te.gamma;
  a.alpha_te = te.alpha;
  a.phase_te = te.phase;
  return a;
}

SurrogatePieces assemble_pieces(const AuxState& aux, const EffectiveChannels& eff,
                                double sigma_u2, double sigma_te2) {
  SurrogatePieces p;
  p.c = std::log2(1.0 + aux.gamma_u) - aux.gamma_u - std::log2(1.0 + aux.gamma_te) +
        aux.gamma_te + aux.alpha_te * aux.alpha_te * sigma_te2 -
        aux.alpha_u * aux.alpha_u * sigma_u2;
  p.v = aux.weight_u() * eff.c_u - aux.weight_te() * eff.c_te;
  p.m = aux.alpha_te * aux.alpha_te * (eff.c_te.conjugate() * eff.c_te.transpose()) -
        aux.alpha_u * aux.alpha_u * (eff.c_u.conjugate() * eff.c_u.transpose());
  return p;
}

double surrogate_objective(const SurrogatePieces& p, const CVec& w, const CMat& r_total) {
  return std::real(tdot(p.v, w)) + std::real((p.m * r_total).trace()) + p.c;
}

double surrogate_objective(const SurrogatePieces& p, const DesignState& s) {
  const CMat r = s.w * s.w.adjoint() + s.w_n * s.w_n.adjoint();
  return surrogate_objective(p, s.w, r);
}

}  // namespace irsdfrc
