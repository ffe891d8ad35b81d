// SPDX-License-Identifier: Apache-2.0
#include "irsdfrc/irs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "irsdfrc/sdp.hpp"

namespace irsdfrc {

IrsSubproblemData assemble_irs_data(const ChannelSet& ch, const DesignState& state,
                                    const AuxState& aux, const SystemConfig& cfg) {
  ch.validate();
  const int n = ch.n_irs();
  const int nt = ch.n_tx();
  if (state.phi.size() != n) throw DimensionError("assemble_irs_data: phi must have length N");
  if (state.w.size() != nt) throw DimensionError("assemble_irs_data: w must have length N_T");
  if (state.w_n.rows() != nt) throw DimensionError("assemble_irs_data: W_n must have N_T rows");

  IrsSubproblemData d;
  d.phi_t = state.phi;
  d.a_target = ch.a_target;
  d.d_mat = user_cascade(ch, cfg);
  d.e_mat = target_cascade(ch, cfg);

  const cd wu = aux.weight_u();
  const cd wte = aux.weight_te();
  const double au2 = aux.alpha_u * aux.alpha_u;
  const double ate2 = aux.alpha_te * aux.alpha_te;
  const CMat r_n = state.w_n * state.w_n.adjoint();
  const CMat r_i = state.w * state.w.adjoint();

  d.eta = (wu * d.d_mat - wte * d.e_mat) * state.w;
  d.c1 = std::real(wu * tdot(ch.g, state.w));
  d.l1 = ate2 * d.e_mat * r_n * d.e_mat.adjoint() - au2 * d.d_mat * r_n * d.d_mat.adjoint();
  d.l1_bar = ate2 * d.e_mat * r_i * d.e_mat.adjoint() - au2 * d.d_mat * r_i * d.d_mat.adjoint();
  d.mu = 2.0 * au2 * d.d_mat * r_n * ch.g.conjugate();
  d.mu_bar = 2.0 * au2 * d.d_mat * r_i * ch.g.conjugate();
  d.c2 = -au2 * std::real((ch.g.transpose() * r_n * ch.g.conjugate()).value());
  d.c2_bar = -au2 * std::real((ch.g.transpose() * r_i * ch.g.conjugate()).value());

  d.a_fac = ch.h_ul.adjoint() * ch.h_ul;
  d.b_fac = ch.h_dl * (r_i + r_n) * ch.h_dl.adjoint();
  d.snr_scale = cfg.beta * cfg.beta / cfg.noise_radar;
  d.gamma_th = cfg.gamma_r_th;

  d.l_sum = d.l1 + d.l1_bar;
  d.l_sum = 0.5 * (d.l_sum + d.l_sum.adjoint());
  d.q = d.eta - d.mu - d.mu_bar;
  d.curvature = cfg.mm_curvature;
  if (d.curvature == MmCurvature::shifted && n > 0) {
    const double lmin = Eigen::SelfAdjointEigenSolver<CMat>(d.l_sum, Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .minCoeff();
    d.shift_obj = std::max(0.0, -lmin);
  }
  reanchor(d, state.phi);
  return d;
}

void reanchor(IrsSubproblemData& d, const CVec& phi) {
  if (phi.size() != d.a_target.size()) throw DimensionError("reanchor: phi must have length N");
  d.phi_t = phi;
  const CVec& a = d.a_target;
  const CVec p = phi.cwiseProduct(a);
  // U_t = p p^T is rank one, so V = (A p)(B^T p)^T.
  const CVec x = d.a_fac * p;
  const CVec y = d.b_fac.transpose() * p;
  d.u_t = p * p.transpose();
  d.v_mat = x * y.transpose();
  d.y_mat = d.v_mat.conjugate();
  d.l2 = d.snr_scale * (a.conjugate() * a.adjoint()).cwiseProduct(d.v_mat.transpose());
  d.l3 = d.snr_scale * (a * a.transpose()).cwiseProduct(d.y_mat.transpose());
  d.zt = std::real(p.dot(x)) * std::real(tdot(y, p.conjugate()));
  d.gamma_th_prime = d.gamma_th + d.snr_scale * d.zt;
  d.l2s = 0.5 * (d.l2 + d.l2.transpose());
  d.l3s = 0.5 * (d.l3 + d.l3.transpose());

  d.shift_snr = 0.0;
  if (d.curvature == MmCurvature::shifted && d.n() > 0) {
    // L3s = scale (s t^T + t s^T) / 2 with s = a o conj(y), t = a o conj(x).
    // The real form of 2 Re(phi^T L3s phi) has eigenvalues +-2 sigma_i(L3s).
    CMat st(d.n(), 2);
    st.col(0) = a.cwiseProduct(y.conjugate());
    st.col(1) = a.cwiseProduct(x.conjugate());
    Eigen::HouseholderQR<CMat> qr(st);
    const CMat r = qr.matrixQR().topRows(2).triangularView<Eigen::Upper>();
    CMat k(2, 2);
    k << 0.0, 0.5, 0.5, 0.0;
    const CMat small = d.snr_scale * r * k * r.transpose();
    d.shift_snr = 2.0 * Eigen::JacobiSVD<CMat>(small).singularValues()[0];
  }
}

CMat materialize_z(const IrsSubproblemData& d) {
  const CMat bt = d.b_fac.transpose();
  const Eigen::Index n = d.a_fac.rows();
  CMat z(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z.block(i * n, j * n, n, n) = bt(i, j) * d.a_fac;
  return z;
}

double irs_objective(const IrsSubproblemData& d, const CVec& phi) {
  return std::real((phi.transpose() * d.l_sum * phi.conjugate()).value()) + std::real(tdot(phi, d.q));
}

double irs_true_snr(const IrsSubproblemData& d, const CVec& phi) {
  // tr(U^H A U B) with U = p p^T factors into (p^H A p)(p^T B p^*).
  const CVec p = phi.cwiseProduct(d.a_target);
  const double pa = std::real(p.dot(d.a_fac * p));
  const double pb = std::real((p.transpose() * d.b_fac * p.conjugate()).value());
  return d.snr_scale * pa * pb;
}

double irs_snr_surrogate(const IrsSubproblemData& d, const CVec& phi) {
  const cd t2 = (phi.adjoint() * d.l2 * phi.conjugate()).value();
  const cd t3 = (phi.transpose() * d.l3 * phi).value();
  return std::real(t2 + t3) - d.snr_scale * d.zt;
}

double Linearization::g0(const CVec& phi) const {
  const auto& d = *data;
  const CVec pc = d.phi_t.conjugate();
  const cd v = tdot(d.phi_t, d.l_sum * phi.conjugate()) + tdot(phi, d.l_sum * pc) -
               tdot(d.phi_t, d.l_sum * pc);
  const double prox = std::real(d.phi_t.dot(phi)) - d.n();
  return std::real(v) + std::real(tdot(phi, d.q)) + 2.0 * d.shift_obj * prox;
}

double Linearization::g1(const CVec& phi) const {
  const auto& d = *data;
  const CVec& pt = d.phi_t;
  const cd v = 2.0 * (pt.adjoint() * d.l2s * phi.conjugate()).value() -
               (pt.adjoint() * d.l2s * pt.conjugate()).value() +
               2.0 * (pt.transpose() * d.l3s * phi).value() -
               (pt.transpose() * d.l3s * pt).value();
  const double prox = std::real(pt.dot(phi)) - d.n();
  return std::real(v) + 2.0 * d.shift_snr * prox - d.gamma_th_prime;
}

Linearization qtmm_linearize(const IrsSubproblemData& d) {
  Linearization l;
  l.data = &d;
  return l;
}

CVec phase_update(const IrsSubproblemData& d, double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("phase_update: rho must be nonnegative");
  const CVec& pt = d.phi_t;
  CVec nu = d.l_sum.transpose() * pt;
  CVec kappa = d.l_sum * pt.conjugate() + d.q;
  if (rho > 0.0) {
    nu += 2.0 * rho * (d.l2s.transpose() * pt.conjugate());
    kappa += 2.0 * rho * (d.l3s.transpose() * pt);
  }
  const CVec shift = 2.0 * (d.shift_obj + rho * d.shift_snr) * pt;
  CVec phi(pt.size());
  for (Eigen::Index i = 0; i < pt.size(); ++i) {
    const cd s = nu[i] + std::conj(kappa[i]) + shift[i];
    const double ang = (s == cd(0.0, 0.0)) ? 0.0 : std::arg(s);
    phi[i] = cd(std::cos(ang), std::sin(ang));
  }
  return phi;
}

namespace {

bool true_snr_ok(const IrsSubproblemData& d, const CVec& phi) {
  return irs_true_snr(d, phi) >= d.gamma_th;
}

}  // namespace

namespace {

// phase_update(d, rho) and g1 restricted to the ray rho >= 0: the unnormalized
// phase argument is base + rho slope, and g1 is affine in phi.
struct PhaseRay {
  CVec base;
  CVec slope;
  CVec g1_coef;
  double g1_const = 0.0;

  explicit PhaseRay(const IrsSubproblemData& d) {
    const CVec& pt = d.phi_t;
    const CVec ptc = pt.conjugate();
    base = (d.l_sum.transpose() * pt + (d.l_sum * ptc + d.q).conjugate()) + 2.0 * d.shift_obj * pt;
    slope = 2.0 * (d.l2s.transpose() * ptc) + 2.0 * (d.l3s.transpose() * pt).conjugate() +
            2.0 * d.shift_snr * pt;
    // Re(2 phi_t^H L2s phi^*) = Re(phi^T 2 L2s^H phi_t), Re(2 phi_t^T L3s phi) = Re(phi^T 2 L3s^T phi_t).
    g1_coef = 2.0 * (d.l2s.adjoint() * pt) + 2.0 * (d.l3s.transpose() * pt) + 2.0 * d.shift_snr * ptc;
    g1_const = std::real((pt.adjoint() * d.l2s * ptc).value() + (pt.transpose() * d.l3s * pt).value());
    g1_const = -g1_const - 2.0 * d.shift_snr * d.n() - d.gamma_th_prime;
  }

  CVec phi(double rho) const {
    CVec out(base.size());
    for (Eigen::Index i = 0; i < base.size(); ++i) {
      const cd s = base[i] + rho * slope[i];
      const double ang = s == cd(0.0, 0.0) ? 0.0 : std::arg(s);
      out[i] = cd(std::cos(ang), std::sin(ang));
    }
    return out;
  }

  double g1(const CVec& phi) const { return std::real(tdot(phi, g1_coef)) + g1_const; }
};

}  // namespace

IrsSolution qtmm_step(const IrsSubproblemData& d, const SystemConfig& cfg) {
  if (!(cfg.eps_in > 0.0)) throw std::invalid_argument("qtmm_step: eps_in must be positive");
  const PhaseRay ray(d);
  IrsSolution out;
  auto finish = [&](CVec phi, double rho, bool surrogate_ok) {
    out.phi = std::move(phi);
    out.rho_star = rho;
    out.feasible_surrogate = surrogate_ok;
    out.feasible_true_snr = true_snr_ok(d, out.phi);
    return out;
  };

  CVec phi0 = ray.phi(0.0);
  if (ray.g1(phi0) >= 0.0) return finish(std::move(phi0), 0.0, true);

  // Doubling search for an upper multiplier.
  CVec best = phi0;
  double best_g1 = ray.g1(phi0);
  double best_rho = 0.0;
  int x = cfg.x_ini;
  CVec phi_ub;
  bool bracketed = false;
  for (; x <= cfg.x_ini + 64; ++x) {
    const double rho = std::ldexp(1.0, x);
    CVec phi = ray.phi(rho);
    const double g = ray.g1(phi);
    if (g >= 0.0) {
      phi_ub = std::move(phi);
      bracketed = true;
      break;
    }
    if (g > best_g1) {
      best_g1 = g;
      best = std::move(phi);
      best_rho = rho;
    }
  }
  if (!bracketed) return finish(std::move(best), best_rho, false);

  double ub = std::ldexp(1.0, x);
  double lb = std::ldexp(1.0, x - 1);
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lb + ub);
    CVec phi = ray.phi(mid);
    const double g = ray.g1(phi);
    if (g >= 0.0 && g <= cfg.eps_in) return finish(std::move(phi), mid, true);
    if (g < 0.0) {
      lb = mid;
    } else {
      ub = mid;
      phi_ub = std::move(phi);
    }
  }
  return finish(std::move(phi_ub), ub, true);
}

IrsSolution qtmm_update(IrsSubproblemData& d, const SystemConfig& cfg) {
  IrsSolution sol = qtmm_step(d, cfg);
  int k = 1;
  // From an SNR-infeasible anchor the large-rho steps climb the SNR minorant;
  // re-anchoring at them raises the true SNR until the bound can be met.
  for (; k < cfg.qtmm_inner && !sol.feasible_surrogate; ++k) {
    if (!(irs_true_snr(d, sol.phi) > irs_true_snr(d, d.phi_t))) break;
    reanchor(d, sol.phi);
    sol = qtmm_step(d, cfg);
  }
  double prev = irs_objective(d, d.phi_t);
  for (; k < cfg.qtmm_inner && sol.feasible_surrogate; ++k) {
    const double obj = irs_objective(d, sol.phi);
    reanchor(d, sol.phi);
    if (std::abs(obj - prev) <= cfg.qtmm_inner_tol * std::max(1.0, std::abs(prev))) break;
    prev = obj;
    IrsSolution next = qtmm_step(d, cfg);
    if (!next.feasible_surrogate) break;
    sol = std::move(next);
  }
  return sol;
}

IrsSolution qtsdr_step(const IrsSubproblemData& d, const SystemConfig& cfg, Rng& rng) {
  if (cfg.randomization_count < 1)
    throw std::invalid_argument("qtsdr_step: randomization_count must be at least 1");
  const int n = d.n();
  const int dim = 2 * n + 1;

  // Objective x^T Q0 x over x = [Re phi; Im phi; 1].
  RMat q0 = RMat::Zero(dim, dim);
  q0.topLeftCorner(2 * n, 2 * n) = sdp::real_embedding(d.l_sum.conjugate());
  for (int i = 0; i < n; ++i) {
    q0(i, 2 * n) = q0(2 * n, i) = 0.5 * d.q[i].real();
    q0(n + i, 2 * n) = q0(2 * n, n + i) = -0.5 * d.q[i].imag();
  }
  // Surrogate SNR quadratic part: 2 Re(phi^T S phi) = x^T K x.
  const RMat sr = d.l3s.real();
  const RMat si = d.l3s.imag();
  RMat k = RMat::Zero(dim, dim);
  k.block(0, 0, n, n) = 2.0 * sr;
  k.block(0, n, n, n) = -2.0 * si;
  k.block(n, 0, n, n) = -2.0 * si;
  k.block(n, n, n, n) = -2.0 * sr;

  sdp::Problem prob;
  prob.block_sizes = {dim};
  const double oscale = q0.cwiseAbs().maxCoeff();
  prob.objective.push_back(oscale > 0.0 ? RMat(-q0 / oscale) : RMat(-q0));
  for (int i = 0; i < n; ++i) {
    sdp::Constraint c;
    sdp::BlockCoef b;
    b.entries = {{i, i, 1.0}, {n + i, n + i, 1.0}};
    c.blocks.push_back(b);
    c.rhs = 1.0;
    prob.constraints.push_back(c);
  }
  {
    sdp::Constraint c;
    sdp::BlockCoef b;
    b.entries = {{2 * n, 2 * n, 1.0}};
    c.blocks.push_back(b);
    c.rhs = 1.0;
    prob.constraints.push_back(c);
  }
  const double kscale = k.cwiseAbs().maxCoeff();
  if (kscale > 0.0) {
    sdp::Constraint c;
    sdp::BlockCoef b;
    b.dense = true;
    b.matrix = k / kscale;
    c.blocks.push_back(b);
    c.lp.push_back({0, -1.0});
    c.rhs = d.gamma_th_prime / kscale;
    prob.constraints.push_back(c);
    prob.lp_size = 1;
  }
  prob.objective_lp = RVec::Zero(prob.lp_size);

  IrsSolution out;
  const sdp::Solution sol = sdp::solve(prob);
  if (sol.status == sdp::Status::numerical_failure) {
    out.phi = d.phi_t;
    out.failed = true;
    out.feasible_true_snr = true_snr_ok(d, out.phi);
    out.feasible_surrogate = irs_snr_surrogate(d, out.phi) >= d.gamma_th;
    return out;
  }

  // Gaussian randomization from N(0, X).
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (sol.x[0] + sol.x[0].transpose()));
  const RMat fac = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  std::normal_distribution<double> nd(0.0, 1.0);
  const double tol = 1e-9 * std::max(1.0, std::abs(d.gamma_th_prime));

  CVec best_any, best_feas;
  double obj_any = -std::numeric_limits<double>::infinity();
  double obj_feas = obj_any;
  RVec r(dim);
  for (int c = 0; c < cfg.randomization_count; ++c) {
    for (int i = 0; i < dim; ++i) r[i] = nd(rng);
    RVec xi = fac * r;
    if (xi[2 * n] < 0.0) xi = -xi;
    CVec phi(n);
    for (int i = 0; i < n; ++i) {
      const cd s(xi[i], xi[n + i]);
      const double ang = s == cd(0.0, 0.0) ? 0.0 : std::arg(s);
      phi[i] = cd(std::cos(ang), std::sin(ang));
    }
    const double obj = irs_objective(d, phi);
    const double snr_lhs = irs_snr_surrogate(d, phi) + d.snr_scale * d.zt;
    if (obj > obj_any) {
      obj_any = obj;
      best_any = phi;
    }
    if (snr_lhs >= d.gamma_th_prime - tol && obj > obj_feas) {
      obj_feas = obj;
      best_feas = phi;
    }
  }
  out.feasible_surrogate = best_feas.size() > 0;
  out.phi = out.feasible_surrogate ? best_feas : best_any;
  out.feasible_true_snr = true_snr_ok(d, out.phi);
  out.failed = sol.status != sdp::Status::optimal;
  return out;
}

}  // namespace irsdfrc
