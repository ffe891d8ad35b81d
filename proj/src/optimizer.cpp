// SPDX-License-Identifier: Apache-2.0
#include "irsdfrc/optimizer.hpp"

#include <chrono>
#include <cmath>

#include "irsdfrc/irs.hpp"

namespace irsdfrc {

std::string to_string(Method m) { return m == Method::qtmm ? "qtmm" : "qtsdr"; }

Method method_from_string(const std::string& s) {
  if (s == "qtmm") return Method::qtmm;
  if (s == "qtsdr") return Method::qtsdr;
  throw ConfigError("unknown method '" + s + "' (expected qtmm or qtsdr)");
}

std::pair<DesignState, AuxState> initialize_state(const ChannelSet& estimate,
                                                  const SystemConfig& cfg, Rng& rng) {
  cfg.validate();
  estimate.validate();
  const int n = estimate.n_irs();
  const int nt = estimate.n_tx();
  DesignState s;
  s.phi = CVec::Ones(n);
  if (cfg.phi_init == PhiInit::random) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    for (int i = 0; i < n; ++i) {
      const double t = u(rng);
      s.phi[i] = cd(std::cos(t), std::sin(t));
    }
  }
  const EffectiveChannels eff = effective_channels(estimate, s.phi, cfg);
  const double nu = eff.c_u.norm();
  const double p_info = cfg.omega * cfg.p_radar;
  s.w = (nu > 0.0 && p_info > 0.0) ? CVec(std::sqrt(p_info) * eff.c_u.conjugate() / nu)
                                   : CVec(CVec::Zero(nt));
  s.w_n = std::sqrt((1.0 - cfg.omega) * cfg.p_radar / nt) * CMat::Identity(nt, nt);
  const AuxState aux = update_aux(eff, s, cfg.noise_user, cfg.noise_ed);
  return {s, aux};
}

RunResult optimize(const CsiView& scenario, const SystemConfig& cfg, Method method) {
  Rng rng(cfg.seed);
  return optimize(scenario, cfg, method, rng);
}

RunResult optimize(const CsiView& scenario, const SystemConfig& cfg, Method method, Rng& rng) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const ChannelSet& est = scenario.estimate;
  const ChannelSet& truth = scenario.truth;

  auto [state, aux] = initialize_state(est, cfg, rng);
  RunResult res;
  res.initial_state = state;
  res.initial_secrecy = evaluate(truth, state, cfg).rates.secrecy;

  auto est_secrecy = [&](const DesignState& s) {
    return achievable_rates(effective_channels(est, s.phi, cfg), s, cfg.noise_user, cfg.noise_ed)
        .secrecy;
  };
  DesignState best = state;
  double best_obj = est_secrecy(state);
  double best_true = res.initial_secrecy;
  double prev_obj = best_obj;
  bool any_waveform = false;

  for (int t = 1; t <= cfg.t_max; ++t) {
    IterationRecord rec;
    rec.index = t;

    // Waveform / AN step at fixed phi.
    EffectiveChannels eff = effective_channels(est, state.phi, cfg);
    aux = update_aux(eff, state, cfg.noise_user, cfg.noise_ed);
    const SurrogatePieces pieces = assemble_pieces(aux, eff, cfg.noise_user, cfg.noise_ed);
    const WaveformSolution ws = solve_waveform_an(pieces, eff, cfg);
    rec.waveform_status = ws.status;
    if (ws.status == SolveStatus::optimal) {
      state.w = ws.w;
      state.w_n = psd_sqrt(ws.r_wn);
      any_waveform = true;
    }

    // IRS step at fixed (w, W_n); the auxiliaries are refreshed so the
    // surrogate touches the secrecy rate at the new waveform.
    aux = update_aux(eff, state, cfg.noise_user, cfg.noise_ed);
    IrsSubproblemData data = assemble_irs_data(est, state, aux, cfg);
    const IrsSolution is =
        method == Method::qtmm ? qtmm_update(data, cfg) : qtsdr_step(data, cfg, rng);
    state.phi = is.phi;
    rec.irs_feasible_surrogate = is.feasible_surrogate;
    rec.irs_failed = is.failed;
    if (method == Method::qtmm) rec.rho_star = is.rho_star;

    const Metrics m = evaluate(truth, state, cfg);
    rec.secrecy_rate = m.rates.secrecy;
    rec.r_u = m.rates.r_u;
    rec.r_te = m.rates.r_te;
    rec.gamma_r_true = m.gamma_r;
    rec.irs_feasible_true = m.gamma_r >= cfg.gamma_r_th;

    double obj = est_secrecy(state);
    if (!cfg.keep_best || obj > best_obj) {
      best = state;
      best_obj = obj;
      best_true = m.rates.secrecy;
    }
    if (cfg.keep_best) obj = best_obj;
    rec.output_secrecy = cfg.keep_best ? best_true : m.rates.secrecy;
    rec.wall_time_s = std::chrono::duration<double>(clock::now() - t0).count();
    res.trace.push_back(rec);
    res.iterations_used = t;

    const double change = std::abs(obj - prev_obj);
    const double denom = std::abs(prev_obj);
    prev_obj = obj;
    if (denom > 0.0 ? change / denom <= cfg.epsilon : change <= cfg.epsilon) {
      res.converged = any_waveform;
      break;
    }
  }
  res.final_state = cfg.keep_best ? best : state;
  res.wall_time_s = std::chrono::duration<double>(clock::now() - t0).count();
  return res;
}

namespace {

nlohmann::json complex_json(const CMat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json complex_json(const CVec& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

}  // namespace

nlohmann::json to_json(const RunResult& r) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& it : r.trace) {
    nlohmann::json j = {{"index", it.index},
                        {"output_secrecy", it.output_secrecy},
                        {"secrecy_rate", it.secrecy_rate},
                        {"r_u", it.r_u},
                        {"r_te", it.r_te},
                        {"gamma_r_true", it.gamma_r_true},
                        {"waveform_status", to_string(it.waveform_status)},
                        {"irs_feasible_true", it.irs_feasible_true},
                        {"irs_feasible_surrogate", it.irs_feasible_surrogate},
                        {"irs_failed", it.irs_failed},
                        {"wall_time_s", it.wall_time_s}};
    j["rho_star"] = it.rho_star ? nlohmann::json(*it.rho_star) : nlohmann::json(nullptr);
    trace.push_back(j);
  }
  nlohmann::json phases = nlohmann::json::array();
  for (Eigen::Index i = 0; i < r.final_state.phi.size(); ++i)
    phases.push_back(std::arg(r.final_state.phi[i]));
  return {{"trace", trace},
          {"initial_secrecy", r.initial_secrecy},
          {"converged", r.converged},
          {"iterations_used", r.iterations_used},
          {"final_phi_phases", phases},
          {"final_w", complex_json(r.final_state.w)},
          {"final_w_n", complex_json(r.final_state.w_n)}};
}

}  // namespace irsdfrc
