// SPDX-License-Identifier: Apache-2.0
#include "irsdfrc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace irsdfrc {

namespace {

using nlohmann::json;

double finite_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("config key '" + key + "' must be finite");
  return x;
}

int integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<int>();
}

AnglePair angle_pair(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2)
    throw ConfigError("config key '" + key + "' must be [elevation_deg, azimuth_deg]");
  return {finite_number(v[0], key), finite_number(v[1], key)};
}

// A number applies to every channel; an object names channels individually.
PerChannel per_channel(const json& v, const std::string& key, double (*convert)(double)) {
  if (v.is_number()) return PerChannel::uniform(convert(finite_number(v, key)));
  if (!v.is_object()) throw ConfigError("config key '" + key + "' must be a number or object");
  PerChannel out = PerChannel::uniform(convert(0.0));
  bool seen[4] = {false, false, false, false};
  for (const auto& [name, val] : v.items()) {
    const double x = convert(finite_number(val, key + "." + name));
    if (name == "g") { out.g = x; seen[0] = true; }
    else if (name == "f") { out.f = x; seen[1] = true; }
    else if (name == "h_dl") { out.h_dl = x; seen[2] = true; }
    else if (name == "h_ul") { out.h_ul = x; seen[3] = true; }
    else throw ConfigError("unknown channel '" + name + "' in '" + key + "'");
  }
  if (!(seen[0] && seen[1] && seen[2] && seen[3]))
    throw ConfigError("config key '" + key + "' must name all of g, f, h_dl, h_ul");
  return out;
}

double identity(double x) { return x; }
double from_db(double x) { return db2lin(x); }

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "n_tx", "n_rx", "n_irs", "irs_layout", "spacing_over_lambda", "p_radar_dbm", "omega",
      "noise_radar_dbm", "noise_user_dbm", "noise_ed_dbm", "beta_db", "beta_h_db",
      "gamma_r_th_db", "target_angles", "user_angles_irs", "radar_angles_irs",
      "user_azimuth_radar", "irs_azimuth_radar", "rician_db", "sigma_e2_db", "zeta", "t_max",
      "epsilon_db", "randomization_count", "x_ini", "eps_in", "seed", "power_split",
      "phi_init", "mm_curvature", "qtmm_inner", "qtmm_inner_tol", "keep_best"};
  return keys;
}

}  // namespace

void SystemConfig::set_irs_size(int n) {
  if (n < 1) throw ConfigError("n_irs must be >= 1");
  int rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
  while (rows > 1 && n % rows != 0) --rows;
  irs_rows = rows;
  irs_cols = n / rows;
}

void SystemConfig::validate() const {
  if (n_tx < 1 || n_rx < 1) throw ConfigError("n_tx and n_rx must be >= 1");
  if (irs_rows < 1 || irs_cols < 1) throw ConfigError("IRS layout must be at least 1x1");
  if (!(omega >= 0.0 && omega <= 1.0)) throw ConfigError("omega must lie in [0, 1]");
  if (!(sigma_e2 >= 0.0 && sigma_e2 < 1.0)) throw ConfigError("sigma_e2 must lie in [0, 1)");
  if (!(p_radar >= 0.0) || !std::isfinite(p_radar)) throw ConfigError("p_radar must be >= 0");
  for (double n : {noise_radar, noise_user, noise_ed})
    if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError("noise powers must be > 0");
  if (!(beta >= 0.0) || !(beta_h >= 0.0)) throw ConfigError("path gains must be >= 0");
  if (!(gamma_r_th >= 0.0) || !std::isfinite(gamma_r_th))
    throw ConfigError("gamma_r_th must be finite");
  for (double k : {rician.g, rician.f, rician.h_dl, rician.h_ul})
    if (!(k >= 0.0) || !std::isfinite(k)) throw ConfigError("rician factors must be finite");
  for (double z : {zeta.g, zeta.f, zeta.h_dl, zeta.h_ul})
    if (!(z >= 0.0) || !std::isfinite(z)) throw ConfigError("zeta must be >= 0");
  if (t_max < 1) throw ConfigError("t_max must be >= 1");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (randomization_count < 1) throw ConfigError("randomization_count must be >= 1");
  if (!(eps_in > 0.0)) throw ConfigError("eps_in must be > 0");
  if (qtmm_inner < 1) throw ConfigError("qtmm_inner must be >= 1");
  if (!(qtmm_inner_tol >= 0.0)) throw ConfigError("qtmm_inner_tol must be >= 0");
  if (!(spacing_over_lambda > 0.0)) throw ConfigError("spacing_over_lambda must be > 0");
}

SystemConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");

  SystemConfig c;
  if (j.contains("n_tx")) c.n_tx = integer(j["n_tx"], "n_tx");
  if (j.contains("n_rx")) c.n_rx = integer(j["n_rx"], "n_rx");
  if (j.contains("n_irs")) c.set_irs_size(integer(j["n_irs"], "n_irs"));
  if (j.contains("irs_layout")) {
    const auto& v = j["irs_layout"];
    if (!v.is_array() || v.size() != 2) throw ConfigError("irs_layout must be [rows, cols]");
    c.irs_rows = integer(v[0], "irs_layout");
    c.irs_cols = integer(v[1], "irs_layout");
    if (j.contains("n_irs") && c.n_irs() != j["n_irs"].get<int>())
      throw ConfigError("irs_layout rows*cols must equal n_irs");
  }
  if (j.contains("spacing_over_lambda"))
    c.spacing_over_lambda = finite_number(j["spacing_over_lambda"], "spacing_over_lambda");
  if (j.contains("p_radar_dbm")) c.p_radar = db2lin(finite_number(j["p_radar_dbm"], "p_radar_dbm"));
  if (j.contains("omega")) c.omega = finite_number(j["omega"], "omega");
  if (j.contains("noise_radar_dbm"))
    c.noise_radar = db2lin(finite_number(j["noise_radar_dbm"], "noise_radar_dbm"));
  if (j.contains("noise_user_dbm"))
    c.noise_user = db2lin(finite_number(j["noise_user_dbm"], "noise_user_dbm"));
  if (j.contains("noise_ed_dbm"))
    c.noise_ed = db2lin(finite_number(j["noise_ed_dbm"], "noise_ed_dbm"));
  // |beta| is an amplitude coefficient.
  if (j.contains("beta_db")) c.beta = std::pow(10.0, finite_number(j["beta_db"], "beta_db") / 20.0);
  if (j.contains("beta_h_db")) c.beta_h = db2lin(finite_number(j["beta_h_db"], "beta_h_db"));
  if (j.contains("gamma_r_th_db"))
    c.gamma_r_th = db2lin(finite_number(j["gamma_r_th_db"], "gamma_r_th_db"));
  if (j.contains("target_angles")) c.target = angle_pair(j["target_angles"], "target_angles");
  if (j.contains("user_angles_irs")) c.user_irs = angle_pair(j["user_angles_irs"], "user_angles_irs");
  if (j.contains("radar_angles_irs"))
    c.radar_irs = angle_pair(j["radar_angles_irs"], "radar_angles_irs");
  if (j.contains("user_azimuth_radar"))
    c.user_azimuth_radar = finite_number(j["user_azimuth_radar"], "user_azimuth_radar");
  if (j.contains("irs_azimuth_radar"))
    c.irs_azimuth_radar = finite_number(j["irs_azimuth_radar"], "irs_azimuth_radar");
  if (j.contains("rician_db")) c.rician = per_channel(j["rician_db"], "rician_db", from_db);
  if (j.contains("zeta")) c.zeta = per_channel(j["zeta"], "zeta", identity);
  if (j.contains("sigma_e2_db")) {
    const auto& v = j["sigma_e2_db"];
    if (v.is_string()) {
      if (v.get<std::string>() != "none") throw ConfigError("sigma_e2_db must be a number or \"none\"");
      c.sigma_e2 = 0.0;
    } else {
      c.sigma_e2 = db2lin(finite_number(v, "sigma_e2_db"));
    }
  }
  if (j.contains("t_max")) c.t_max = integer(j["t_max"], "t_max");
  if (j.contains("epsilon_db")) c.epsilon = db2lin(finite_number(j["epsilon_db"], "epsilon_db"));
  if (j.contains("randomization_count"))
    c.randomization_count = integer(j["randomization_count"], "randomization_count");
  if (j.contains("x_ini")) c.x_ini = integer(j["x_ini"], "x_ini");
  if (j.contains("eps_in")) c.eps_in = finite_number(j["eps_in"], "eps_in");
  if (j.contains("keep_best")) {
    if (!j["keep_best"].is_boolean()) throw ConfigError("keep_best must be a boolean");
    c.keep_best = j["keep_best"].get<bool>();
  }
  if (j.contains("qtmm_inner")) c.qtmm_inner = integer(j["qtmm_inner"], "qtmm_inner");
  if (j.contains("qtmm_inner_tol"))
    c.qtmm_inner_tol = finite_number(j["qtmm_inner_tol"], "qtmm_inner_tol");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw ConfigError("seed must be a non-negative integer");
    if (j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() < 0)
      throw ConfigError("seed must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("power_split")) {
    const auto s = j["power_split"].is_string() ? j["power_split"].get<std::string>() : "";
    if (s == "total") c.power_split = PowerSplit::total;
    else if (s == "omega") c.power_split = PowerSplit::omega;
    else throw ConfigError("power_split must be \"total\" or \"omega\"");
  }
  if (j.contains("phi_init")) {
    const auto s = j["phi_init"].is_string() ? j["phi_init"].get<std::string>() : "";
    if (s == "random") c.phi_init = PhiInit::random;
    else if (s == "ones") c.phi_init = PhiInit::ones;
    else throw ConfigError("phi_init must be \"random\" or \"ones\"");
  }
  if (j.contains("mm_curvature")) {
    const auto s = j["mm_curvature"].is_string() ? j["mm_curvature"].get<std::string>() : "";
    if (s == "shifted") c.mm_curvature = MmCurvature::shifted;
    else if (s == "none") c.mm_curvature = MmCurvature::none;
    else throw ConfigError("mm_curvature must be \"shifted\" or \"none\"");
  }
  c.validate();
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const SystemConfig& c) {
  auto per = [](const PerChannel& p, bool db) {
    auto conv = [db](double x) { return db ? lin2db(x) : x; };
    return json{{"g", conv(p.g)}, {"f", conv(p.f)}, {"h_dl", conv(p.h_dl)}, {"h_ul", conv(p.h_ul)}};
  };
  json j;
  j["n_tx"] = c.n_tx;
  j["n_rx"] = c.n_rx;
  j["n_irs"] = c.n_irs();
  j["irs_layout"] = {c.irs_rows, c.irs_cols};
  j["spacing_over_lambda"] = c.spacing_over_lambda;
  j["p_radar_dbm"] = lin2db(c.p_radar);
  j["omega"] = c.omega;
  j["noise_radar_dbm"] = lin2db(c.noise_radar);
  j["noise_user_dbm"] = lin2db(c.noise_user);
  j["noise_ed_dbm"] = lin2db(c.noise_ed);
  j["beta_db"] = 20.0 * std::log10(c.beta);
  j["beta_h_db"] = lin2db(c.beta_h);
  j["gamma_r_th_db"] = lin2db(c.gamma_r_th);
  j["target_angles"] = {c.target.elevation_deg, c.target.azimuth_deg};
  j["user_angles_irs"] = {c.user_irs.elevation_deg, c.user_irs.azimuth_deg};
  j["radar_angles_irs"] = {c.radar_irs.elevation_deg, c.radar_irs.azimuth_deg};
  j["user_azimuth_radar"] = c.user_azimuth_radar;
  j["irs_azimuth_radar"] = c.irs_azimuth_radar;
  j["rician_db"] = per(c.rician, true);
  j["zeta"] = per(c.zeta, false);
  if (c.sigma_e2 > 0.0) j["sigma_e2_db"] = lin2db(c.sigma_e2);
  else j["sigma_e2_db"] = "none";
  j["t_max"] = c.t_max;
  j["epsilon_db"] = lin2db(c.epsilon);
  j["randomization_count"] = c.randomization_count;
  j["x_ini"] = c.x_ini;
  j["eps_in"] = c.eps_in;
  j["keep_best"] = c.keep_best;
  j["qtmm_inner"] = c.qtmm_inner;
  j["qtmm_inner_tol"] = c.qtmm_inner_tol;
  j["seed"] = c.seed;
  j["power_split"] = c.power_split == PowerSplit::total ? "total" : "omega";
  j["phi_init"] = c.phi_init == PhiInit::random ? "random" : "ones";
  j["mm_curvature"] = c.mm_curvature == MmCurvature::shifted ? "shifted" : "none";
  return j;
}

}  // namespace irsdfrc
