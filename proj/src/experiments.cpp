// SPDX-License-Identifier: Apache-2.0
#include "irsdfrc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "irsdfrc/scenario.hpp"
#include "irsdfrc/signal_model.hpp"

namespace irsdfrc {

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::converge: return "converge";
    case ExperimentKind::sweep_omega: return "sweep-omega";
    case ExperimentKind::beampattern: return "beampattern";
    case ExperimentKind::feasible_rate: return "feasible-rate";
    case ExperimentKind::scaling: return "scaling";
    case ExperimentKind::csi_error: return "csi-error";
  }
  return "unknown";
}

ExperimentKind kind_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::converge, ExperimentKind::sweep_omega, ExperimentKind::beampattern,
                 ExperimentKind::feasible_rate, ExperimentKind::scaling, ExperimentKind::csi_error})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown experiment kind '" + s + "'");
}

void ExperimentSpec::validate() const {
  base.validate();
  if (realizations < 1) throw ConfigError("realizations must be at least 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (methods.empty()) throw ConfigError("at least one method is required");
  switch (kind) {
    case ExperimentKind::sweep_omega:
      if (omegas.empty()) throw ConfigError("sweep-omega needs a nonempty omega list");
      for (double w : omegas)
        if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("omega values must lie in [0, 1]");
      break;
    case ExperimentKind::feasible_rate:
      if (gammas_db.empty()) throw ConfigError("feasible-rate needs a nonempty threshold list");
      for (double g : gammas_db)
        if (!std::isfinite(g)) throw ConfigError("thresholds must be finite");
      break;
    case ExperimentKind::scaling:
      if (sizes.empty()) throw ConfigError("scaling needs a nonempty IRS size list");
      for (int n : sizes)
        if (n < 1) throw ConfigError("IRS sizes must be positive");
      break;
    case ExperimentKind::csi_error:
      if (sigmas_db.empty()) throw ConfigError("csi-error needs a nonempty error-variance list");
      for (double s : sigmas_db)
        if (std::isfinite(s) && !(db2lin(s) < 1.0))
          throw ConfigError("error variances must be below 0 dB");
      break;
    default: break;
  }
}

ExperimentSpec default_spec(ExperimentKind kind, const SystemConfig& base) {
  ExperimentSpec s;
  s.kind = kind;
  s.base = base;
  switch (kind) {
    case ExperimentKind::sweep_omega: s.omegas = {0.1, 0.3, 0.6, 0.8, 0.95}; break;
    case ExperimentKind::feasible_rate:
      s.gammas_db = {-6.0, -2.0, 2.0, 6.0, 10.0};
      s.base.set_irs_size(25);
      break;
    case ExperimentKind::scaling:
      s.sizes = {9, 16, 25, 36, 49, 64};
      s.realizations = 20;
      break;
    case ExperimentKind::csi_error:
      s.sigmas_db = {-std::numeric_limits<double>::infinity(), -10.0, -3.0};
      break;
    case ExperimentKind::beampattern: s.realizations = 1; break;
    default: break;
  }
  return s;
}

std::vector<std::string> CsvLayout::header() const {
  std::vector<std::string> h = key_names;
  for (const char* c : {"method", "mean", "variance", "count"}) h.emplace_back(c);
  h.insert(h.end(), extra_names.begin(), extra_names.end());
  return h;
}

CsvLayout layout_for(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::converge: return {{"iteration"}, {}};
    case ExperimentKind::sweep_omega: return {{"omega"}, {"mean_r_u", "mean_r_te"}};
    case ExperimentKind::feasible_rate:
      return {{"gamma_th_db"},
              {"feasible_fraction", "surrogate_fraction", "joint_fraction", "mean_gamma_r_db"}};
    case ExperimentKind::scaling: return {{"n_irs"}, {"mean_gamma_r_db", "mean_runtime_s"}};
    case ExperimentKind::csi_error: return {{"sigma_e2_db", "iteration"}, {"mean_mainlobe_db"}};
    case ExperimentKind::beampattern: break;
  }
  throw std::invalid_argument("layout_for: beampattern has no aggregate layout");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

Table to_table(const CsvLayout& layout, const std::vector<AggregateRow>& rows) {
  Table t;
  t.header = layout.header();
  for (const auto& r : rows) {
    if (r.keys.size() != layout.key_names.size() || r.extras.size() != layout.extra_names.size())
      throw std::invalid_argument("to_table: row does not match the layout");
    std::vector<std::string> cells;
    for (double k : r.keys) cells.push_back(format_double(k));
    cells.push_back(r.method);
    cells.push_back(format_double(r.mean));
    cells.push_back(format_double(r.variance));
    cells.push_back(std::to_string(r.count));
    for (double e : r.extras) cells.push_back(format_double(e));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void write_table(const Table& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) f << (i ? "," : "") << cells[i];
    f << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

void emit_csv(const CsvLayout& layout, const std::vector<AggregateRow>& rows,
              const std::string& path) {
  write_table(to_table(layout, rows), path);
}

Table read_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for reading");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  Table t;
  std::string line;
  if (std::getline(f, line)) t.header = split(line);
  while (std::getline(f, line)) t.rows.push_back(split(line));
  return t;
}

namespace {

// What the aggregation needs from one optimize() call.
struct RunSummary {
  bool ok = false;
  std::vector<double> secrecy;  // index 0 = initial, then one per iteration, padded to t_max
  double final_secrecy = 0.0;
  double final_r_u = 0.0;
  double final_r_te = 0.0;
  double final_gamma_r = 0.0;
  int updates = 0;
  int feasible_true = 0;
  int feasible_surrogate = 0;
  int feasible_joint = 0;
  double mainlobe_db = 0.0;
  double runtime_s = 0.0;
  nlohmann::json raw;
};

struct Task {
  size_t sweep = 0;  // index into the sweep list (0 when there is none)
  int realization = 0;
  SystemConfig cfg;
  std::vector<RunSummary> per_method;
  std::vector<DesignState> final_states;
  ChannelSet truth;
  std::string error;
};

RunSummary summarize(const RunResult& r, const CsiView& sc, const SystemConfig& cfg) {
  RunSummary s;
  s.ok = true;
  s.secrecy.push_back(r.initial_secrecy);
  for (const auto& it : r.trace) {
    s.secrecy.push_back(it.output_secrecy);
    ++s.updates;
    s.feasible_true += it.irs_feasible_true;
    s.feasible_surrogate += it.irs_feasible_surrogate;
    s.feasible_joint += it.irs_feasible_true && it.irs_feasible_surrogate;
  }
  s.final_secrecy = s.secrecy.back();
  while (static_cast<int>(s.secrecy.size()) < cfg.t_max + 1) s.secrecy.push_back(s.final_secrecy);
  const Metrics m = evaluate(sc.truth, r.final_state, cfg);
  s.final_r_u = m.rates.r_u;
  s.final_r_te = m.rates.r_te;
  s.final_gamma_r = m.gamma_r;
  s.mainlobe_db = lin2db(irs_gain(sc.truth, r.final_state, cfg, cfg.target));
  s.runtime_s = r.wall_time_s;
  s.raw = to_json(r);
  return s;
}

struct Stats {
  double mean = 0.0;
  double variance = 0.0;
  int count = 0;
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  s.count = static_cast<int>(v.size());
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= s.count;
  for (double x : v) s.variance += (x - s.mean) * (x - s.mean);
  s.variance /= s.count;
  return s;
}

double mean_of(const std::vector<double>& v) { return stats(v).mean; }

void run_pool(std::vector<Task>& tasks, int jobs, const std::vector<Method>& methods) {
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < tasks.size(); i = next++) {
      Task& t = tasks[i];
      try {
        Rng rng(t.cfg.seed);
        const CsiView sc = make_scenario(t.cfg, rng);
        t.truth = sc.truth;
        for (Method m : methods) {
          Rng mrng = rng;  // every method starts from the same stream position
          const RunResult r = optimize(sc, t.cfg, m, mrng);
          t.per_method.push_back(summarize(r, sc, t.cfg));
          t.final_states.push_back(r.final_state);
        }
      } catch (const std::exception& e) {
        t.error = e.what();
        t.per_method.assign(methods.size(), RunSummary{});
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (n == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

double sweep_key(const ExperimentSpec& spec, size_t i) {
  switch (spec.kind) {
    case ExperimentKind::sweep_omega: return spec.omegas[i];
    case ExperimentKind::feasible_rate: return spec.gammas_db[i];
    case ExperimentKind::scaling: return spec.sizes[i];
    case ExperimentKind::csi_error: return spec.sigmas_db[i];
    default: return 0.0;
  }
}

size_t sweep_count(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::sweep_omega: return spec.omegas.size();
    case ExperimentKind::feasible_rate: return spec.gammas_db.size();
    case ExperimentKind::scaling: return spec.sizes.size();
    case ExperimentKind::csi_error: return spec.sigmas_db.size();
    default: return 1;
  }
}

SystemConfig apply_sweep(const ExperimentSpec& spec, size_t i) {
  SystemConfig c = spec.base;
  switch (spec.kind) {
    case ExperimentKind::sweep_omega: c.omega = spec.omegas[i]; break;
    case ExperimentKind::feasible_rate: c.gamma_r_th = db2lin(spec.gammas_db[i]); break;
    case ExperimentKind::scaling: c.set_irs_size(spec.sizes[i]); break;
    case ExperimentKind::csi_error:
      c.sigma_e2 = std::isfinite(spec.sigmas_db[i]) ? db2lin(spec.sigmas_db[i]) : 0.0;
      break;
    default: break;
  }
  return c;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentOutput out;
  const size_t ns = sweep_count(spec);
  const int nr = spec.kind == ExperimentKind::beampattern ? 1 : spec.realizations;

  std::vector<Task> tasks;
  for (size_t s = 0; s < ns; ++s)
    for (int r = 0; r < nr; ++r) {
      Task t;
      t.sweep = s;
      t.realization = r;
      t.cfg = apply_sweep(spec, s);
      t.cfg.seed = spec.base.seed + static_cast<std::uint64_t>(r);
      t.cfg.validate();
      tasks.push_back(std::move(t));
    }
  run_pool(tasks, spec.jobs, spec.methods);

  // Tasks are already ordered by (sweep key index, seed).
  for (const auto& t : tasks) {
    if (!t.error.empty()) {
      out.errors.push_back("seed " + std::to_string(t.cfg.seed) + ": " + t.error);
      out.failed += static_cast<int>(spec.methods.size());
      continue;
    }
    out.completed += static_cast<int>(spec.methods.size());
    auto& raw = out.runs[t.cfg.seed];
    if (raw.is_null()) raw = nlohmann::json::array();
    for (size_t m = 0; m < spec.methods.size(); ++m) {
      nlohmann::json j = t.per_method[m].raw;
      j["method"] = to_string(spec.methods[m]);
      j["kind"] = to_string(spec.kind);
      if (ns > 1 || spec.kind != ExperimentKind::converge) j["sweep_value"] = sweep_key(spec, t.sweep);
      j["seed"] = t.cfg.seed;
      raw.push_back(std::move(j));
    }
  }

  const std::string kind = to_string(spec.kind);
  for (size_t m = 0; m < spec.methods.size(); ++m) {
    const std::string mname = to_string(spec.methods[m]);
    const std::string file = kind + "_" + mname + ".csv";

    if (spec.kind == ExperimentKind::beampattern) {
      const Task& t = tasks.front();
      if (!t.error.empty()) continue;
      const DesignState& st = t.final_states[m];
      const auto grid = default_radar_grid();
      const RadarPattern rp = beampattern_radar(st, t.cfg, grid);
      Table radar{{"angle_deg", "info_db", "an_db"}, {}};
      for (size_t i = 0; i < grid.size(); ++i)
        radar.rows.push_back({format_double(grid[i]), format_double(rp.info_db[i]),
                              format_double(rp.an_db[i])});
      out.tables["beampattern_radar_" + mname + ".csv"] = radar;
      const auto igrid = default_irs_grid(t.cfg);
      const IrsPattern ip = beampattern_irs(t.truth, st, t.cfg, igrid);
      Table irs{{"elevation_deg", "azimuth_deg", "gain_db"}, {}};
      for (size_t i = 0; i < igrid.size(); ++i)
        irs.rows.push_back({format_double(igrid[i].elevation_deg),
                            format_double(igrid[i].azimuth_deg), format_double(ip.gain_db[i])});
      out.tables["beampattern_irs_" + mname + ".csv"] = irs;
      continue;
    }

    std::vector<AggregateRow> rows;
    for (size_t s = 0; s < ns; ++s) {
      std::vector<const RunSummary*> done;
      for (const auto& t : tasks)
        if (t.sweep == s && t.error.empty() && t.per_method[m].ok) done.push_back(&t.per_method[m]);
      const double key = sweep_key(spec, s);
      const int t_max = tasks.empty() ? 0 : apply_sweep(spec, s).t_max;

      if (spec.kind == ExperimentKind::converge || spec.kind == ExperimentKind::csi_error) {
        std::vector<double> lobes;
        for (const auto* d : done) lobes.push_back(d->mainlobe_db);
        for (int it = 0; it <= t_max; ++it) {
          std::vector<double> v;
          for (const auto* d : done) v.push_back(d->secrecy[it]);
          const Stats st = stats(v);
          AggregateRow row;
          row.method = mname;
          row.mean = st.mean;
          row.variance = st.variance;
          row.count = st.count;
          if (spec.kind == ExperimentKind::converge) {
            row.keys = {static_cast<double>(it)};
          } else {
            row.keys = {key, static_cast<double>(it)};
            row.extras = {mean_of(lobes)};
          }
          rows.push_back(row);
        }
        continue;
      }

      std::vector<double> fin, ru, rte, gdb, rt;
      double upd = 0, ft = 0, fs = 0, fj = 0;
      for (const auto* d : done) {
        fin.push_back(d->final_secrecy);
        ru.push_back(d->final_r_u);
        rte.push_back(d->final_r_te);
        gdb.push_back(lin2db(d->final_gamma_r));
        rt.push_back(d->runtime_s);
        upd += d->updates;
        ft += d->feasible_true;
        fs += d->feasible_surrogate;
        fj += d->feasible_joint;
      }
      const Stats st = stats(fin);
      AggregateRow row;
      row.keys = {key};
      row.method = mname;
      row.mean = st.mean;
      row.variance = st.variance;
      row.count = st.count;
      if (spec.kind == ExperimentKind::sweep_omega) {
        row.extras = {mean_of(ru), mean_of(rte)};
      } else if (spec.kind == ExperimentKind::feasible_rate) {
        const double u = upd > 0 ? upd : 1.0;
        row.extras = {ft / u, fs / u, fj / u, mean_of(gdb)};
      } else {
        row.extras = {mean_of(gdb), mean_of(rt)};
      }
      rows.push_back(row);
    }
    out.tables[file] = to_table(layout_for(spec.kind), rows);
  }
  return out;
}

void write_outputs(const ExperimentOutput& out, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "runs");
  for (const auto& [name, table] : out.tables) write_table(table, (fs::path(out_dir) / name).string());
  for (const auto& [seed, j] : out.runs) {
    const auto path = fs::path(out_dir) / "runs" / (std::to_string(seed) + ".json");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f << j.dump(1) << '\n';
  }
}

}  // namespace irsdfrc
