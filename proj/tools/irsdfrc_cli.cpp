// SPDX-License-Identifier: Apache-2.0
// Monte-Carlo experiment driver.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "irsdfrc/experiments.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_number(const std::string& s) {
  if (s == "none" || s == "-inf") return -std::numeric_limits<double>::infinity();
  size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw irsdfrc::ConfigError("not a number: '" + s + "'");
  return v;
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string methods = "qtmm,qtsdr";
  std::optional<int> realizations;
  int jobs = 0;
  std::string sweep;  // kind-specific list override
};

}  // namespace

int main(int argc, char** argv) {
  using namespace irsdfrc;
  CLI::App app{"IRS-assisted secure DFRC experiments"};
  app.require_subcommand(1);

  Common opt;
  struct Sub {
    ExperimentKind kind;
    const char* help;
    const char* sweep_flag;
  };
  const std::vector<Sub> subs = {
      {ExperimentKind::converge, "per-iteration secrecy rate", nullptr},
      {ExperimentKind::sweep_omega, "final rates versus information power ratio", "--omegas"},
      {ExperimentKind::beampattern, "transmit and IRS beampatterns of one run", nullptr},
      {ExperimentKind::feasible_rate, "radar SNR feasibility versus threshold (dB)", "--gammas"},
      {ExperimentKind::scaling, "secrecy, radar SNR and runtime versus IRS size", "--sizes"},
      {ExperimentKind::csi_error, "convergence under channel estimation error (dB)", "--sigmas"},
  };
  std::vector<std::pair<CLI::App*, ExperimentKind>> cmds;
  for (const auto& s : subs) {
    CLI::App* c = app.add_subcommand(to_string(s.kind), s.help);
    c->add_option("--config", opt.config, "JSON configuration file");
    c->add_option("--seed", opt.seed, "base seed; realization r uses seed + r");
    c->add_option("--out", opt.out, "output directory")->capture_default_str();
    c->add_option("--methods", opt.methods, "comma separated subset of qtmm,qtsdr")
        ->capture_default_str();
    c->add_option("--realizations", opt.realizations, "Monte-Carlo realizations");
    c->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)");
    if (s.sweep_flag) c->add_option(s.sweep_flag, opt.sweep, "comma separated sweep values");
    cmds.emplace_back(c, s.kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ExperimentSpec spec;
  try {
    ExperimentKind kind = ExperimentKind::converge;
    for (const auto& [c, k] : cmds)
      if (c->parsed()) kind = k;
    SystemConfig base = opt.config.empty() ? SystemConfig{} : load_config(opt.config);
    if (opt.seed) base.seed = *opt.seed;
    spec = default_spec(kind, base);
    if (opt.realizations) spec.realizations = *opt.realizations;
    spec.out_dir = opt.out;
    spec.jobs = opt.jobs > 0 ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
    spec.methods.clear();
    for (const auto& m : split_list(opt.methods)) spec.methods.push_back(method_from_string(m));
    if (!opt.sweep.empty()) {
      const auto items = split_list(opt.sweep);
      switch (kind) {
        case ExperimentKind::sweep_omega:
          spec.omegas.clear();
          for (const auto& i : items) spec.omegas.push_back(parse_number(i));
          break;
        case ExperimentKind::feasible_rate:
          spec.gammas_db.clear();
          for (const auto& i : items) spec.gammas_db.push_back(parse_number(i));
          break;
        case ExperimentKind::scaling:
          spec.sizes.clear();
          for (const auto& i : items) spec.sizes.push_back(static_cast<int>(parse_number(i)));
          break;
        case ExperimentKind::csi_error:
          spec.sigmas_db.clear();
          for (const auto& i : items) spec.sigmas_db.push_back(parse_number(i));
          break;
        default: break;
      }
    }
    spec.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    const ExperimentOutput out = run_experiment(spec);
    for (const auto& e : out.errors) std::cerr << "run failed: " << e << '\n';
    write_outputs(out, spec.out_dir);
    std::cout << to_string(spec.kind) << ": " << out.completed << " runs completed, " << out.failed
              << " failed; results in " << spec.out_dir << '\n';
    return out.completed > 0 ? 0 : 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "experiment failed: " << e.what() << '\n';
    return 3;
  }
}
