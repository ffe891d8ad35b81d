// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "irsdfrc/config.hpp"
#include "irsdfrc/optimizer.hpp"

namespace irsdfrc {

enum class ExperimentKind { converge, sweep_omega, beampattern, feasible_rate, scaling, csi_error };

std::string to_string(ExperimentKind k);
ExperimentKind kind_from_string(const std::string& s);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::converge;
  SystemConfig base;
  std::vector<double> omegas;         // sweep-omega
  std::vector<double> gammas_db;      // feasible-rate
  std::vector<int> sizes;             // scaling
  std::vector<double> sigmas_db;      // csi-error; -inf means perfect CSI
  int realizations = 100;
  std::vector<Method> methods{Method::qtmm, Method::qtsdr};
  std::string out_dir = "out";
  int jobs = 1;

  /// Throws ConfigError when a list required by `kind` is empty or a count is < 1.
  void validate() const;
};

/// Defaults per kind (sweep lists, realization count, IRS size for feasible-rate).
ExperimentSpec default_spec(ExperimentKind kind, const SystemConfig& base = {});

/// One CSV line. Values are kept as doubles; `method` is the only text column.
struct AggregateRow {
  std::vector<double> keys;
  std::string method;
  double mean = 0.0;
  double variance = 0.0;  // population variance over completed runs
  int count = 0;
  std::vector<double> extras;
};

/// Column names of a row family:
///   <key_names...>,method,mean,variance,count,<extra_names...>
struct CsvLayout {
  std::vector<std::string> key_names;
  std::vector<std::string> extra_names;

  std::vector<std::string> header() const;
};

/// Layout per kind (beampattern uses plain tables instead).
///
///   converge       iteration | extras: -
///   sweep-omega    omega | mean_r_u, mean_r_te
///   feasible-rate  gamma_th_db | feasible_fraction, surrogate_fraction,
///                  joint_fraction, mean_gamma_r_db
///   scaling        n_irs | mean_gamma_r_db, mean_runtime_s
///   csi-error      sigma_e2_db, iteration | mean_mainlobe_db
///
/// mean/variance are of the secrecy rate (per iteration for converge and
/// csi-error, final value otherwise).
CsvLayout layout_for(ExperimentKind kind);

/// Plain table: header plus numeric rows, optionally led by a text column.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// printf("%.9g").
std::string format_double(double v);

Table to_table(const CsvLayout& layout, const std::vector<AggregateRow>& rows);

/// Writes header + rows, comma separated, newline terminated. Throws
/// std::runtime_error naming the path on I/O failure.
void write_table(const Table& t, const std::string& path);
void emit_csv(const CsvLayout& layout, const std::vector<AggregateRow>& rows,
              const std::string& path);

/// Reads a file written by write_table.
Table read_table(const std::string& path);

struct ExperimentOutput {
  /// File name (no directory) -> table, e.g. "converge_qtmm.csv".
  std::map<std::string, Table> tables;
  /// Raw traces keyed by realization seed.
  std::map<std::uint64_t, nlohmann::json> runs;
  std::vector<std::string> errors;
  int completed = 0;
  int failed = 0;
};

ExperimentOutput run_experiment(const ExperimentSpec& spec);

/// Writes tables into spec.out_dir and raw traces into spec.out_dir/runs.
void write_outputs(const ExperimentOutput& out, const std::string& out_dir);

}  // namespace irsdfrc
