#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "simulator.hpp"
#include "workload.hpp"

namespace coflow {

enum class Reference { LP, CL };

struct Cell {
  int num_ports = 4;
  int num_coflows = 4;
};

// One experiment: a grid of (L, n) cells, I random instances per cell, each
// policy scored as the mean weighted CCT over R shared realizations, then
// expressed as a ratio to the reference (the LP lower bound, or the
// clairvoyant policy's mean when the LP is out of reach).
struct ExperimentConfig {
  std::vector<Cell> cells;
  SizeSpec size_spec;
  // Replace size_spec with the empirical distribution of the trace's flow
  // sizes (requires trace_path).
  bool sizes_from_trace = false;
  StructureSource structure = StructureSource::Synthetic;
  std::string trace_path;
  int num_instances = 100;
  int num_realizations = 1000;
  std::vector<NamedPolicy> policies = {NamedPolicy::CL, NamedPolicy::NC, NamedPolicy::RR};
  Reference reference = Reference::LP;
  std::uint64_t seed = 1;
  std::string out_dir;  // empty: nothing written
  int jobs = 1;         // worker threads; no effect on outputs
  PhConfig ph;

  void validate() const;
};

struct StatsRow {
  int num_ports = 0;
  int num_coflows = 0;
  std::string policy;
  double mean = 0.0;
  double stddev = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  std::optional<double> ub;  // 4 * closed-form alpha bound, when applicable
};

struct CellResult {
  Cell cell;
  // ratios[p][i] = policy p's mean cost on instance i / reference value.
  std::vector<std::vector<double>> ratios;
  std::vector<double> reference_values;  // per instance
  std::vector<StatsRow> rows;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  std::vector<StatsRow> rows;  // flattened, cell-major
};

// Runs the full grid. Deterministic for a fixed config including seed,
// independent of the worker count. When out_dir is set, writes stats.csv,
// raw.csv, histograms.csv and run_meta.json there.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Rebuilds per-cell statistics from a raw.csv produced by run_experiment.
std::vector<StatsRow> report_from_raw(const std::string& raw_csv_path);

std::string stats_to_csv(const std::vector<StatsRow>& rows);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);

// Built-in heavy-tailed empirical flow-size table standing in for the
// public trace's distribution when the trace file itself is not available
// (aggregate cv in the low single digits, most mass in small flows).
SizeSpec fb_like_size_spec();

}  // namespace coflow
