#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "model.hpp"

namespace coflow {

// Coflow-benchmark text format:
//   <num_ports> <num_coflows>
//   <id> <arrival_ms> <num_mappers> <mapper ports...> <num_reducers> <port:size_MB ...>
// A reducer's total is split evenly across the mappers, one flow per
// (mapper, reducer) pair. Arrival times are parsed and ignored: every coflow
// is present at time 0 in this model.

struct TraceReducer {
  int rack = 0;
  double size_mb = 0.0;
};

struct TraceCoflow {
  int id = 0;
  double arrival_ms = 0.0;
  std::vector<int> mapper_racks;
  std::vector<TraceReducer> reducers;
};

struct Trace {
  int num_ports = 0;
  std::vector<TraceCoflow> coflows;

  // Per-flow sizes in file order (reducer total / mapper count per flow).
  std::vector<double> flow_sizes() const;
};

Trace import_trace(const std::string& path);
Trace parse_trace(std::istream& in, const std::string& name);

// Empirical size distribution of the trace's observed per-flow sizes,
// uniformly weighted. Throws on an empty trace.
SizeSpec empirical_from_trace(const Trace& trace);

enum class StructureSource { Synthetic, TraceUpsample };

struct GenConfig {
  int num_ports = 4;    // even
  int num_coflows = 1;
  SizeSpec size_spec;   // carried by every generated flow
  StructureSource structure = StructureSource::Synthetic;
  std::string trace_path;  // skeleton and/or empirical-size source
  // Replace size_spec with the empirical distribution of the trace's
  // per-flow sizes before generating.
  bool sizes_from_trace = false;
  double capacity = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Random instance generation. Synthetic mode draws mapper and reducer counts
// uniformly from {1..L/2} and places one flow per (mapper, reducer) pair on
// distinct uniformly sampled ports. TraceUpsample samples coflow skeletons
// from the parsed trace and remaps their racks onto this instance's ports;
// when (L, n) equal the trace dimensions the trace structure is kept as-is.
// All coflow weights are 1. Deterministic given (cfg, cfg.seed).
Instance generate_instance(const GenConfig& cfg);
Instance generate_instance(const GenConfig& cfg, const Trace* trace);

}  // namespace coflow
