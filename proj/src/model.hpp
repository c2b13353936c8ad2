#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "distributions.hpp"

namespace coflow {

// Big-switch model: L ports, the first L/2 are ingress, the rest egress.
// Only ports constrain rates; the fabric core is assumed non-blocking.

enum class PortKind { Ingress, Egress };

struct Port {
  int id = 0;
  PortKind kind = PortKind::Ingress;
  double capacity = 1.0;  // data units per time unit
};

struct FlowSpec {
  int coflow_id = 0;  // external id of the owning coflow
  int flow_id = 0;    // index within the coflow
  int src = 0;        // ingress port id
  int dst = 0;        // egress port id
  SizeSpec size;
};

struct Coflow {
  int id = 0;
  double weight = 1.0;
  std::vector<FlowSpec> flows;
};

struct Instance {
  std::vector<Port> ports;
  std::vector<Coflow> coflows;

  int num_ports() const { return static_cast<int>(ports.size()); }
  int num_coflows() const { return static_cast<int>(coflows.size()); }
  int num_flows() const;
  int ingress_count() const { return num_ports() / 2; }

  // Checks all structural invariants; throws ValidationError.
  void validate() const;
};

// One sampled set of flow volumes, indexed [coflow position][flow position].
struct Realization {
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> volumes;
};

enum class LoadKind { Expected, Realized };

// Per-port processing times: values(l, k) is the time port l needs to push
// all of coflow k's traffic in isolation.
struct LoadMatrix {
  LoadKind kind = LoadKind::Expected;
  int num_ports = 0;
  int num_coflows = 0;
  std::vector<double> values;  // row-major by port

  double at(int port, int coflow) const { return values[static_cast<std::size_t>(port) * num_coflows + coflow]; }
  double& at(int port, int coflow) { return values[static_cast<std::size_t>(port) * num_coflows + coflow]; }
};

// Sums per-flow sizes into per-(port, coflow) processing times, dividing by
// port capacity. sizes is indexed like Realization::volumes.
LoadMatrix aggregate_loads(const Instance& instance,
                           const std::vector<std::vector<double>>& sizes,
                           LoadKind kind);

LoadMatrix expected_loads(const Instance& instance);
LoadMatrix realized_loads(const Instance& instance, const Realization& realization);

// Draws one volume per flow, in deterministic (coflow, flow) order.
Realization sample_realization(const Instance& instance, std::uint64_t seed);

// Flattened view of an instance's flows used by the simulator and the
// realization plumbing.
struct FlowTable {
  int num_flows = 0;
  std::vector<int> src, dst;       // port ids per flat flow
  std::vector<int> coflow;         // coflow position per flat flow
  std::vector<int> flow_in_coflow; // flow position within its coflow
  std::vector<double> expected;    // mean size per flat flow

  static FlowTable build(const Instance& instance);
};

}  // namespace coflow
