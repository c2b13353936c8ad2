#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"
#include "ordering.hpp"

namespace coflow {

// Multi-queue policy configuration. A coflow whose expected total size S
// satisfies S <= q0_hi * growth^q lands in queue q (capped at num_queues-1);
// per port, nonempty queues share capacity with weights decaying by
// weight_decay per queue, equal split inside a queue.
struct PhConfig {
  int num_queues = 10;
  double q0_hi = 10.0;
  double growth = 10.0;
  double weight_decay = 10.0;

  int queue_of(double expected_total_size) const;
  void validate() const;  // K >= 1, thresholds strictly increasing
};

enum class PolicyKind { PriorityGreedy, RoundRobin, Philae };

struct Policy {
  PolicyKind kind = PolicyKind::RoundRobin;
  std::vector<int> order;  // PriorityGreedy: coflow indices, highest first
  PhConfig ph;

  static Policy priority(std::vector<int> order);
  static Policy round_robin();
  static Policy philae(PhConfig cfg = {});
};

struct EventSegment {
  double t_begin = 0.0;
  double t_end = 0.0;
  std::vector<double> rates;  // per flat flow index
};

struct ScheduleResult {
  std::vector<double> coflow_completion;  // per coflow index
  std::vector<double> flow_completion;    // per flat flow index
  std::vector<EventSegment> events;       // only when recording was requested

  double weighted_cct(const std::vector<double>& weights) const;
};

// Runs one realization to completion. Rates are piecewise constant between
// decision epochs (time 0 and flow completions); every epoch completes at
// least one flow, so the loop is finite. Port capacities are respected
// exactly by construction and checked again when events are recorded.
ScheduleResult simulate(const Instance& instance, const Realization& realization,
                        const Policy& policy, bool record_events = false);

// Convenience wrapper for the priority policies.
ScheduleResult greedy_rate_allocation(const Instance& instance, const Realization& realization,
                                      const PriorityOrder& order, bool record_events = false);

// Single-epoch rate rules, exposed for the unit tests. `active` marks flows
// with residual volume; rates come back per flat flow index.
std::vector<double> round_robin_rates(const Instance& instance, const FlowTable& flows,
                                      const std::vector<char>& active);
std::vector<double> philae_rates(const Instance& instance, const FlowTable& flows,
                                 const std::vector<char>& active, const PhConfig& cfg,
                                 const std::vector<int>& coflow_queue);
std::vector<double> greedy_rates(const Instance& instance, const FlowTable& flows,
                                 const std::vector<char>& active,
                                 const std::vector<int>& scan_order);

// Flow scan order for the greedy allocation: coflow priority first, then
// decreasing expected size, then flow id.
std::vector<int> greedy_scan_order(const FlowTable& flows, const std::vector<int>& order);

// Queue assignment per coflow from expected total sizes.
std::vector<int> philae_queues(const Instance& instance, const PhConfig& cfg);

enum class NamedPolicy { CL, NC, RO, RR, PH };

const char* policy_name(NamedPolicy p);
NamedPolicy policy_from_name(const std::string& name);

struct PolicyEval {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> per_rep;  // weighted CCT per replication
};

// Mean weighted CCT over R realizations drawn from the instance's size
// specs. CL recomputes the priority order per realization from realized
// loads; NC computes it once from expected loads; RO draws a fresh uniform
// order per replication from its own seed stream.
PolicyEval evaluate_policy(const Instance& instance, NamedPolicy policy, int num_realizations,
                           std::uint64_t seed, const PhConfig& ph = {});

}  // namespace coflow
