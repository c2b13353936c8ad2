#include "simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace coflow {

int PhConfig::queue_of(double expected_total_size) const {
  double threshold = q0_hi;
  for (int q = 0; q < num_queues - 1; ++q) {
    if (expected_total_size <= threshold) return q;
    threshold *= growth;
  }
  return num_queues - 1;
}

void PhConfig::validate() const {
  if (num_queues < 1) throw ValidationError("queue policy needs at least one queue");
  if (!(q0_hi > 0.0)) throw ValidationError("first queue threshold must be positive");
  if (!(growth > 1.0)) throw ValidationError("queue thresholds must grow strictly");
  if (!(weight_decay >= 1.0)) throw ValidationError("queue weight decay must be >= 1");
}

Policy Policy::priority(std::vector<int> order) {
  Policy p;
  p.kind = PolicyKind::PriorityGreedy;
  p.order = std::move(order);
  return p;
}

Policy Policy::round_robin() {
  Policy p;
  p.kind = PolicyKind::RoundRobin;
  return p;
}

Policy Policy::philae(PhConfig cfg) {
  Policy p;
  p.kind = PolicyKind::Philae;
  p.ph = cfg;
  return p;
}

double ScheduleResult::weighted_cct(const std::vector<double>& weights) const {
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) total += weights[k] * coflow_completion[k];
  return total;
}

std::vector<int> greedy_scan_order(const FlowTable& flows, const std::vector<int>& order) {
  std::vector<int> priority_of(order.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    priority_of[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos);

  std::vector<int> scan(static_cast<std::size_t>(flows.num_flows));
  std::iota(scan.begin(), scan.end(), 0);
  std::sort(scan.begin(), scan.end(), [&](int a, int b) {
    int pa = priority_of[static_cast<std::size_t>(flows.coflow[static_cast<std::size_t>(a)])];
    int pb = priority_of[static_cast<std::size_t>(flows.coflow[static_cast<std::size_t>(b)])];
    if (pa != pb) return pa < pb;
    double ea = flows.expected[static_cast<std::size_t>(a)];
    double eb = flows.expected[static_cast<std::size_t>(b)];
    if (ea != eb) return ea > eb;
    return a < b;
  });
  return scan;
}

std::vector<double> greedy_rates(const Instance& instance, const FlowTable& flows,
                                 const std::vector<char>& active,
                                 const std::vector<int>& scan_order) {
  std::vector<double> residual(instance.ports.size());
  for (std::size_t l = 0; l < instance.ports.size(); ++l) residual[l] = instance.ports[l].capacity;
  std::vector<double> rates(static_cast<std::size_t>(flows.num_flows), 0.0);
  for (int f : scan_order) {
    auto fu = static_cast<std::size_t>(f);
    if (!active[fu]) continue;
    double r = std::min(residual[static_cast<std::size_t>(flows.src[fu])],
                        residual[static_cast<std::size_t>(flows.dst[fu])]);
    if (r <= 0.0) continue;
    rates[fu] = r;
    residual[static_cast<std::size_t>(flows.src[fu])] -= r;
    residual[static_cast<std::size_t>(flows.dst[fu])] -= r;
  }
  return rates;
}

std::vector<double> round_robin_rates(const Instance& instance, const FlowTable& flows,
                                      const std::vector<char>& active) {
  std::vector<int> ongoing(instance.ports.size(), 0);
  for (int f = 0; f < flows.num_flows; ++f) {
    if (!active[static_cast<std::size_t>(f)]) continue;
    ongoing[static_cast<std::size_t>(flows.src[static_cast<std::size_t>(f)])]++;
    ongoing[static_cast<std::size_t>(flows.dst[static_cast<std::size_t>(f)])]++;
  }
  std::vector<double> rates(static_cast<std::size_t>(flows.num_flows), 0.0);
  for (int f = 0; f < flows.num_flows; ++f) {
    auto fu = static_cast<std::size_t>(f);
    if (!active[fu]) continue;
    int i = flows.src[fu], o = flows.dst[fu];
    rates[fu] = std::min(instance.ports[static_cast<std::size_t>(i)].capacity / ongoing[static_cast<std::size_t>(i)],
                         instance.ports[static_cast<std::size_t>(o)].capacity / ongoing[static_cast<std::size_t>(o)]);
  }
  return rates;
}

std::vector<int> philae_queues(const Instance& instance, const PhConfig& cfg) {
  std::vector<int> queue(instance.coflows.size(), 0);
  for (std::size_t k = 0; k < instance.coflows.size(); ++k) {
    double total = 0.0;
    for (const auto& f : instance.coflows[k].flows) total += spec_mean(f.size);
    queue[k] = cfg.queue_of(total);
  }
  return queue;
}

namespace {

// Per-simulation scratch shared by the policy rate rules; avoids per-epoch
// allocation and keeps the epoch cost proportional to the live flows.
struct RateScratch {
  std::vector<int> active_flows;    // compacted, stable order
  std::vector<int> greedy_scan;     // active subset of the scan order
  std::vector<double> port_a;       // per-port accumulator
  std::vector<double> port_b;
  std::vector<int> port_count;
  std::vector<int> port_queue_count;  // L x Q
  std::vector<double> queue_weight;   // decay^-q, precomputed
};

void philae_rates_into(const Instance& instance, const FlowTable& flows,
                       const std::vector<int>& active_flows, const PhConfig& cfg,
                       const std::vector<int>& coflow_queue, RateScratch& s,
                       std::vector<double>& rates) {
  const std::size_t L = instance.ports.size();
  const std::size_t Q = static_cast<std::size_t>(cfg.num_queues);
  if (s.queue_weight.size() != Q) {
    s.queue_weight.resize(Q);
    for (std::size_t q = 0; q < Q; ++q)
      s.queue_weight[q] = std::pow(cfg.weight_decay, -static_cast<double>(q));
  }
  s.port_queue_count.assign(L * Q, 0);
  for (int f : active_flows) {
    auto fu = static_cast<std::size_t>(f);
    auto q = static_cast<std::size_t>(coflow_queue[static_cast<std::size_t>(flows.coflow[fu])]);
    s.port_queue_count[static_cast<std::size_t>(flows.src[fu]) * Q + q]++;
    s.port_queue_count[static_cast<std::size_t>(flows.dst[fu]) * Q + q]++;
  }
  s.port_a.assign(L, 0.0);  // total queue weight present at the port
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t q = 0; q < Q; ++q)
      if (s.port_queue_count[l * Q + q] > 0) s.port_a[l] += s.queue_weight[q];

  // Per-port grant: the queue's weighted share split equally among the
  // queue's flows at that port; a flow sends at the min of its two grants.
  auto grant = [&](std::size_t l, std::size_t q) {
    return instance.ports[l].capacity * (s.queue_weight[q] / s.port_a[l]) /
           s.port_queue_count[l * Q + q];
  };
  for (int f : active_flows) {
    auto fu = static_cast<std::size_t>(f);
    auto q = static_cast<std::size_t>(coflow_queue[static_cast<std::size_t>(flows.coflow[fu])]);
    rates[fu] = std::min(grant(static_cast<std::size_t>(flows.src[fu]), q),
                         grant(static_cast<std::size_t>(flows.dst[fu]), q));
  }

  // One renormalization pass: scale every flow by the smaller of its two
  // ports' leftover factors. Feasible because the per-port scale alone
  // would exactly fill the port. No fixed-point iteration.
  s.port_b.assign(L, 0.0);  // rate actually placed on the port
  for (int f : active_flows) {
    auto fu = static_cast<std::size_t>(f);
    s.port_b[static_cast<std::size_t>(flows.src[fu])] += rates[fu];
    s.port_b[static_cast<std::size_t>(flows.dst[fu])] += rates[fu];
  }
  for (std::size_t l = 0; l < L; ++l)
    s.port_a[l] = s.port_b[l] > 1e-15 ? std::max(1.0, instance.ports[l].capacity / s.port_b[l]) : 1.0;
  for (int f : active_flows) {
    auto fu = static_cast<std::size_t>(f);
    if (rates[fu] <= 0.0) continue;
    rates[fu] *= std::min(s.port_a[static_cast<std::size_t>(flows.src[fu])],
                          s.port_a[static_cast<std::size_t>(flows.dst[fu])]);
  }
}

}  // namespace

std::vector<double> philae_rates(const Instance& instance, const FlowTable& flows,
                                 const std::vector<char>& active, const PhConfig& cfg,
                                 const std::vector<int>& coflow_queue) {
  RateScratch scratch;
  std::vector<int> active_flows;
  for (int f = 0; f < flows.num_flows; ++f)
    if (active[static_cast<std::size_t>(f)]) active_flows.push_back(f);
  std::vector<double> rates(static_cast<std::size_t>(flows.num_flows), 0.0);
  philae_rates_into(instance, flows, active_flows, cfg, coflow_queue, scratch, rates);
  return rates;
}

ScheduleResult simulate(const Instance& instance, const Realization& realization,
                        const Policy& policy, bool record_events) {
  const FlowTable flows = FlowTable::build(instance);
  const int nf = flows.num_flows;
  if (realization.volumes.size() != instance.coflows.size())
    throw ValidationError("realization does not cover all coflows");

  std::vector<double> volume(static_cast<std::size_t>(nf));
  for (int f = 0; f < nf; ++f) {
    auto fu = static_cast<std::size_t>(f);
    const auto& per_coflow = realization.volumes[static_cast<std::size_t>(flows.coflow[fu])];
    auto j = static_cast<std::size_t>(flows.flow_in_coflow[fu]);
    if (j >= per_coflow.size()) throw ValidationError("realization does not cover all flows");
    volume[fu] = per_coflow[j];
    if (volume[fu] < 0.0) throw ValidationError("realized volume must be nonnegative");
  }

  std::vector<int> scan_order;
  std::vector<int> queues;
  if (policy.kind == PolicyKind::PriorityGreedy) {
    if (policy.order.size() != instance.coflows.size())
      throw ValidationError("priority order does not cover all coflows");
    scan_order = greedy_scan_order(flows, policy.order);
  } else if (policy.kind == PolicyKind::Philae) {
    policy.ph.validate();
    queues = philae_queues(instance, policy.ph);
  }

  ScheduleResult result;
  result.coflow_completion.assign(instance.coflows.size(), 0.0);
  result.flow_completion.assign(static_cast<std::size_t>(nf), 0.0);

  std::vector<double> residual = volume;
  RateScratch scratch;
  for (int f = 0; f < nf; ++f)
    if (residual[static_cast<std::size_t>(f)] > 0.0) scratch.active_flows.push_back(f);
  // zero-volume flows complete instantly at time 0
  if (policy.kind == PolicyKind::PriorityGreedy) {
    for (int f : scan_order)
      if (residual[static_cast<std::size_t>(f)] > 0.0) scratch.greedy_scan.push_back(f);
  }
  scratch.port_a.resize(instance.ports.size());
  scratch.port_count.resize(instance.ports.size());

  std::vector<double> rates(static_cast<std::size_t>(nf), 0.0);
  double now = 0.0;
  // Each epoch retires at least one flow; the +1 slack covers the exit check.
  const int max_epochs = nf + 1;
  for (int epoch = 0; !scratch.active_flows.empty(); ++epoch) {
    if (epoch >= max_epochs) throw LimitError("simulation failed to make progress");

    switch (policy.kind) {
      case PolicyKind::PriorityGreedy: {
        auto& residual_cap = scratch.port_a;
        for (std::size_t l = 0; l < instance.ports.size(); ++l)
          residual_cap[l] = instance.ports[l].capacity;
        for (int f : scratch.greedy_scan) {
          auto fu = static_cast<std::size_t>(f);
          double r = std::min(residual_cap[static_cast<std::size_t>(flows.src[fu])],
                              residual_cap[static_cast<std::size_t>(flows.dst[fu])]);
          if (r <= 0.0) {  // exhausted port, possibly -1e-16 from subtraction
            rates[fu] = 0.0;
            continue;
          }
          rates[fu] = r;
          residual_cap[static_cast<std::size_t>(flows.src[fu])] -= r;
          residual_cap[static_cast<std::size_t>(flows.dst[fu])] -= r;
        }
        break;
      }
      case PolicyKind::RoundRobin: {
        auto& ongoing = scratch.port_count;
        std::fill(ongoing.begin(), ongoing.end(), 0);
        for (int f : scratch.active_flows) {
          auto fu = static_cast<std::size_t>(f);
          ongoing[static_cast<std::size_t>(flows.src[fu])]++;
          ongoing[static_cast<std::size_t>(flows.dst[fu])]++;
        }
        for (int f : scratch.active_flows) {
          auto fu = static_cast<std::size_t>(f);
          int i = flows.src[fu], o = flows.dst[fu];
          rates[fu] = std::min(
              instance.ports[static_cast<std::size_t>(i)].capacity / ongoing[static_cast<std::size_t>(i)],
              instance.ports[static_cast<std::size_t>(o)].capacity / ongoing[static_cast<std::size_t>(o)]);
        }
        break;
      }
      case PolicyKind::Philae:
        philae_rates_into(instance, flows, scratch.active_flows, policy.ph, queues, scratch, rates);
        break;
    }

    // Next decision epoch = earliest flow completion at these rates.
    double dt = -1.0;
    for (int f : scratch.active_flows) {
      auto fu = static_cast<std::size_t>(f);
      if (rates[fu] <= 0.0) continue;
      double d = residual[fu] / rates[fu];
      if (dt < 0.0 || d < dt) dt = d;
    }
    if (dt < 0.0) throw LimitError("no transmitting flow despite remaining volume");

    if (record_events) {
      EventSegment seg;
      seg.t_begin = now;
      seg.t_end = now + dt;
      seg.rates.assign(static_cast<std::size_t>(nf), 0.0);
      for (int f : scratch.active_flows)
        seg.rates[static_cast<std::size_t>(f)] = rates[static_cast<std::size_t>(f)];
      result.events.push_back(std::move(seg));
    }

    now += dt;
    bool completed_any = false;
    for (int f : scratch.active_flows) {
      auto fu = static_cast<std::size_t>(f);
      if (rates[fu] <= 0.0) continue;
      residual[fu] -= rates[fu] * dt;
      if (residual[fu] <= 1e-12 * volume[fu]) {
        residual[fu] = 0.0;
        result.flow_completion[fu] = now;
        completed_any = true;
      }
    }
    if (completed_any) {
      auto is_done = [&](int f) { return residual[static_cast<std::size_t>(f)] <= 0.0; };
      std::erase_if(scratch.active_flows, is_done);
      if (policy.kind == PolicyKind::PriorityGreedy) std::erase_if(scratch.greedy_scan, is_done);
    }
  }

  for (int f = 0; f < nf; ++f) {
    auto fu = static_cast<std::size_t>(f);
    auto k = static_cast<std::size_t>(flows.coflow[fu]);
    result.coflow_completion[k] = std::max(result.coflow_completion[k], result.flow_completion[fu]);
  }
  return result;
}

ScheduleResult greedy_rate_allocation(const Instance& instance, const Realization& realization,
                                      const PriorityOrder& order, bool record_events) {
  return simulate(instance, realization, Policy::priority(order.pi), record_events);
}

const char* policy_name(NamedPolicy p) {
  switch (p) {
    case NamedPolicy::CL: return "cl";
    case NamedPolicy::NC: return "nc";
    case NamedPolicy::RO: return "ro";
    case NamedPolicy::RR: return "rr";
    case NamedPolicy::PH: return "ph";
  }
  return "?";
}

NamedPolicy policy_from_name(const std::string& name) {
  if (name == "cl") return NamedPolicy::CL;
  if (name == "nc") return NamedPolicy::NC;
  if (name == "ro") return NamedPolicy::RO;
  if (name == "rr") return NamedPolicy::RR;
  if (name == "ph") return NamedPolicy::PH;
  throw ValidationError("unknown policy: " + name);
}

PolicyEval evaluate_policy(const Instance& instance, NamedPolicy policy, int num_realizations,
                           std::uint64_t seed, const PhConfig& ph) {
  if (num_realizations < 1) throw ValidationError("need at least one realization");
  std::vector<double> weights;
  weights.reserve(instance.coflows.size());
  for (const auto& c : instance.coflows) weights.push_back(c.weight);

  PriorityOrder nc_order;
  if (policy == NamedPolicy::NC) nc_order = sincronia_order(expected_loads(instance), weights);

  PolicyEval eval;
  eval.per_rep.reserve(static_cast<std::size_t>(num_realizations));
  for (int r = 0; r < num_realizations; ++r) {
    Realization real = sample_realization(
        instance, chain_seed(seed, {kStreamRealization, static_cast<std::uint64_t>(r)}));

    Policy p;
    switch (policy) {
      case NamedPolicy::NC:
        p = Policy::priority(nc_order.pi);
        break;
      case NamedPolicy::CL:
        p = Policy::priority(sincronia_order(realized_loads(instance, real), weights).pi);
        break;
      case NamedPolicy::RO: {
        Rng rng(chain_seed(seed, {kStreamRandomOrder, static_cast<std::uint64_t>(r)}));
        std::vector<int> perm(instance.coflows.size());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i)
          std::swap(perm[i - 1], perm[rng.below(i)]);
        p = Policy::priority(std::move(perm));
        break;
      }
      case NamedPolicy::RR:
        p = Policy::round_robin();
        break;
      case NamedPolicy::PH:
        p = Policy::philae(ph);
        break;
    }
    eval.per_rep.push_back(simulate(instance, real, p).weighted_cct(weights));
  }

  double sum = 0.0;
  for (double v : eval.per_rep) sum += v;
  eval.mean = sum / static_cast<double>(num_realizations);
  if (num_realizations > 1) {
    double ss = 0.0;
    for (double v : eval.per_rep) ss += (v - eval.mean) * (v - eval.mean);
    eval.std_error = std::sqrt(ss / (static_cast<double>(num_realizations) - 1.0) /
                               static_cast<double>(num_realizations));
  }
  return eval;
}

}  // namespace coflow
