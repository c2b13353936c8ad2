#include <doctest.h>

#include <cmath>
#include <numeric>
#include <tuple>

#include "errors.hpp"
#include "lp.hpp"
#include "simulator.hpp"
#include "workload.hpp"

using namespace coflow;

namespace {

SizeSpec fixed(double v) {
  SizeSpec s;
  s.family = Family::Fixed;
  s.mean = v;
  return s;
}

Instance make_instance(int num_ports,
                       const std::vector<std::vector<std::tuple<int, int, double>>>& coflows) {
  Instance inst;
  for (int l = 0; l < num_ports; ++l)
    inst.ports.push_back(Port{l, l < num_ports / 2 ? PortKind::Ingress : PortKind::Egress, 1.0});
  int cid = 0;
  for (const auto& flows : coflows) {
    Coflow c;
    c.id = cid;
    int fid = 0;
    for (auto [src, dst, size] : flows)
      c.flows.push_back(FlowSpec{cid, fid++, src, dst, fixed(size)});
    inst.coflows.push_back(std::move(c));
    ++cid;
  }
  inst.validate();
  return inst;
}

Realization exact_realization(const Instance& inst) {
  Realization r;
  r.volumes.resize(inst.coflows.size());
  for (std::size_t k = 0; k < inst.coflows.size(); ++k)
    for (const auto& f : inst.coflows[k].flows) r.volumes[k].push_back(f.size.mean);
  return r;
}

std::vector<double> unit_weights(const Instance& inst) {
  return std::vector<double>(inst.coflows.size(), 1.0);
}

// Eq.-style conservation checks over a recorded event log.
void check_conservation(const Instance& inst, const Realization& real,
                        const ScheduleResult& res) {
  const FlowTable flows = FlowTable::build(inst);
  // capacity at every segment
  for (const auto& seg : res.events) {
    std::vector<double> used(inst.ports.size(), 0.0);
    for (int f = 0; f < flows.num_flows; ++f) {
      double r = seg.rates[static_cast<std::size_t>(f)];
      REQUIRE(r >= 0.0);
      used[static_cast<std::size_t>(flows.src[static_cast<std::size_t>(f)])] += r;
      used[static_cast<std::size_t>(flows.dst[static_cast<std::size_t>(f)])] += r;
    }
    for (std::size_t l = 0; l < inst.ports.size(); ++l)
      CHECK(used[l] <= inst.ports[l].capacity + 1e-9);
  }
  // delivered volume per flow
  std::vector<double> delivered(static_cast<std::size_t>(flows.num_flows), 0.0);
  for (const auto& seg : res.events)
    for (int f = 0; f < flows.num_flows; ++f)
      delivered[static_cast<std::size_t>(f)] +=
          seg.rates[static_cast<std::size_t>(f)] * (seg.t_end - seg.t_begin);
  for (int f = 0; f < flows.num_flows; ++f) {
    auto fu = static_cast<std::size_t>(f);
    double want = real.volumes[static_cast<std::size_t>(flows.coflow[fu])]
                              [static_cast<std::size_t>(flows.flow_in_coflow[fu])];
    CHECK(delivered[fu] == doctest::Approx(want).epsilon(1e-9));
  }
}

}  // namespace

TEST_CASE("single flow finishes at volume over capacity") {
  Instance inst = make_instance(2, {{{0, 1, 5.0}}});
  Realization r = exact_realization(inst);
  for (auto policy : {Policy::priority({0}), Policy::round_robin(), Policy::philae()}) {
    auto res = simulate(inst, r, policy);
    CHECK(res.coflow_completion[0] == doctest::Approx(5.0));
  }
}

TEST_CASE("round robin splits a shared ingress evenly") {
  Instance inst = make_instance(4, {{{0, 2, 1.0}}, {{0, 3, 1.0}}});
  Realization r = exact_realization(inst);
  auto res = simulate(inst, r, Policy::round_robin(), true);
  CHECK(res.coflow_completion[0] == doctest::Approx(2.0));
  CHECK(res.coflow_completion[1] == doctest::Approx(2.0));
  REQUIRE(!res.events.empty());
  CHECK(res.events[0].rates[0] == doctest::Approx(0.5));
  CHECK(res.events[0].rates[1] == doctest::Approx(0.5));
}

TEST_CASE("round robin rate formula cases") {
  SUBCASE("flow alone on both ports") {
    Instance inst = make_instance(2, {{{0, 1, 1.0}}});
    const FlowTable flows = FlowTable::build(inst);
    auto rates = round_robin_rates(inst, flows, {1});
    CHECK(rates[0] == doctest::Approx(1.0));
  }
  SUBCASE("three flows share an ingress, two share an egress") {
    Instance inst =
        make_instance(4, {{{0, 2, 1.0}}, {{0, 2, 1.0}}, {{0, 3, 1.0}}});
    const FlowTable flows = FlowTable::build(inst);
    auto rates = round_robin_rates(inst, flows, {1, 1, 1});
    CHECK(rates[0] == doctest::Approx(1.0 / 3.0));
    CHECK(rates[1] == doctest::Approx(1.0 / 3.0));
    CHECK(rates[2] == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("priority order on a contended port") {
  Instance inst = make_instance(2, {{{0, 1, 2.0}}, {{0, 1, 1.0}}});
  Realization r = exact_realization(inst);
  auto res = simulate(inst, r, Policy::priority({0, 1}), true);
  CHECK(res.coflow_completion[0] == doctest::Approx(2.0));
  CHECK(res.coflow_completion[1] == doctest::Approx(3.0));
  check_conservation(inst, r, res);

  // Factor-2 prefix bound: 3 <= 2 * 3.
  LoadMatrix p = realized_loads(inst, r);
  CHECK(res.coflow_completion[1] <= 2.0 * (p.at(0, 0) + p.at(0, 1)) + 1e-9);
}

TEST_CASE("crossing flows run at full rate in parallel") {
  Instance inst = make_instance(4, {{{0, 2, 4.0}}, {{1, 3, 2.0}}});
  Realization r = exact_realization(inst);
  auto res = simulate(inst, r, Policy::priority({0, 1}), true);
  CHECK(res.coflow_completion[0] == doctest::Approx(4.0));
  CHECK(res.coflow_completion[1] == doctest::Approx(2.0));
  CHECK(res.events[0].rates[0] == doctest::Approx(1.0));
  CHECK(res.events[0].rates[1] == doctest::Approx(1.0));
}

TEST_CASE("philae queue thresholds") {
  PhConfig cfg;
  CHECK(cfg.queue_of(5.0) == 0);
  CHECK(cfg.queue_of(10.0) == 0);
  CHECK(cfg.queue_of(11.0) == 1);
  CHECK(cfg.queue_of(1000.0) == 2);
  CHECK(cfg.queue_of(1e30) == 9);
}

TEST_CASE("philae reduces to equal sharing within one queue") {
  Instance inst = make_instance(4, {{{0, 2, 4.0}}, {{0, 3, 4.0}}});
  const FlowTable flows = FlowTable::build(inst);
  auto queues = philae_queues(inst, PhConfig{});
  CHECK(queues[0] == queues[1]);
  auto rates = philae_rates(inst, flows, {1, 1}, PhConfig{}, queues);
  CHECK(rates[0] == doctest::Approx(0.5));
  CHECK(rates[1] == doctest::Approx(0.5));
}

TEST_CASE("philae weights split a shared port 10 to 1") {
  // total expected sizes 5 (queue 0) and 40 (queue 1), sharing ingress 0
  Instance inst = make_instance(4, {{{0, 2, 5.0}}, {{0, 3, 40.0}}});
  const FlowTable flows = FlowTable::build(inst);
  auto queues = philae_queues(inst, PhConfig{});
  REQUIRE(queues[0] == 0);
  REQUIRE(queues[1] == 1);
  auto rates = philae_rates(inst, flows, {1, 1}, PhConfig{}, queues);
  CHECK(rates[0] == doctest::Approx(10.0 / 11.0));
  CHECK(rates[1] == doctest::Approx(1.0 / 11.0));
}

TEST_CASE("conservation and factor-2 sweep over random triples") {
  Rng rng(404);
  int order_violations = 0;
  for (int trial = 0; trial < 150; ++trial) {
    GenConfig cfg;
    cfg.num_ports = 4 + 2 * static_cast<int>(rng.below(3));
    cfg.num_coflows = 2 + static_cast<int>(rng.below(5));
    cfg.size_spec.family = trial % 2 == 0 ? Family::Gamma : Family::Pareto;
    cfg.size_spec.mean = 10.0;
    cfg.size_spec.cv = trial % 3 == 0 ? 2.0 : 0.5;
    cfg.seed = 9000 + trial;
    Instance inst = generate_instance(cfg);
    Realization real = sample_realization(inst, 777 + trial);
    auto w = unit_weights(inst);

    PriorityOrder order = sincronia_order(expected_loads(inst), w);
    Policy pol = trial % 4 == 3
                     ? (trial % 2 == 0 ? Policy::round_robin() : Policy::philae())
                     : Policy::priority(order.pi);
    auto res = simulate(inst, real, pol, true);
    check_conservation(inst, real, res);

    if (pol.kind == PolicyKind::PriorityGreedy) {
      // per-realization factor-2 prefix bound for the greedy allocation
      LoadMatrix p = realized_loads(inst, real);
      std::vector<double> prefix(static_cast<std::size_t>(inst.num_ports()), 0.0);
      for (std::size_t t = 0; t < order.pi.size(); ++t) {
        int k = order.pi[t];
        double bottleneck = 0.0;
        for (int l = 0; l < inst.num_ports(); ++l) {
          prefix[static_cast<std::size_t>(l)] += p.at(l, k);
          bottleneck = std::max(bottleneck, prefix[static_cast<std::size_t>(l)]);
        }
        CHECK(res.coflow_completion[static_cast<std::size_t>(k)] <= 2.0 * bottleneck + 1e-9);
        if (t > 0 && res.coflow_completion[static_cast<std::size_t>(k)] <
                         res.coflow_completion[static_cast<std::size_t>(order.pi[t - 1])] - 1e-9)
          ++order_violations;
      }
    }
  }
  MESSAGE("priority-order completion inversions observed: ", order_violations);
}

TEST_CASE("fixed sizes: no variance and NC equals CL") {
  GenConfig cfg;
  cfg.num_ports = 6;
  cfg.num_coflows = 4;
  cfg.size_spec = fixed(10.0);
  cfg.seed = 15;
  Instance inst = generate_instance(cfg);
  auto nc = evaluate_policy(inst, NamedPolicy::NC, 5, 77);
  auto cl = evaluate_policy(inst, NamedPolicy::CL, 5, 77);
  CHECK(nc.std_error == doctest::Approx(0.0));
  CHECK(nc.mean == doctest::Approx(cl.mean).epsilon(1e-12));
}

TEST_CASE("one replication equals one simulate call") {
  GenConfig cfg;
  cfg.num_ports = 4;
  cfg.num_coflows = 3;
  cfg.size_spec.family = Family::Gamma;
  cfg.size_spec.mean = 10.0;
  cfg.size_spec.cv = 1.0;
  cfg.seed = 21;
  Instance inst = generate_instance(cfg);
  auto w = unit_weights(inst);

  const std::uint64_t seed = 5150;
  auto eval = evaluate_policy(inst, NamedPolicy::NC, 1, seed);
  Realization real = sample_realization(inst, chain_seed(seed, {kStreamRealization, 0}));
  PriorityOrder order = sincronia_order(expected_loads(inst), w);
  auto res = simulate(inst, real, Policy::priority(order.pi));
  CHECK(eval.per_rep[0] == doctest::Approx(res.weighted_cct(w)).epsilon(1e-12));
}

TEST_CASE("random order draws are policy-local") {
  GenConfig cfg;
  cfg.num_ports = 4;
  cfg.num_coflows = 5;
  cfg.size_spec.family = Family::Gamma;
  cfg.size_spec.mean = 10.0;
  cfg.size_spec.cv = 1.0;
  cfg.seed = 33;
  Instance inst = generate_instance(cfg);
  // same realization stream regardless of which policies run
  auto rr1 = evaluate_policy(inst, NamedPolicy::RR, 4, 99);
  (void)evaluate_policy(inst, NamedPolicy::RO, 4, 99);
  auto rr2 = evaluate_policy(inst, NamedPolicy::RR, 4, 99);
  for (int i = 0; i < 4; ++i)
    CHECK(rr1.per_rep[static_cast<std::size_t>(i)] == rr2.per_rep[static_cast<std::size_t>(i)]);
}

TEST_CASE("expected completions satisfy the parallel inequalities (statistical)") {
  // Small-scale version of the acceptance check: NC is order-based, so
  // sum_{k in A} mu(l,k) E[C_k] >= f(l, A) within Monte-Carlo noise.
  GenConfig cfg;
  cfg.num_ports = 4;
  cfg.num_coflows = 4;
  cfg.size_spec.family = Family::Gamma;
  cfg.size_spec.mean = 10.0;
  cfg.size_spec.cv = 1.0;
  cfg.seed = 61;
  Instance inst = generate_instance(cfg);
  auto w = unit_weights(inst);
  LoadMatrix mu = expected_loads(inst);
  PriorityOrder order = sincronia_order(mu, w);

  const int R = 400;
  std::vector<std::vector<double>> completions(static_cast<std::size_t>(R));
  for (int r = 0; r < R; ++r) {
    Realization real = sample_realization(inst, chain_seed(4242, {static_cast<std::uint64_t>(r)}));
    completions[static_cast<std::size_t>(r)] =
        simulate(inst, real, Policy::priority(order.pi)).coflow_completion;
  }

  Rng rng(71);
  const int n = inst.num_coflows();
  for (int l = 0; l < inst.num_ports(); ++l) {
    for (int rep = 0; rep < 40; ++rep) {
      std::vector<int> subset;
      for (int k = 0; k < n; ++k)
        if (rng.uniform() < 0.5) subset.push_back(k);
      if (subset.empty()) continue;
      double mean = 0.0, var = 0.0;
      std::vector<double> lhs(static_cast<std::size_t>(R));
      for (int r = 0; r < R; ++r) {
        double v = 0.0;
        for (int k : subset)
          v += mu.at(l, k) * completions[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
        lhs[static_cast<std::size_t>(r)] = v;
        mean += v;
      }
      mean /= R;
      for (double v : lhs) var += (v - mean) * (v - mean);
      double se = std::sqrt(var / (R - 1.0) / R);
      CHECK(mean >= f_value(mu, l, subset) - 3.0 * se);
    }
  }
}

TEST_CASE("simulation input validation") {
  Instance inst = make_instance(2, {{{0, 1, 1.0}}});
  Realization r = exact_realization(inst);
  CHECK_THROWS_AS(simulate(inst, r, Policy::priority({0, 1})), ValidationError);
  Realization bad;
  bad.volumes = {{}};
  CHECK_THROWS_AS(simulate(inst, bad, Policy::priority({0})), ValidationError);
}
