#include "model.hpp"

#include <cmath>

#include "errors.hpp"

namespace coflow {

int Instance::num_flows() const {
  int n = 0;
  for (const auto& c : coflows) n += static_cast<int>(c.flows.size());
  return n;
}

void Instance::validate() const {
  const int L = num_ports();
  if (L < 2 || L % 2 != 0) throw ValidationError("number of ports must be even and >= 2");
  for (int l = 0; l < L; ++l) {
    const Port& p = ports[l];
    if (p.id != l) throw ValidationError("port ids must be 0..L-1 in order");
    PortKind want = l < L / 2 ? PortKind::Ingress : PortKind::Egress;
    if (p.kind != want) throw ValidationError("first L/2 ports must be ingress, the rest egress");
    if (!(p.capacity > 0.0)) throw ValidationError("port capacity must be positive");
  }
  if (coflows.empty()) throw ValidationError("instance has no coflows");
  for (const auto& c : coflows) {
    if (c.weight < 0.0) throw ValidationError("coflow weight must be nonnegative");
    if (c.flows.empty()) throw ValidationError("coflow has no flows");
    for (const auto& f : c.flows) {
      if (f.src < 0 || f.src >= L / 2)
        throw ValidationError("flow source must be an ingress port");
      if (f.dst < L / 2 || f.dst >= L)
        throw ValidationError("flow destination must be an egress port");
      f.size.validate();
    }
  }
}

LoadMatrix aggregate_loads(const Instance& instance,
                           const std::vector<std::vector<double>>& sizes,
                           LoadKind kind) {
  const int L = instance.num_ports();
  const int n = instance.num_coflows();
  if (static_cast<int>(sizes.size()) != n)
    throw ValidationError("size table does not cover all coflows");

  LoadMatrix m;
  m.kind = kind;
  m.num_ports = L;
  m.num_coflows = n;
  m.values.assign(static_cast<std::size_t>(L) * n, 0.0);

  for (int k = 0; k < n; ++k) {
    const Coflow& c = instance.coflows[k];
    if (sizes[k].size() != c.flows.size())
      throw ValidationError("size table does not cover all flows of coflow " + std::to_string(c.id));
    for (std::size_t j = 0; j < c.flows.size(); ++j) {
      const FlowSpec& f = c.flows[j];
      double s = sizes[k][j];
      if (s < 0.0 || !std::isfinite(s))
        throw ValidationError("flow size must be a finite nonnegative value");
      if (f.src < 0 || f.src >= L || f.dst < 0 || f.dst >= L)
        throw ValidationError("flow references unknown port");
      m.at(f.src, k) += s / instance.ports[f.src].capacity;
      m.at(f.dst, k) += s / instance.ports[f.dst].capacity;
    }
  }
  return m;
}

LoadMatrix expected_loads(const Instance& instance) {
  std::vector<std::vector<double>> sizes(instance.coflows.size());
  for (std::size_t k = 0; k < instance.coflows.size(); ++k) {
    const auto& flows = instance.coflows[k].flows;
    sizes[k].reserve(flows.size());
    for (const auto& f : flows) sizes[k].push_back(spec_mean(f.size));
  }
  return aggregate_loads(instance, sizes, LoadKind::Expected);
}

LoadMatrix realized_loads(const Instance& instance, const Realization& realization) {
  return aggregate_loads(instance, realization.volumes, LoadKind::Realized);
}

Realization sample_realization(const Instance& instance, std::uint64_t seed) {
  Realization r;
  r.seed = seed;
  Rng rng(chain_seed(seed, {kStreamRealization}));
  r.volumes.resize(instance.coflows.size());
  for (std::size_t k = 0; k < instance.coflows.size(); ++k) {
    const auto& flows = instance.coflows[k].flows;
    r.volumes[k].reserve(flows.size());
    for (const auto& f : flows) r.volumes[k].push_back(sample(f.size, rng));
  }
  return r;
}

FlowTable FlowTable::build(const Instance& instance) {
  FlowTable t;
  for (int k = 0; k < instance.num_coflows(); ++k) {
    const Coflow& c = instance.coflows[k];
    for (std::size_t j = 0; j < c.flows.size(); ++j) {
      const FlowSpec& f = c.flows[j];
      t.src.push_back(f.src);
      t.dst.push_back(f.dst);
      t.coflow.push_back(k);
      t.flow_in_coflow.push_back(static_cast<int>(j));
      t.expected.push_back(spec_mean(f.size));
    }
  }
  t.num_flows = static_cast<int>(t.src.size());
  return t;
}

}  // namespace coflow
