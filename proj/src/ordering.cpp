#include "ordering.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "lp.hpp"

namespace coflow {

CoflowSet::CoflowSet(const std::vector<int>& ids, int universe)
    : universe_(universe), count_(static_cast<int>(ids.size())) {
  if (universe <= 64) {
    for (int k : ids) mask_ |= (1ULL << k);
  } else {
    list_ = ids;
    std::sort(list_.begin(), list_.end());
  }
}

bool CoflowSet::contains(int k) const {
  if (universe_ <= 64) return (mask_ >> k) & 1ULL;
  return std::binary_search(list_.begin(), list_.end(), k);
}

std::vector<int> CoflowSet::ids() const {
  if (universe_ > 64) return list_;
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count_));
  for (int k = 0; k < universe_; ++k)
    if ((mask_ >> k) & 1ULL) out.push_back(k);
  return out;
}

bool CoflowSet::operator==(const CoflowSet& other) const {
  return universe_ == other.universe_ && mask_ == other.mask_ && list_ == other.list_;
}

PriorityOrder sincronia_order(const LoadMatrix& mu, const std::vector<double>& weights) {
  const int L = mu.num_ports;
  const int n = mu.num_coflows;
  if (static_cast<int>(weights.size()) != n)
    throw ValidationError("weight vector does not match load matrix");
  for (double w : weights)
    if (w < 0.0 || !std::isfinite(w)) throw ValidationError("weights must be finite and nonnegative");
  for (double v : mu.values)
    if (v < 0.0 || !std::isfinite(v)) throw ValidationError("loads must be finite and nonnegative");

  PriorityOrder order;
  order.pi.assign(static_cast<std::size_t>(n), -1);
  order.primal_c.assign(static_cast<std::size_t>(n), 0.0);
  order.duals.reserve(static_cast<std::size_t>(n));
  order.source_loads = mu;

  std::vector<double> w = weights;
  std::vector<char> active(static_cast<std::size_t>(n), 1);
  std::vector<int> active_ids(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) active_ids[static_cast<std::size_t>(k)] = k;

  for (int t = n - 1; t >= 0; --t) {
    // Bottleneck port: max total remaining load, lowest index on ties.
    int b = 0;
    double best_sum = -1.0;
    for (int l = 0; l < L; ++l) {
      double s = 0.0;
      for (int k : active_ids) s += mu.at(l, k);
      if (s > best_sum) {
        best_sum = s;
        b = l;
      }
    }

    // Scheduled-last coflow: smallest weight per unit of bottleneck load.
    // Coflows without load at the bottleneck cannot be charged there and are
    // excluded; if nothing has load anywhere, fall back to the lowest id.
    int kstar = -1;
    double best_ratio = 0.0;
    for (int k : active_ids) {
      double m = mu.at(b, k);
      if (m <= 0.0) continue;
      double ratio = w[static_cast<std::size_t>(k)] / m;
      if (kstar < 0 || ratio < best_ratio) {
        kstar = k;
        best_ratio = ratio;
      }
    }

    DualEntry entry;
    entry.port = b;
    entry.coflows = CoflowSet(active_ids, n);
    if (kstar < 0) {
      kstar = active_ids.front();
      entry.value = 0.0;
    } else {
      entry.value = best_ratio;
      for (int k : active_ids) {
        auto ku = static_cast<std::size_t>(k);
        w[ku] -= best_ratio * mu.at(b, k);
        if (w[ku] < 0.0) {
          // The argmin choice guarantees nonnegativity up to rounding.
          if (w[ku] < -1e-9 * (1.0 + std::abs(weights[ku])))
            throw LimitError("weight update drove a weight negative beyond tolerance");
          w[ku] = 0.0;
        }
      }
    }
    order.duals.push_back(std::move(entry));
    order.pi[static_cast<std::size_t>(t)] = kstar;
    order.primal_c[static_cast<std::size_t>(kstar)] = best_sum;

    active[static_cast<std::size_t>(kstar)] = 0;
    active_ids.erase(std::find(active_ids.begin(), active_ids.end(), kstar));
  }
  return order;
}

double alg1_cost(const PriorityOrder& order, const std::vector<double>& weights) {
  double cost = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) cost += weights[k] * order.primal_c[k];
  return cost;
}

double dual_objective(const PriorityOrder& order) {
  const LoadMatrix& mu = order.source_loads;
  double obj = 0.0;
  for (const auto& d : order.duals) {
    if (d.value == 0.0) continue;
    obj += d.value * f_value(mu, d.port, d.coflows.ids());
  }
  return obj;
}

std::vector<double> dual_slacks(const PriorityOrder& order, const std::vector<double>& weights) {
  const LoadMatrix& mu = order.source_loads;
  std::vector<double> slack = weights;
  for (const auto& d : order.duals) {
    if (d.value == 0.0) continue;
    for (int k : d.coflows.ids()) slack[static_cast<std::size_t>(k)] -= d.value * mu.at(d.port, k);
  }
  return slack;
}

}  // namespace coflow
