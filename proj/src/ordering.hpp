#pragma once

#include <cstdint>
#include <vector>

#include "model.hpp"

namespace coflow {

// Sparse coflow subset: a bitmask for n <= 64, a sorted id list above that.
class CoflowSet {
 public:
  CoflowSet() = default;
  CoflowSet(const std::vector<int>& ids, int universe);

  bool contains(int k) const;
  int size() const { return count_; }
  std::vector<int> ids() const;
  bool operator==(const CoflowSet& other) const;

 private:
  int universe_ = 0;
  int count_ = 0;
  std::uint64_t mask_ = 0;
  std::vector<int> list_;  // used when universe > 64
};

struct DualEntry {
  int port = 0;
  CoflowSet coflows;  // the unscheduled set A at the time the variable was set
  double value = 0.0; // y_{port,A} >= 0
};

// Output of the primal-dual ordering pass over a load matrix.
struct PriorityOrder {
  std::vector<int> pi;         // pi[0] = highest priority coflow index
  std::vector<double> primal_c;  // per coflow index: max_l prefix load up to it
  std::vector<DualEntry> duals;  // one entry per iteration, y >= 0
  LoadMatrix source_loads;       // the matrix the order was computed from
};

// Primal-dual ordering: repeatedly find the bottleneck port, schedule last
// the coflow minimizing weight/load there, and fold its weight into the
// remaining ones. O(n^2) over the load matrix. Ties break to the lowest port
// index and lowest coflow index so the output is deterministic.
PriorityOrder sincronia_order(const LoadMatrix& mu, const std::vector<double>& weights);

// Primal cost sum_k w_k * primal_c[k] with the original weights; at most
// twice the LP optimum.
double alg1_cost(const PriorityOrder& order, const std::vector<double>& weights);

// sum over recorded duals of f(port, A) * y; a lower bound on the LP optimum
// by weak duality. Evaluated against the order's source loads.
double dual_objective(const PriorityOrder& order);

// Per-coflow slack of the dual constraint sum_{A: k in A} mu(l,k) y_{l,A}
// <= w_k, evaluated with the original weights. Feasibility means every
// slack >= -1e-9.
std::vector<double> dual_slacks(const PriorityOrder& order, const std::vector<double>& weights);

}  // namespace coflow
