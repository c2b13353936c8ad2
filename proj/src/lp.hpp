#pragma once

#include <span>
#include <vector>

#include "model.hpp"

namespace coflow {

// Valid inequality sum_{k in A} mu(l,k) C_k >= f(l, A) over expected
// completion times, with
//   f(l, A) = 1/2 * ((sum_{k in A} mu(l,k))^2 + sum_{k in A} mu(l,k)^2).
struct ParallelInequality {
  int port = 0;
  std::vector<int> coflows;  // sorted
  double rhs = 0.0;
};

// f(l, A); empty A yields 0 (vacuous constraint).
double f_value(const LoadMatrix& mu, int port, std::span<const int> coflows);

struct SeparationResult {
  bool found = false;
  ParallelInequality cut;
  double violation = 0.0;  // lhs - rhs of the returned cut, < 0 when found
};

// Exact-by-audit separation: per port, coflows with positive load are sorted
// by ascending C and every prefix is scored; the most violated prefix across
// ports is returned. Prefix optimality over all subsets is validated against
// brute-force enumeration in the tests rather than assumed.
SeparationResult separate(const LoadMatrix& mu, const std::vector<double>& c,
                          double tol = 1e-9);

struct LpSolution {
  std::vector<double> c;   // per-coflow completion time lower bounds
  double objective = 0.0;  // sum_k w_k c_k
  int num_cuts = 0;
  int iterations = 0;      // outer cutting-plane rounds
};

// Cutting-plane optimum of   min sum w_k C_k  s.t. all parallel inequalities,
// C >= 0. Starts from singleton and full-support cuts per port, then adds
// the most violated inequality until none remains.
LpSolution solve_lp(const LoadMatrix& mu, const std::vector<double>& weights);

// Same LP with every subset constraint materialized; n <= 12 only. Shares
// the simplex core with solve_lp and serves as its correctness oracle.
LpSolution brute_force_lp(const LoadMatrix& mu, const std::vector<double>& weights);

namespace detail {

// Dense simplex for  max c^T x  s.t. A x <= b, x >= 0  with b >= 0, Bland's
// rule throughout. Returns the optimum, the solution and the row duals.
struct SimplexResult {
  bool optimal = false;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> duals;  // one per row
};

SimplexResult simplex_max(const std::vector<std::vector<double>>& a,
                          const std::vector<double>& b, const std::vector<double>& c,
                          long max_pivots);

}  // namespace detail

}  // namespace coflow
