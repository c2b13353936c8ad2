#pragma once

#include <cstdint>
#include <vector>

#include "model.hpp"

namespace coflow {

// Closed-form upper bounds on the prefix-bottleneck inflation factor alpha.
// Multiplying any of them by 4 gives the policy's approximation-ratio bound.

// Moment summary of the per-flow processing times feeding the calculators.
struct BoundInputs {
  int num_ports = 2;
  double p = 2.0;          // moment order, > 1
  double m_p = 0.0;        // max E|P - mu|^p over flows/ports
  double sigma_max = 0.0;  // max std of a per-flow processing time
  double mu_min = 1.0;     // min positive expected processing time
  double eta_max = 0.0;    // max coefficient of variation
  double gamma = 0.0;      // (sigma_max / mu_min)^2

  void validate() const;
};

// p = 2 moment summary of an instance's per-flow port processing times
// (volume / port capacity on each of the flow's two ports).
BoundInputs bound_inputs_p2(const Instance& instance);

// alpha <= 1 + L^{1/p} m_p^{1/p} / mu_min for any distribution with finite
// p-th central moment m_p (p > 1).
double ub_general_p(int num_ports, double p, double m_p, double mu_min);
double ub_general_p(const BoundInputs& in);

// p = 2 specialization: alpha <= 1 + sqrt(L) sigma_max / mu_min.
double ub_p2(int num_ports, double sigma_max, double mu_min);

// Gamma processing times: alpha <= c + log(c + sqrt(c^2 - 1)) with
// c = 1 + gamma log L and gamma = (sigma_max / mu_min)^2. gamma = 0 gives 1.
double ub_gamma(int num_ports, double gamma);
double ub_gamma(const BoundInputs& in);

// Normal processing times: alpha <= 1 + sqrt(2 log L) eta_max.
double ub_normal(int num_ports, double eta_max);
double ub_normal(const BoundInputs& in);

// "Table mode": the experiment tables use unit capacities and a common cv,
// so sigma_max/mu_min = eta and the three families reduce to (L, eta).
double table_ub(Family family, int num_ports, double eta);

struct RootCheck {
  double root = 0.0;         // solution of z - log z = 1 + gamma log L, z >= 1
  double closed_form = 0.0;  // c + log(c + sqrt(c^2-1)), an upper bound on root
};

// Bisection root of the gamma bound's defining equation next to its closed
// form; closed_form >= root always.
RootCheck gamma_bound_root_check(int num_ports, double gamma);

struct AlphaEstimate {
  double value = 0.0;      // max over prefixes of the estimated ratio
  double std_error = 0.0;  // standard error at the maximizing prefix
  std::vector<double> per_prefix;  // estimated ratio per prefix length
  std::vector<int> order;          // the priority order the prefixes follow
  int samples = 0;
};

// Monte-Carlo estimate of
//   alpha = max_t  E[max_l sum_{tau<=t} P_{l,pi(tau)}] / max_l sum_{tau<=t} mu_{l,pi(tau)}.
// Prefixes with a zero denominator are skipped.
AlphaEstimate estimate_alpha(const Instance& instance, const std::vector<int>& pi,
                             int num_samples, std::uint64_t seed);

// Empirical growth of the bottleneck ratio for Pareto loads: mean of
// max_l sum_j P_{l,j} / sum_j mu over i.i.d. Pareto(mean 10, eta) entries,
// for each L, plus the log-log regression slope. Report only, no assertion.
struct ScalingReport {
  std::vector<int> num_ports;
  std::vector<double> mean_ratio;
  double slope = 0.0;
  double pareto_shape = 0.0;
};

ScalingReport pareto_scaling_report(double eta, const std::vector<int>& port_counts,
                                    int prefix_len, int num_samples, std::uint64_t seed);

}  // namespace coflow
