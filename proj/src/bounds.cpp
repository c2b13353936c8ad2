#include "bounds.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace coflow {

void BoundInputs::validate() const {
  if (num_ports < 2) throw ValidationError("bound inputs need L >= 2");
  if (!(p > 1.0)) throw ValidationError("moment order p must exceed 1");
  if (m_p < 0.0 || sigma_max < 0.0 || eta_max < 0.0)
    throw ValidationError("moment bounds must be nonnegative");
  if (!(mu_min > 0.0)) throw ValidationError("mu_min must be positive");
  double want = (sigma_max / mu_min) * (sigma_max / mu_min);
  if (std::abs(gamma - want) > 1e-9 * (1.0 + want))
    throw ValidationError("gamma must equal (sigma_max/mu_min)^2");
}

BoundInputs bound_inputs_p2(const Instance& instance) {
  BoundInputs in;
  in.num_ports = instance.num_ports();
  in.p = 2.0;
  bool any = false;
  for (const auto& c : instance.coflows) {
    for (const auto& f : c.flows) {
      double mean = spec_mean(f.size);
      double sd = spec_cv(f.size) * mean;
      for (int port : {f.src, f.dst}) {
        double b = instance.ports[static_cast<std::size_t>(port)].capacity;
        double mu = mean / b;
        double sigma = sd / b;
        if (mu <= 0.0) continue;
        in.mu_min = any ? std::min(in.mu_min, mu) : mu;
        in.sigma_max = std::max(in.sigma_max, sigma);
        in.eta_max = std::max(in.eta_max, mu > 0.0 ? sigma / mu : 0.0);
        any = true;
      }
    }
  }
  if (!any) throw ValidationError("instance has no positive expected processing time");
  in.m_p = in.sigma_max * in.sigma_max;
  in.gamma = (in.sigma_max / in.mu_min) * (in.sigma_max / in.mu_min);
  in.validate();
  return in;
}

double ub_general_p(int num_ports, double p, double m_p, double mu_min) {
  if (num_ports < 1) throw ValidationError("port count must be positive");
  if (!(p > 1.0)) throw ValidationError("moment order p must exceed 1");
  if (m_p < 0.0) throw ValidationError("moment bound must be nonnegative");
  if (!(mu_min > 0.0)) throw ValidationError("mu_min must be positive");
  return 1.0 + std::pow(static_cast<double>(num_ports), 1.0 / p) * std::pow(m_p, 1.0 / p) / mu_min;
}

double ub_general_p(const BoundInputs& in) {
  in.validate();
  return ub_general_p(in.num_ports, in.p, in.m_p, in.mu_min);
}

double ub_p2(int num_ports, double sigma_max, double mu_min) {
  return ub_general_p(num_ports, 2.0, sigma_max * sigma_max, mu_min);
}

double ub_gamma(int num_ports, double gamma) {
  if (num_ports < 2) throw ValidationError("gamma bound needs L >= 2");
  if (gamma < 0.0) throw ValidationError("gamma must be nonnegative");
  double c = 1.0 + gamma * std::log(static_cast<double>(num_ports));
  return c + std::log(c + std::sqrt(c * c - 1.0));
}

double ub_gamma(const BoundInputs& in) {
  in.validate();
  return ub_gamma(in.num_ports, in.gamma);
}

double ub_normal(int num_ports, double eta_max) {
  if (num_ports < 2) throw ValidationError("normal bound needs L >= 2");
  if (eta_max < 0.0) throw ValidationError("eta_max must be nonnegative");
  return 1.0 + std::sqrt(2.0 * std::log(static_cast<double>(num_ports))) * eta_max;
}

double ub_normal(const BoundInputs& in) {
  in.validate();
  return ub_normal(in.num_ports, in.eta_max);
}

double table_ub(Family family, int num_ports, double eta) {
  switch (family) {
    case Family::Gamma:
      return ub_gamma(num_ports, eta * eta);
    case Family::Normal:
      return ub_normal(num_ports, eta);
    case Family::Pareto:
      return ub_p2(num_ports, eta, 1.0);
    default:
      throw ValidationError("no closed-form bound for this family");
  }
}

RootCheck gamma_bound_root_check(int num_ports, double gamma) {
  double c = 1.0 + gamma * std::log(static_cast<double>(num_ports));
  RootCheck out;
  out.closed_form = ub_gamma(num_ports, gamma);
  if (c <= 1.0) {
    // Degenerate double root: z = 1 solves z - log z = 1 with derivative 0,
    // where bisection would stall at sqrt-epsilon accuracy.
    out.root = 1.0;
    return out;
  }

  // z - log z is increasing on [1, inf) with value 1 at z = 1, so the root
  // of z - log z = c is unique; the closed form bounds it from above.
  double lo = 1.0;
  double hi = c + std::sqrt(std::max(0.0, c * c - 1.0)) + 1.0;
  auto g = [c](double z) { return z - std::log(z) - c; };
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12) break;
  }
  out.root = 0.5 * (lo + hi);
  return out;
}

AlphaEstimate estimate_alpha(const Instance& instance, const std::vector<int>& pi,
                             int num_samples, std::uint64_t seed) {
  if (num_samples < 1) throw ValidationError("need at least one sample");
  const int n = instance.num_coflows();
  const int L = instance.num_ports();
  if (static_cast<int>(pi.size()) != n) throw ValidationError("order does not cover all coflows");

  const LoadMatrix mu = expected_loads(instance);

  // Deterministic denominators: bottleneck of expected prefix loads.
  std::vector<double> denom(static_cast<std::size_t>(n), 0.0);
  {
    std::vector<double> run(static_cast<std::size_t>(L), 0.0);
    for (int t = 0; t < n; ++t) {
      double best = 0.0;
      for (int l = 0; l < L; ++l) {
        run[static_cast<std::size_t>(l)] += mu.at(l, pi[static_cast<std::size_t>(t)]);
        best = std::max(best, run[static_cast<std::size_t>(l)]);
      }
      denom[static_cast<std::size_t>(t)] = best;
    }
  }

  std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sumsq(static_cast<std::size_t>(n), 0.0);
  std::vector<double> run(static_cast<std::size_t>(L));
  for (int s = 0; s < num_samples; ++s) {
    Realization real = sample_realization(
        instance, chain_seed(seed, {kStreamAlpha, static_cast<std::uint64_t>(s)}));
    LoadMatrix p = realized_loads(instance, real);
    std::fill(run.begin(), run.end(), 0.0);
    for (int t = 0; t < n; ++t) {
      double best = 0.0;
      for (int l = 0; l < L; ++l) {
        run[static_cast<std::size_t>(l)] += p.at(l, pi[static_cast<std::size_t>(t)]);
        best = std::max(best, run[static_cast<std::size_t>(l)]);
      }
      sum[static_cast<std::size_t>(t)] += best;
      sumsq[static_cast<std::size_t>(t)] += best * best;
    }
  }

  AlphaEstimate est;
  est.samples = num_samples;
  est.order = pi;
  est.per_prefix.assign(static_cast<std::size_t>(n), 0.0);
  const double ns = static_cast<double>(num_samples);
  for (int t = 0; t < n; ++t) {
    auto tu = static_cast<std::size_t>(t);
    if (denom[tu] <= 0.0) continue;  // all-zero prefix, vacuous ratio
    double mean = sum[tu] / ns;
    est.per_prefix[tu] = mean / denom[tu];
    double se = 0.0;
    if (num_samples > 1) {
      double var = std::max(0.0, (sumsq[tu] - ns * mean * mean) / (ns - 1.0));
      se = std::sqrt(var / ns) / denom[tu];
    }
    if (est.per_prefix[tu] > est.value) {
      est.value = est.per_prefix[tu];
      est.std_error = se;
    }
  }
  return est;
}

ScalingReport pareto_scaling_report(double eta, const std::vector<int>& port_counts,
                                    int prefix_len, int num_samples, std::uint64_t seed) {
  SizeSpec spec;
  spec.family = Family::Pareto;
  spec.mean = 10.0;
  spec.cv = eta;
  spec.validate();

  ScalingReport report;
  report.num_ports = port_counts;
  report.pareto_shape = pareto_params(spec).shape;

  Rng rng(chain_seed(seed, {kStreamAlpha}));
  const double denom = spec.mean * prefix_len;
  for (int L : port_counts) {
    double acc = 0.0;
    for (int s = 0; s < num_samples; ++s) {
      double best = 0.0;
      for (int l = 0; l < L; ++l) {
        double row = 0.0;
        for (int j = 0; j < prefix_len; ++j) row += sample(spec, rng);
        best = std::max(best, row);
      }
      acc += best / denom;
    }
    report.mean_ratio.push_back(acc / num_samples);
  }

  // Least-squares slope of log(ratio - ... ) vs log L; plain log-log fit.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(port_counts.size());
  for (std::size_t i = 0; i < port_counts.size(); ++i) {
    double x = std::log(static_cast<double>(port_counts[i]));
    double y = std::log(report.mean_ratio[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double det = m * sxx - sx * sx;
  report.slope = det != 0.0 ? (m * sxy - sx * sy) / det : 0.0;
  return report;
}

}  // namespace coflow
