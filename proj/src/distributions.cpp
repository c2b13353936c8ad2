#include "distributions.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "errors.hpp"

namespace coflow {

const char* family_name(Family f) {
  switch (f) {
    case Family::Fixed: return "fixed";
    case Family::Gamma: return "gamma";
    case Family::Normal: return "normal";
    case Family::Pareto: return "pareto";
    case Family::Empirical: return "empirical";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "fixed") return Family::Fixed;
  if (name == "gamma") return Family::Gamma;
  if (name == "normal") return Family::Normal;
  if (name == "pareto") return Family::Pareto;
  if (name == "empirical") return Family::Empirical;
  throw ValidationError("unknown distribution family: " + name);
}

void SizeSpec::validate() const {
  if (family == Family::Empirical) {
    if (table.empty()) throw ValidationError("empirical size spec has empty table");
    double total = 0.0;
    for (const auto& [v, p] : table) {
      if (v < 0.0) throw ValidationError("empirical size spec has negative value");
      if (p < 0.0) throw ValidationError("empirical size spec has negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw ValidationError("empirical probabilities sum to " + std::to_string(total));
    return;
  }
  if (!(mean > 0.0)) throw ValidationError("size spec mean must be positive");
  if (cv < 0.0) throw ValidationError("size spec cv must be nonnegative");
  if (family == Family::Pareto && cv > 0.0) {
    // shape = 1 + sqrt(1 + 1/cv^2) > 2 holds for every finite cv > 0, so the
    // finite-variance requirement is automatic here; guard anyway.
    double zeta = 1.0 + std::sqrt(1.0 + 1.0 / (cv * cv));
    if (!(zeta > 2.0)) throw ValidationError("pareto shape must exceed 2");
  }
}

bool is_degenerate(const SizeSpec& spec) {
  return spec.family == Family::Fixed ||
         (spec.family != Family::Empirical && spec.cv == 0.0);
}

GammaParams gamma_params(const SizeSpec& spec) {
  if (spec.cv <= 0.0) throw ValidationError("gamma_params requires cv > 0");
  GammaParams p;
  p.shape = 1.0 / (spec.cv * spec.cv);
  p.scale = spec.mean * spec.cv * spec.cv;
  return p;
}

NormalParams normal_params(const SizeSpec& spec) {
  return NormalParams{spec.mean, spec.cv * spec.mean};
}

ParetoParams pareto_params(const SizeSpec& spec) {
  if (spec.cv <= 0.0) throw ValidationError("pareto_params requires cv > 0");
  // cv^2 = 1/(zeta(zeta-2)); the positive root of zeta^2 - 2 zeta - 1/cv^2.
  ParetoParams p;
  p.shape = 1.0 + std::sqrt(1.0 + 1.0 / (spec.cv * spec.cv));
  p.scale = spec.mean * (p.shape - 1.0) / p.shape;
  return p;
}

namespace {

double standard_normal(Rng& rng) {
  // Box-Muller, first coordinate only; two uniforms per draw keeps the
  // stream consumption deterministic.
  double u1 = rng.uniform_pos();
  double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// Marsaglia-Tsang; shape < 1 is boosted via Gamma(a) = Gamma(a+1) * U^(1/a).
double gamma_draw(double shape, double scale, Rng& rng) {
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::pow(rng.uniform_pos(), 1.0 / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = standard_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = rng.uniform_pos();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v * scale;
  }
}

double empirical_draw(const SizeSpec& spec, Rng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (const auto& [v, p] : spec.table) {
    acc += p;
    if (u < acc) return v;
  }
  return spec.table.back().first;
}

}  // namespace

double sample(const SizeSpec& spec, Rng& rng) {
  switch (spec.family) {
    case Family::Fixed:
      return spec.mean;
    case Family::Gamma: {
      if (is_degenerate(spec)) return spec.mean;
      auto p = gamma_params(spec);
      return gamma_draw(p.shape, p.scale, rng);
    }
    case Family::Normal: {
      if (is_degenerate(spec)) return spec.mean;
      auto p = normal_params(spec);
      double x;
      do {
        x = p.mu + p.sigma * standard_normal(rng);
      } while (!(x > 0.0));
      return x;
    }
    case Family::Pareto: {
      if (is_degenerate(spec)) return spec.mean;
      auto p = pareto_params(spec);
      return p.scale * std::pow(rng.uniform_pos(), -1.0 / p.shape);
    }
    case Family::Empirical:
      return empirical_draw(spec, rng);
  }
  throw ValidationError("unhandled size spec family");
}

double spec_mean(const SizeSpec& spec) {
  if (spec.family != Family::Empirical) return spec.mean;
  double m = 0.0;
  for (const auto& [v, p] : spec.table) m += v * p;
  return m;
}

double spec_cv(const SizeSpec& spec) {
  if (spec.family != Family::Empirical) return spec.cv;
  double m = spec_mean(spec);
  if (m <= 0.0) return 0.0;
  double m2 = 0.0;
  for (const auto& [v, p] : spec.table) m2 += v * v * p;
  double var = std::max(0.0, m2 - m * m);
  return std::sqrt(var) / m;
}

SizeSpec empirical_from_values(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("empirical distribution from empty value set");
  std::map<double, int> counts;
  for (double v : values) {
    if (v < 0.0) throw ValidationError("empirical value must be nonnegative");
    counts[v]++;
  }
  SizeSpec spec;
  spec.family = Family::Empirical;
  const double inv = 1.0 / static_cast<double>(values.size());
  for (const auto& [v, c] : counts) spec.table.emplace_back(v, c * inv);
  spec.mean = spec_mean(spec);
  spec.cv = spec_cv(spec);
  return spec;
}

}  // namespace coflow
