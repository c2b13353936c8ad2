#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace coflow {

enum class Family { Fixed, Gamma, Normal, Pareto, Empirical };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

// Size distribution of a single flow, parameterized by mean and coefficient
// of variation (cv), or by an explicit value/probability table.
struct SizeSpec {
  Family family = Family::Fixed;
  double mean = 1.0;
  double cv = 0.0;
  // Empirical only: (value, probability), probabilities summing to 1.
  std::vector<std::pair<double, double>> table;

  void validate() const;  // throws ValidationError
};

struct GammaParams {
  double shape = 0.0;  // s
  double scale = 0.0;  // beta, mean = s*beta
};

struct NormalParams {
  double mu = 0.0;
  double sigma = 0.0;
};

struct ParetoParams {
  double shape = 0.0;  // zeta > 2 so that the cv is finite
  double scale = 0.0;  // x_m, mean = zeta*x_m/(zeta-1)
};

// Moment inversions. cv == 0 degenerates to Fixed(mean); callers should
// check is_degenerate() first.
bool is_degenerate(const SizeSpec& spec);
GammaParams gamma_params(const SizeSpec& spec);    // s = 1/cv^2, beta = mean*cv^2
NormalParams normal_params(const SizeSpec& spec);  // mu = mean, sigma = cv*mean
ParetoParams pareto_params(const SizeSpec& spec);  // zeta = 1 + sqrt(1 + 1/cv^2)

// One draw. Normal draws are rejection-sampled until strictly positive; the
// realized moments therefore exceed the nominal ones for large cv (reported
// alongside nominal values by the harness rather than hidden).
double sample(const SizeSpec& spec, Rng& rng);

// Analytic mean/cv of the spec as written (Normal: before truncation).
double spec_mean(const SizeSpec& spec);
double spec_cv(const SizeSpec& spec);

// Builds an Empirical spec from a multiset of observed values with uniform
// probabilities. Throws on an empty input.
SizeSpec empirical_from_values(const std::vector<double>& values);

}  // namespace coflow
