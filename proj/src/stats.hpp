#pragma once

#include <span>
#include <vector>

namespace coflow {

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

// Linear-interpolation (type-7) quantile estimator, so table comparisons are
// well defined. Throws on empty input.
Quartiles quartiles(std::span<const double> values);

double mean_of(std::span<const double> values);
double sample_std(std::span<const double> values);     // N-1 denominator, 0 for N < 2
double standard_error(std::span<const double> values);

struct Histogram {
  double bin_width = 0.05;
  double origin = 0.0;           // left edge of counts[0]
  std::vector<long> counts;
};

Histogram histogram(std::span<const double> values, double bin_width = 0.05);

}  // namespace coflow
