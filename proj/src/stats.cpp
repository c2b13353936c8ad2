#include "stats.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace coflow {

namespace {

double type7(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - std::floor(h)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

Quartiles quartiles(std::span<const double> values) {
  if (values.empty()) throw ValidationError("quartiles of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return Quartiles{type7(sorted, 0.25), type7(sorted, 0.5), type7(sorted, 0.75)};
}

double mean_of(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean of an empty sample");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double m = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / (static_cast<double>(values.size()) - 1.0));
}

double standard_error(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  return sample_std(values) / std::sqrt(static_cast<double>(values.size()));
}

Histogram histogram(std::span<const double> values, double bin_width) {
  if (values.empty() || !(bin_width > 0.0))
    throw ValidationError("histogram needs values and a positive bin width");
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  Histogram h;
  h.bin_width = bin_width;
  h.origin = std::floor(lo / bin_width) * bin_width;
  auto bins = static_cast<std::size_t>(std::floor((hi - h.origin) / bin_width)) + 1;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>(std::floor((v - h.origin) / bin_width));
    if (b >= bins) b = bins - 1;
    h.counts[b]++;
  }
  return h;
}

}  // namespace coflow
