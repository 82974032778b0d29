#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace gfm::eval {

double mean(std::span<const double> values);
double sample_stddev(std::span<const double> values);

/// Percentile bootstrap confidence interval for the mean.
struct BootstrapCI {
  double lower = 0.0;
  double upper = 0.0;
};
BootstrapCI bootstrap_mean_ci(std::span<const double> values,
                              double confidence = 0.95, int resamples = 2000,
                              uint64_t seed = 12345);

/// Spearman rank correlation; ties get average ranks.
double spearman_rho(std::span<const double> xs, std::span<const double> ys);

}  // namespace gfm::eval
