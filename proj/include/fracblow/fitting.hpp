#pragma once

#include <span>
#include <utility>

namespace fracblow {

/// Ordinary least squares y = slope * x + intercept.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the fit.
  double residual = 0.0;
  std::size_t count = 0;
};

/// Throws std::invalid_argument for fewer than 2 points or constant x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct PowerLawFit {
  double exponent = 0.0;
  /// log T at mu = 1.
  double intercept = 0.0;
  /// RMS residual in log space.
  double residual = 0.0;
};

/// Least squares of log T against log mu. Refuses fewer than 4 finite
/// positive pairs or repeated mu.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> pairs);

}  // namespace fracblow
