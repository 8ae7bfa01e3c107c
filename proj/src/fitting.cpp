#include "fracblow/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracblow {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("linear_fit: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("linear_fit: need at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("linear_fit: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.count = n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> pairs) {
  std::vector<double> lx, ly;
  for (const auto& [mu, t] : pairs) {
    if (!(std::isfinite(mu) && std::isfinite(t) && mu > 0.0 && t > 0.0)) continue;
    lx.push_back(std::log(mu));
    ly.push_back(std::log(t));
  }
  if (lx.size() < 4)
    throw std::invalid_argument("fit_power_law: need at least 4 finite positive pairs, got " +
                                std::to_string(lx.size()));
  std::vector<double> sorted = lx;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("fit_power_law: repeated mu value");
  const LinearFit f = linear_fit(lx, ly);
  return {f.slope, f.intercept, f.residual};
}

}  // namespace fracblow
