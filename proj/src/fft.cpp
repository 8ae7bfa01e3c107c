#include "fracblow/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace fracblow {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(const GridSpec& grid, int sign) {
    std::lock_guard lock(mutex);
    const auto key = std::make_tuple(grid.dim, grid.points, sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    std::vector<Complex> scratch(grid.size());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int n = static_cast<int>(grid.points);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = grid.dim == 1 ? fftw_plan_dft_1d(n, buf, buf, sign, flags)
                                   : fftw_plan_dft_2d(n, n, buf, buf, sign, flags);
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(const GridSpec& grid, std::span<Complex> data, int sign) {
  if (data.size() != grid.size()) throw std::invalid_argument("fft buffer size does not match grid");
  fftw_plan plan = cache().get(grid, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void fft_forward(const GridSpec& grid, std::span<Complex> data) { execute(grid, data, FFTW_FORWARD); }

void fft_backward(const GridSpec& grid, std::span<Complex> data) {
  execute(grid, data, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& z : data) z *= scale;
}

Field apply_radial_multiplier(const Field& f, const std::function<Complex(double)>& symbol) {
  Field out = f;
  const auto& grid = f.grid();
  auto data = out.values();
  fft_forward(grid, data);
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= symbol(grid.frequency_norm(k));
  fft_backward(grid, data);
  return out;
}

double spectral_tail_fraction(const Field& f, double band) {
  const auto& grid = f.grid();
  std::vector<Complex> data(f.values().begin(), f.values().end());
  fft_forward(grid, data);
  const double nyquist = std::numbers::pi / grid.spacing();
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const double e = std::norm(data[k]);
    total += e;
    if (grid.frequency_norm(k) > band * nyquist) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace fracblow
