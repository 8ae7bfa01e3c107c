#include "fracblow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fracblow {

void GridSpec::validate() const {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (points < 8 || points % 2 != 0) {
    throw std::invalid_argument("grid points per axis must be even and >= 8, got " + std::to_string(points));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("grid half-width must be positive");
  }
}

double GridSpec::cell_volume() const {
  const double dx = spacing();
  return dim == 1 ? dx : dx * dx;
}

double GridSpec::wavenumber(std::size_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(points);
  auto m = static_cast<std::ptrdiff_t>(i);
  if (m >= n / 2) m -= n;
  return std::numbers::pi * static_cast<double>(m) / half_width;
}

double GridSpec::radius(std::size_t site) const {
  if (dim == 1) return std::abs(coordinate(site));
  return std::hypot(coordinate(site / points), coordinate(site % points));
}

double GridSpec::frequency_norm(std::size_t bin) const {
  if (dim == 1) return std::abs(wavenumber(bin));
  return std::hypot(wavenumber(bin / points), wavenumber(bin % points));
}

bool operator==(const GridSpec& a, const GridSpec& b) {
  return a.dim == b.dim && a.points == b.points && a.half_width == b.half_width;
}

Field::Field(GridSpec grid) : grid_(grid) {
  grid_.validate();
  values_.assign(grid_.size(), Complex{});
}

Field::Field(GridSpec grid, std::vector<Complex> values) : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field value count does not match grid");
  }
}

bool Field::finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double Field::sup_norm() const {
  double m = 0.0;
  for (const auto& z : values_) m = std::max(m, std::abs(z));
  return m;
}

double Field::l2_norm() const {
  double s = 0.0;
  for (const auto& z : values_) s += std::norm(z);
  return std::sqrt(s * grid_.cell_volume());
}

Complex Field::integral() const {
  Complex s{};
  for (const auto& z : values_) s += z;
  return s * grid_.cell_volume();
}

Complex Field::weighted_integral(std::span<const double> weight) const {
  if (weight.size() != values_.size()) throw std::invalid_argument("weight size does not match field");
  Complex s{};
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * weight[i];
  return s * grid_.cell_volume();
}

Field& Field::operator+=(const Field& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(Complex s) {
  for (auto& z : values_) z *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Complex s, Field a) { return a *= s; }

double inner_product(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (std::conj(a[i]) * b[i]).real();
  return s * a.grid().cell_volume();
}

}  // namespace fracblow
