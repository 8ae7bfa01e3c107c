#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fracblow {

using Complex = std::complex<double>;

/// Periodic sampling lattice on [-L, L)^n with N points per axis.
struct GridSpec {
  int dim = 1;
  double half_width = 40.0;
  std::size_t points = 1024;

  /// Throws std::invalid_argument unless n in {1,2}, N >= 8 even, L > 0.
  void validate() const;

  double spacing() const { return 2.0 * half_width / static_cast<double>(points); }
  std::size_t size() const { return dim == 1 ? points : points * points; }
  double cell_volume() const;
  /// Coordinate of index i along one axis: -L + i*dx.
  double coordinate(std::size_t i) const { return -half_width + static_cast<double>(i) * spacing(); }
  /// DFT wavenumber of index i along one axis (2*pi*m/(2L), m in [-N/2, N/2)).
  double wavenumber(std::size_t i) const;
  /// Euclidean radius of lattice site `site` (row-major for n=2).
  double radius(std::size_t site) const;
  /// |xi| of DFT bin `bin` (row-major for n=2).
  double frequency_norm(std::size_t bin) const;
};

bool operator==(const GridSpec& a, const GridSpec& b);

/// Complex samples of a function on a GridSpec lattice.
class Field {
 public:
  Field() = default;
  explicit Field(GridSpec grid);
  Field(GridSpec grid, std::vector<Complex> values);

  /// Samples a real or complex function of the position vector.
  template <typename Fn>
  static Field sample(const GridSpec& grid, Fn&& fn);

  const GridSpec& grid() const { return grid_; }
  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  Complex& operator[](std::size_t i) { return values_[i]; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  bool finite() const;
  double sup_norm() const;
  /// Lattice L2 norm: (sum |u|^2 dx^n)^{1/2}.
  double l2_norm() const;
  /// Lattice integral sum(u) dx^n.
  Complex integral() const;
  /// Lattice integral of u * w for a real weight sampled on the same grid.
  Complex weighted_integral(std::span<const double> weight) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(Complex s);

 private:
  GridSpec grid_;
  std::vector<Complex> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Complex s, Field a);

/// Real lattice inner product Re sum conj(a) b dx^n.
double inner_product(const Field& a, const Field& b);

template <typename Fn>
Field Field::sample(const GridSpec& grid, Fn&& fn) {
  grid.validate();
  Field f(grid);
  const std::size_t n = grid.points;
  if (grid.dim == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x[1] = {grid.coordinate(i)};
      f.values_[i] = Complex(fn(std::span<const double>(x, 1)));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double x[2] = {grid.coordinate(i), grid.coordinate(j)};
        f.values_[i * n + j] = Complex(fn(std::span<const double>(x, 2)));
      }
    }
  }
  return f;
}

}  // namespace fracblow
