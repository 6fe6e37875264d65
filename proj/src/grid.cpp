#include "aklab/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace aklab {

PeriodicGrid::PeriodicGrid(int m, int n) : m_(m), n_(n), size_(1) {
  if (m != 1 && m != 2) throw std::invalid_argument("grid: m must be 1 or 2, got " + std::to_string(m));
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("grid: n must be even and >= 8, got " + std::to_string(n));
  for (int a = 0; a < dim(); ++a) size_ *= static_cast<std::size_t>(n);
}

double PeriodicGrid::spacing() const { return 2.0 * std::numbers::pi / n_; }

double PeriodicGrid::cell_volume() const { return std::pow(spacing(), dim()); }

double PeriodicGrid::volume() const { return std::pow(2.0 * std::numbers::pi, dim()); }

int PeriodicGrid::index(std::size_t point, int axis) const {
  std::size_t stride = 1;
  for (int a = dim() - 1; a > axis; --a) stride *= static_cast<std::size_t>(n_);
  return static_cast<int>((point / stride) % static_cast<std::size_t>(n_));
}

double PeriodicGrid::coordinate(std::size_t point, int axis) const { return spacing() * index(point, axis); }

}  // namespace aklab
