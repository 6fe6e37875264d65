#pragma once

#include <cstddef>

namespace aklab {

/// Uniform periodic grid on the torus [0, 2pi)^{2m}.
///
/// Points are numbered row-major with axis 0 varying slowest.
class PeriodicGrid {
 public:
  PeriodicGrid(int m, int n);

  int m() const { return m_; }
  int n() const { return n_; }
  int dim() const { return 2 * m_; }
  std::size_t size() const { return size_; }

  double spacing() const;
  double cell_volume() const;
  double volume() const;

  int index(std::size_t point, int axis) const;
  double coordinate(std::size_t point, int axis) const;

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  int m_;
  int n_;
  std::size_t size_;
};

}  // namespace aklab
