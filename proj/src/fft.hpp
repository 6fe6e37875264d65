#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <vector>

#include "aklab/grid.hpp"

namespace aklab::detail {

// Real-to-complex transform buffers for one grid. Not shared across threads.
class FftWorkspace {
 public:
  explicit FftWorkspace(const PeriodicGrid& grid);
  ~FftWorkspace();
  FftWorkspace(const FftWorkspace&) = delete;
  FftWorkspace& operator=(const FftWorkspace&) = delete;

  static FftWorkspace& get(const PeriodicGrid& grid);

  double* real() { return real_; }
  std::complex<double>* spectrum() { return reinterpret_cast<std::complex<double>*>(spectrum_); }
  std::complex<double>* scratch() { return reinterpret_cast<std::complex<double>*>(scratch_); }
  std::size_t spectrum_size() const { return nspec_; }
  std::size_t real_size() const { return nreal_; }

  // real -> spectrum
  void forward();
  // scratch -> real, unnormalized; scratch is clobbered
  void inverse();

  // Wavenumbers along one axis for every spectral entry, Nyquist set to zero.
  const double* multiplier(int axis) const { return multipliers_.data() + static_cast<std::size_t>(axis) * nspec_; }
  int wavenumber(std::size_t spec_index, int axis) const { return waves_[spec_index * dim_ + axis]; }
  // Index of wave vector k in the half spectrum, or -1 when only its conjugate is stored.
  long spectral_index(const int* k) const;

 private:
  int n_;
  int dim_;
  std::size_t nreal_;
  std::size_t nspec_;
  double* real_;
  fftw_complex* spectrum_;
  fftw_complex* scratch_;
  fftw_plan forward_plan_;
  fftw_plan inverse_plan_;
  std::vector<int> waves_;
  std::vector<double> multipliers_;
};

}  // namespace aklab::detail
