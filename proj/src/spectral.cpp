#include "aklab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "fft.hpp"

namespace aklab {
namespace detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftWorkspace::FftWorkspace(const PeriodicGrid& grid)
    : n_(grid.n()), dim_(grid.dim()), nreal_(grid.size()), nspec_(grid.size() / grid.n() * (grid.n() / 2 + 1)) {
  real_ = fftw_alloc_real(nreal_);
  spectrum_ = fftw_alloc_complex(nspec_);
  scratch_ = fftw_alloc_complex(nspec_);
  if (!real_ || !spectrum_ || !scratch_) throw std::bad_alloc();
  std::vector<int> dims(dim_, n_);
  {
    std::lock_guard lock(planner_mutex());
    forward_plan_ = fftw_plan_dft_r2c(dim_, dims.data(), real_, spectrum_, FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_c2r(dim_, dims.data(), scratch_, real_, FFTW_ESTIMATE);
  }
  const int half = n_ / 2 + 1;
  waves_.resize(nspec_ * dim_);
  for (std::size_t s = 0; s < nspec_; ++s) {
    std::size_t rest = s;
    int* k = &waves_[s * dim_];
    k[dim_ - 1] = static_cast<int>(rest % half);
    rest /= half;
    for (int a = dim_ - 2; a >= 0; --a) {
      const int j = static_cast<int>(rest % n_);
      rest /= n_;
      k[a] = j <= n_ / 2 ? j : j - n_;
    }
  }
  multipliers_.assign(static_cast<std::size_t>(dim_) * nspec_, 0.0);
  for (int a = 0; a < dim_; ++a)
    for (std::size_t s = 0; s < nspec_; ++s) {
      const int k = waves_[s * dim_ + a];
      multipliers_[a * nspec_ + s] = 2 * std::abs(k) == n_ ? 0.0 : static_cast<double>(k);
    }
}

FftWorkspace::~FftWorkspace() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_plan_);
    fftw_destroy_plan(inverse_plan_);
  }
  fftw_free(real_);
  fftw_free(spectrum_);
  fftw_free(scratch_);
}

FftWorkspace& FftWorkspace::get(const PeriodicGrid& grid) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<FftWorkspace>> cache;
  auto& slot = cache[{grid.m(), grid.n()}];
  if (!slot) slot = std::make_unique<FftWorkspace>(grid);
  return *slot;
}

void FftWorkspace::forward() { fftw_execute(forward_plan_); }

void FftWorkspace::inverse() { fftw_execute(inverse_plan_); }

long FftWorkspace::spectral_index(const int* k) const {
  const int half = n_ / 2 + 1;
  if (k[dim_ - 1] < 0 || k[dim_ - 1] >= half) return -1;
  long idx = 0;
  for (int a = 0; a < dim_ - 1; ++a) idx = idx * n_ + ((k[a] % n_) + n_) % n_;
  return idx * half + k[dim_ - 1];
}

}  // namespace detail

namespace {

// scratch = i k_axis * spectrum, Nyquist dropped
void differentiate(detail::FftWorkspace& ws, int axis) {
  const auto* in = ws.spectrum();
  const double* k = ws.multiplier(axis);
  auto* out = ws.scratch();
  for (std::size_t s = 0; s < ws.spectrum_size(); ++s) out[s] = std::complex<double>(-k[s] * in[s].imag(), k[s] * in[s].real());
}

}  // namespace

TensorField spectral_partial(const TensorField& f, int axis) {
  if (axis < 0 || axis >= f.dim()) throw std::out_of_range("spectral_partial: axis out of range");
  f.require_finite("spectral_partial");
  auto& ws = detail::FftWorkspace::get(f.grid());
  const Eigen::MatrixXd in = f.values().transpose();
  Eigen::MatrixXd out(in.rows(), in.cols());
  const double norm = 1.0 / static_cast<double>(f.points());
  for (int c = 0; c < f.components(); ++c) {
    std::copy_n(in.col(c).data(), f.points(), ws.real());
    ws.forward();
    differentiate(ws, axis);
    ws.inverse();
    out.col(c) = Eigen::Map<const Eigen::VectorXd>(ws.real(), static_cast<Eigen::Index>(f.points())) * norm;
  }
  return TensorField(f.grid(), f.rank(), out.transpose());
}

std::vector<TensorField> spectral_gradient(const TensorField& f) {
  f.require_finite("spectral_gradient");
  auto& ws = detail::FftWorkspace::get(f.grid());
  const Eigen::MatrixXd in = f.values().transpose();
  std::vector<Eigen::MatrixXd> out(f.dim(), Eigen::MatrixXd(in.rows(), in.cols()));
  const double norm = 1.0 / static_cast<double>(f.points());
  for (int c = 0; c < f.components(); ++c) {
    std::copy_n(in.col(c).data(), f.points(), ws.real());
    ws.forward();
    for (int axis = 0; axis < f.dim(); ++axis) {
      differentiate(ws, axis);
      ws.inverse();
      out[axis].col(c) = Eigen::Map<const Eigen::VectorXd>(ws.real(), static_cast<Eigen::Index>(f.points())) * norm;
    }
  }
  std::vector<TensorField> fields;
  fields.reserve(f.dim());
  for (auto& o : out) fields.emplace_back(f.grid(), f.rank(), o.transpose());
  return fields;
}

double integrate(const TensorField& scalar) {
  require_rank(scalar, kScalar, "integrate");
  scalar.require_finite("integrate");
  double sum = 0.0;
  for (std::size_t p = 0; p < scalar.points(); ++p) sum += scalar(p);
  return sum * scalar.grid().cell_volume();
}

int fourier_extent(const TensorField& f, double tol) {
  auto& ws = detail::FftWorkspace::get(f.grid());
  int extent = 0;
  for (int c = 0; c < f.components(); ++c) {
    for (std::size_t p = 0; p < f.points(); ++p) ws.real()[p] = f(p, c);
    ws.forward();
    double peak = 0.0;
    for (std::size_t s = 0; s < ws.spectrum_size(); ++s) peak = std::max(peak, std::abs(ws.spectrum()[s]));
    if (peak == 0.0) continue;
    for (std::size_t s = 0; s < ws.spectrum_size(); ++s) {
      if (std::abs(ws.spectrum()[s]) <= tol * peak) continue;
      for (int a = 0; a < f.dim(); ++a) extent = std::max(extent, std::abs(ws.wavenumber(s, a)));
    }
  }
  return extent;
}

}  // namespace aklab
