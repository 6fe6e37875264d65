#pragma once

#include <cstdint>
#include <vector>

#include "aklab/field.hpp"

namespace aklab {

/// Partial derivative along one axis, componentwise, by Fourier multiplication.
/// The Nyquist mode is dropped, so the result is exact for band-limited input.
TensorField spectral_partial(const TensorField& f, int axis);

/// All 2m partial derivatives, sharing one forward transform per component.
std::vector<TensorField> spectral_gradient(const TensorField& f);

/// Riemann sum h^{2m} * sum over grid points of a scalar field (exact for trigonometric polynomials).
double integrate(const TensorField& scalar);

/// Largest |k|_inf among Fourier modes whose magnitude exceeds tol times the largest one.
int fourier_extent(const TensorField& f, double tol = 1e-12);

/// Smooth random field with Fourier support in |k|_inf <= cutoff.
///
/// Mode k gets uniform random cos/sin coefficients scaled by exp(-|k|^2 / 2). Each component is then scaled so
/// that the sum of coefficient magnitudes, a bound on its sup-norm, equals amplitude. The coefficients do not depend
/// on the grid size, so the same seed gives the same continuous field on every grid. Reproducible across platforms.
TensorField random_band_limited(const PeriodicGrid& grid, std::uint64_t seed, int cutoff, double amplitude,
                                Rank rank = kScalar);

}  // namespace aklab
