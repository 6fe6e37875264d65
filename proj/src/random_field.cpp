#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "aklab/spectral.hpp"
#include "fft.hpp"

namespace aklab {

namespace {

// Uniform on [-1, 1) from raw engine bits, so the stream does not depend on the standard library.
double unit(std::mt19937_64& rng) { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; }

bool canonical(const int* k, int dim) {
  for (int a = 0; a < dim; ++a)
    if (k[a] != 0) return k[a] > 0;
  return true;
}

}  // namespace

TensorField random_band_limited(const PeriodicGrid& grid, std::uint64_t seed, int cutoff, double amplitude, Rank rank) {
  if (cutoff < 0 || 3 * cutoff > grid.n())
    throw std::invalid_argument("random_band_limited: cutoff must satisfy 0 <= K <= n/3, got " + std::to_string(cutoff));
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw std::invalid_argument("random_band_limited: amplitude must be finite and non-negative");

  auto& ws = detail::FftWorkspace::get(grid);
  const int dim = grid.dim();
  std::mt19937_64 rng(seed);
  TensorField out(grid, rank);

  std::vector<int> k(dim), neg(dim);
  const int side = 2 * cutoff + 1;
  const int modes = power(side, dim);
  for (int c = 0; c < out.components(); ++c) {
    auto* spec = ws.scratch();
    double total = 0.0;
    std::fill(spec, spec + ws.spectrum_size(), std::complex<double>(0.0));
    for (int mode = 0; mode < modes; ++mode) {
      int rest = mode;
      double k2 = 0.0;
      for (int a = dim - 1; a >= 0; --a) {
        k[a] = rest % side - cutoff;
        rest /= side;
        k2 += k[a] * k[a];
        neg[a] = -k[a];
      }
      if (!canonical(k.data(), dim)) continue;
      const double weight = std::exp(-0.5 * k2);
      const double re = unit(rng) * weight;
      const double im = k2 == 0.0 ? 0.0 : unit(rng) * weight;
      const std::complex<double> coef(re, im);
      total += k2 == 0.0 ? std::abs(coef) : 2.0 * std::abs(coef);
      if (long s = ws.spectral_index(k.data()); s >= 0) spec[s] = coef;
      if (long s = ws.spectral_index(neg.data()); s >= 0) spec[s] = std::conj(coef);
    }
    ws.inverse();
    const double factor = total > 0.0 ? amplitude / total : 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p) out(p, c) = ws.real()[p] * factor;
  }
  return out;
}

}  // namespace aklab
