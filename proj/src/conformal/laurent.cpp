#include "ale/conformal/laurent.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <utility>

#include "ale/errors.hpp"

namespace ale::conformal {

void fft_in_place(std::vector<cplx>& data, int sign) {
  const std::size_t n = data.size();
  if (n == 0 || !std::has_single_bit(n)) throw ConfigError("FFT size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        // Twiddles computed directly rather than by recurrence to avoid drift.
        const cplx tw = std::polar(1.0, angle * static_cast<double>(k));
        const cplx a = data[start + k];
        const cplx b = data[start + k + half] * tw;
        data[start + k] = a + b;
        data[start + k + half] = a - b;
      }
    }
  }
}

cplx LaurentSeries::eval(cplx z) const {
  // Horner in 1/z.
  const cplx inv = 1.0 / z;
  cplx acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * inv + *it;
  return acc;
}

std::vector<cplx> sample_schlicht_residual(const ClusterMap& phi, double radius, std::size_t samples) {
  if (!(radius > 1.0)) throw ConfigError("extraction radius must exceed 1");
  std::vector<cplx> out(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(samples);
    out[j] = phi.schlicht_residual(std::polar(radius, theta));
  }
  return out;
}

LaurentSeries laurent_from_samples(const std::vector<cplx>& samples, double radius, std::size_t modes) {
  const std::size_t m = samples.size();
  if (!(radius > 1.0)) throw ConfigError("extraction radius must exceed 1");
  if (m == 0 || !std::has_single_bit(m)) throw ConfigError("sample count M must be a power of two");
  if (m < 4 * modes) throw ConfigError("sample count M must be at least 4K");

  std::vector<cplx> spectrum = samples;
  fft_in_place(spectrum, +1);

  LaurentSeries out;
  out.radius = radius;
  out.coeffs.resize(modes + 1);
  double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k <= modes; ++k) {
    out.coeffs[k] = spectrum[k] * scale;
    scale *= radius;
  }
  out.tolerance = std::pow(radius, -static_cast<double>(m - modes)) * radius / (radius - 1.0);
  return out;
}

LaurentSeries laurent_coeffs(const ClusterMap& phi, double radius, std::size_t modes, std::size_t samples) {
  if (samples == 0 || !std::has_single_bit(samples)) throw ConfigError("sample count M must be a power of two");
  if (samples < 4 * modes) throw ConfigError("sample count M must be at least 4K");
  return laurent_from_samples(sample_schlicht_residual(phi, radius, samples), radius, modes);
}

}  // namespace ale::conformal
