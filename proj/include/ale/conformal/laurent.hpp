#pragma once

#include <cstddef>
#include <vector>

#include "ale/conformal/cluster.hpp"

namespace ale::conformal {

/// In-place radix-2 DFT: data[k] <- sum_j data[j] e^{sign 2 pi i jk/M}, sign = -1 (forward)
/// or +1 (inverse, unnormalized). Size must be a power of two.
void fft_in_place(std::vector<cplx>& data, int sign);

/// Truncated coefficients psi_k (k = 0..K) of psi(z) = sum_k psi_k z^{-k}, extracted on |z| = radius.
struct LaurentSeries {
  double radius = 1.5;
  std::vector<cplx> coeffs;
  /// Aliasing tolerance r^{-(M-K)} r/(r-1) of the extraction (0 for exact series).
  double tolerance = 0.0;

  std::size_t modes() const { return coeffs.size(); }
  cplx eval(cplx z) const;
};

/// Default extraction grid.
struct LaurentGrid {
  double radius = 1.5;
  std::size_t modes = 32;     // K
  std::size_t samples = 512;  // M
};

/// Samples of the Schlicht residual e^{-T} Phi(z) - z at z_j = r e^{2 pi i j/M}.
std::vector<cplx> sample_schlicht_residual(const ClusterMap& phi, double radius, std::size_t samples);

/// Coefficients 0..K from M equispaced samples of a function on |z| = radius.
/// Throws ConfigError unless M is a power of two, M >= 4K and radius > 1.
LaurentSeries laurent_from_samples(const std::vector<cplx>& samples, double radius, std::size_t modes);

/// coeffs[k] = (1/M) sum_j Psi-hat(r e^{i theta_j}) r^k e^{i k theta_j}.
LaurentSeries laurent_coeffs(const ClusterMap& phi, double radius, std::size_t modes, std::size_t samples);
inline LaurentSeries laurent_coeffs(const ClusterMap& phi, const LaurentGrid& grid = {}) {
  return laurent_coeffs(phi, grid.radius, grid.modes, grid.samples);
}

}  // namespace ale::conformal
