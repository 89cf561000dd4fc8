#pragma once

namespace ale {

/// Model parameters of ALE(alpha, eta) with regularization sigma and capacity scale c.
/// zeta = alpha + eta is always derived, never stored.
struct ModelParams {
  double alpha = 0.0;
  double eta = 0.0;
  double sigma = 0.25;
  double c = 1e-3;

  double zeta() const { return alpha + eta; }

  bool operator==(const ModelParams&) const = default;
};

}  // namespace ale
