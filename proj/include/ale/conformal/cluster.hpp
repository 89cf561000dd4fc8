#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ale/conformal/particle.hpp"

namespace ale::conformal {

/// Phi'(z) kept as log|Phi'| plus a phase so long products of near-unit factors
/// neither overflow nor lose their magnitude.
struct LogDerivative {
  double log_abs = 0.0;
  double phase = 0.0;

  double abs() const;
  cplx value() const;
};

/// Cluster map Phi = F_1 o F_2 o ... o F_n with running total capacity.
/// Evaluation is const and thread-safe; growth happens through append() by the owner.
class ClusterMap {
 public:
  ClusterMap() = default;
  explicit ClusterMap(std::vector<ParticleMap> particles);

  void append(const ParticleMap& p);

  std::size_t size() const { return particles_.size(); }
  bool empty() const { return particles_.empty(); }
  std::span<const ParticleMap> particles() const { return particles_; }
  /// Sum of particle capacities (compensated summation).
  double total_capacity() const { return total_capacity_; }

  /// The cluster formed by the first n particles.
  ClusterMap prefix(std::size_t n) const;

  /// Phi(z) = F_1(F_2(...F_n(z))). Throws DomainError for |z| <= 1 and
  /// SingularityError if the orbit leaves the exterior disk numerically.
  cplx apply(cplx z) const;
  /// Phi'(z) accumulated along the forward orbit in log space.
  LogDerivative log_deriv(cplx z) const;
  cplx deriv(cplx z) const { return log_deriv(z).value(); }

  /// log|Phi'(z_j)| for many points at once (particle-major sweep). Same checks as log_deriv.
  void log_abs_deriv_many(std::span<const cplx> z, std::span<double> out) const;
  /// Normalized derivative Phi-hat'(z) = e^{-T} Phi'(z).
  cplx schlicht_deriv(cplx z) const;
  /// e^{-T} Phi(z) - z.
  cplx schlicht_residual(cplx z) const;

 private:
  std::vector<ParticleMap> particles_;
  double total_capacity_ = 0.0;
  double capacity_compensation_ = 0.0;
};

inline cplx cluster_apply(const ClusterMap& phi, cplx z) { return phi.apply(z); }
inline cplx cluster_deriv(const ClusterMap& phi, cplx z) { return phi.deriv(z); }
inline cplx schlicht_residual(const ClusterMap& phi, cplx z) { return phi.schlicht_residual(z); }

/// Phi(rho e^{i theta_j}), theta_j = 2 pi j / M. Requires rho >= 1 + 1e-8 and M >= 16.
std::vector<cplx> boundary_trace(const ClusterMap& phi, std::size_t samples, double rho);

}  // namespace ale::conformal
