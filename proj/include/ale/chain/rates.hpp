#pragma once

#include <cstddef>

#include "ale/conformal/cluster.hpp"
#include "ale/params.hpp"

namespace ale::chain {

/// Bounds on |Phi-hat'(e^{sigma + i theta})| over theta.
struct Envelope {
  double upper = 1.0;
  double lower = 1.0;
  bool analytic = false;
};

/// log|Phi'(e^{sigma + i theta})|. On a SingularityError the angle is perturbed by 1e-12
/// and the evaluation retried once before the error propagates.
double log_deriv_at_angle(const conformal::ClusterMap& phi, double sigma, double theta);

/// lambda(theta, Phi) = c^{-1} |Phi'(e^{sigma + i theta})|^{-eta}.
double jump_rate_density(const conformal::ClusterMap& phi, const ModelParams& params, double theta);
/// c(theta, Phi) = c |Phi'(e^{sigma + i theta})|^{-alpha}.
double particle_capacity(const conformal::ClusterMap& phi, const ModelParams& params, double theta);

/// Grid size used by the envelope scan: max(1024, ceil(64/sigma)).
std::size_t envelope_grid_size(double sigma);

/// Distortion bound 1/(e^{2 sigma} - 1).
double analytic_distortion(double sigma);

/// When 1/(e^{2 sigma} - 1) < 1 the distortion theorem gives 1 -/+ that value. Otherwise a
/// grid scan is widened: each deviation from 1 (plus a one-particle slack) is multiplied by
/// `margin`, the upper bound is capped by the analytic one and the lower bound kept above
/// min/margin.
Envelope derivative_envelope(const conformal::ClusterMap& phi, const ModelParams& params, double margin = 2.0);

}  // namespace ale::chain
