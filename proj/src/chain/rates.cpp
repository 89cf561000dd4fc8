#include "ale/chain/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ale/errors.hpp"

namespace ale::chain {

using conformal::cplx;

double log_deriv_at_angle(const conformal::ClusterMap& phi, double sigma, double theta) {
  try {
    return phi.log_deriv(std::polar(std::exp(sigma), theta)).log_abs;
  } catch (const SingularityError&) {
    return phi.log_deriv(std::polar(std::exp(sigma), theta + 1e-12)).log_abs;
  }
}

double jump_rate_density(const conformal::ClusterMap& phi, const ModelParams& params, double theta) {
  if (params.eta == 0.0) return 1.0 / params.c;
  return std::exp(-params.eta * log_deriv_at_angle(phi, params.sigma, theta)) / params.c;
}

double particle_capacity(const conformal::ClusterMap& phi, const ModelParams& params, double theta) {
  if (params.alpha == 0.0) return params.c;
  return params.c * std::exp(-params.alpha * log_deriv_at_angle(phi, params.sigma, theta));
}

std::size_t envelope_grid_size(double sigma) {
  return std::max<std::size_t>(1024, static_cast<std::size_t>(std::ceil(64.0 / sigma)));
}

double analytic_distortion(double sigma) { return 1.0 / std::expm1(2.0 * sigma); }

Envelope derivative_envelope(const conformal::ClusterMap& phi, const ModelParams& params, double margin) {
  if (!(params.sigma > 0.0)) throw ConfigError("derivative envelope requires sigma > 0");
  const double bound = analytic_distortion(params.sigma);
  if (bound < 1.0) return {1.0 + bound, 1.0 - bound, true};

  const std::size_t m = envelope_grid_size(params.sigma);
  double lo = 1.0;
  double hi = 1.0;
  if (!phi.empty()) {
    const double cap = phi.total_capacity();
    const double radius = std::exp(params.sigma);
    std::vector<cplx> points(m);
    std::vector<double> logs(m);
    for (std::size_t j = 0; j < m; ++j) {
      points[j] = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m));
    }
    try {
      phi.log_abs_deriv_many(points, logs);
    } catch (const SingularityError&) {
      for (std::size_t j = 0; j < m; ++j) logs[j] = log_deriv_at_angle(phi, params.sigma, std::arg(points[j]));
    }
    const auto [mn, mx] = std::minmax_element(logs.begin(), logs.end());
    lo = std::exp(*mn - cap);
    hi = std::exp(*mx - cap);
  }
  // Room for the particles added before the next scan: one slit of capacity c moves
  // |Phi-hat'| at distance e^sigma - 1 by about 2c/(e^sigma - 1)^2.
  const double gap = std::expm1(params.sigma);
  const double slack = 2.0 * params.c / (gap * gap);
  Envelope env;
  env.analytic = false;
  env.upper = std::min(1.0 + margin * (std::max(hi - 1.0, 0.0) + slack), 1.0 + bound);
  env.upper = std::max(env.upper, hi);
  env.lower = std::max(1.0 - margin * (std::max(1.0 - lo, 0.0) + slack), lo / margin);
  return env;
}

}  // namespace ale::chain
