#include "ale/limits/multiplier.hpp"

#include <cmath>
#include <string>

#include "ale/errors.hpp"

namespace ale::limits {

Multiplier parse_multiplier(std::string_view name) {
  if (name == "Q" || name == "P") return Multiplier::Q;
  if (name == "Q0" || name == "P0") return Multiplier::Q0;
  if (name == "Q1" || name == "P1") return Multiplier::Q1;
  if (name == "Qtilde0" || name == "Ptilde0") return Multiplier::QTilde0;
  if (name == "Qtilde1" || name == "Ptilde1") return Multiplier::QTilde1;
  throw ConfigError("unknown multiplier variant '" + std::string(name) + "'");
}

std::string_view multiplier_name(Multiplier m) {
  switch (m) {
    case Multiplier::Q: return "Q";
    case Multiplier::Q0: return "Q0";
    case Multiplier::Q1: return "Q1";
    case Multiplier::QTilde0: return "Qtilde0";
    case Multiplier::QTilde1: return "Qtilde1";
  }
  throw ConfigError("unknown multiplier variant");
}

double multiplier_q(int k, double zeta, double sigma, Multiplier variant) {
  if (k < -1) throw DomainError("multiplier defined for k >= -1");
  const double kk = static_cast<double>(k);
  const double decay = std::exp(-sigma * (kk + 1.0));
  switch (variant) {
    case Multiplier::Q: return kk * (1.0 - zeta * decay);
    case Multiplier::Q0: return (1.0 - zeta) * kk;
    case Multiplier::Q1: return -zeta * kk * std::expm1(-sigma * (kk + 1.0));
    case Multiplier::QTilde0: return kk;
    case Multiplier::QTilde1: return std::abs(zeta) * kk * decay;
  }
  throw ConfigError("unknown multiplier variant");
}

conformal::LaurentSeries apply_semigroup(const conformal::LaurentSeries& series, double delta, double zeta,
                                         double sigma, Multiplier variant) {
  if (!(delta >= 0.0)) throw DomainError("semigroup time must be nonnegative");
  conformal::LaurentSeries out = series;
  for (std::size_t k = 0; k < out.coeffs.size(); ++k) {
    out.coeffs[k] *= std::exp(-delta * multiplier_q(static_cast<int>(k), zeta, sigma, variant));
  }
  return out;
}

int last_unstable_mode(double zeta, double sigma, int k_max) {
  int last = -1;
  for (int k = 1; k <= k_max; ++k) {
    if (multiplier_q(k, zeta, sigma) < 0.0) last = k;
  }
  return last;
}

int first_unstable_mode(double zeta, double sigma, int k_max) {
  for (int k = 1; k <= k_max; ++k) {
    if (multiplier_q(k, zeta, sigma) < 0.0) return k;
  }
  return -1;
}

}  // namespace ale::limits
