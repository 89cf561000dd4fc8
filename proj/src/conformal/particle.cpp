#include "ale/conformal/particle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ale/errors.hpp"

namespace ale::conformal {

namespace {

void require_exterior(cplx z) {
  if (!(std::norm(z) > 1.0)) {
    throw DomainError("particle map evaluated at |z| <= 1: |z| = " + std::to_string(std::abs(z)));
  }
}

}  // namespace

ParticleMap build_slit_map(double c, double theta) {
  if (!(c > 0.0)) throw ConfigError("particle capacity must be positive, got " + std::to_string(c));
  if (c > ParticleMap::kMaxCapacity) {
    throw ConfigError("particle capacity " + std::to_string(c) + " outside supported range (0, 1]");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double angle = std::fmod(theta, two_pi);
  if (angle < 0.0) angle += two_pi;

  ParticleMap p;
  p.capacity_ = c;
  p.angle_ = angle;
  p.exp_cap_ = std::exp(c);
  p.expm1_cap_ = std::expm1(c);
  p.rotation_ = cplx(std::cos(angle), std::sin(angle));
  // Tip of the slit is the image of the critical point e^{i theta}.
  p.slit_height_ = std::abs(p.value(p.rotation_)) - 1.0;
  return p;
}

cplx ParticleMap::eval(cplx z) const {
  require_exterior(z);
  return value(z);
}

cplx ParticleMap::deriv(cplx z) const {
  require_exterior(z);
  const MapJet j = jet(z);
  if (!std::isfinite(j.deriv.real()) || !std::isfinite(j.deriv.imag())) {
    throw SingularityError("slit map derivative is singular at the requested point");
  }
  return j.deriv;
}

double slit_height(double c) { return build_slit_map(c, 0.0).slit_height(); }

double slit_capacity_for_height(double delta) {
  if (!(delta > 0.0)) throw ConfigError("slit height must be positive");
  double lo = 0.0;
  double hi = ParticleMap::kMaxCapacity;
  if (slit_height(hi) < delta) throw ConfigError("slit height beyond supported capacity range");
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0 || slit_height(mid) < delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace ale::conformal
