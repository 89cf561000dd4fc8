#include "ale/conformal/cluster.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ale/errors.hpp"

namespace ale::conformal {

namespace {

// Fold the running product's magnitude into the log every this many factors.
constexpr std::size_t kRenormalizeEvery = 32;

void require_exterior(cplx z) {
  if (!(std::norm(z) > 1.0)) {
    throw DomainError("cluster map evaluated at |z| <= 1: |z| = " + std::to_string(std::abs(z)));
  }
}

void require_orbit(cplx w) {
  if (!(std::norm(w) > 1.0) || !std::isfinite(w.real()) || !std::isfinite(w.imag())) {
    throw SingularityError("cluster orbit left the exterior disk");
  }
}

}  // namespace

double LogDerivative::abs() const { return std::exp(log_abs); }

cplx LogDerivative::value() const { return std::polar(std::exp(log_abs), phase); }

ClusterMap::ClusterMap(std::vector<ParticleMap> particles) {
  particles_.reserve(particles.size());
  for (const auto& p : particles) append(p);
}

void ClusterMap::append(const ParticleMap& p) {
  // Kahan summation keeps total_capacity within a few ulps of the exact sum.
  const double y = p.capacity() - capacity_compensation_;
  const double t = total_capacity_ + y;
  capacity_compensation_ = (t - total_capacity_) - y;
  total_capacity_ = t;
  particles_.push_back(p);
}

ClusterMap ClusterMap::prefix(std::size_t n) const {
  if (n > particles_.size()) throw DomainError("prefix longer than cluster");
  ClusterMap out;
  out.particles_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.append(particles_[i]);
  return out;
}

cplx ClusterMap::apply(cplx z) const {
  require_exterior(z);
  cplx w = z;
  for (auto it = particles_.rbegin(); it != particles_.rend(); ++it) {
    w = it->value(w);
    require_orbit(w);
  }
  return w;
}

LogDerivative ClusterMap::log_deriv(cplx z) const {
  require_exterior(z);
  double wr = z.real(), wi = z.imag(), pr = 1.0, pi = 0.0;
  double log_abs = 0.0;
  std::size_t pending = 0;
  for (auto it = particles_.rbegin(); it != particles_.rend(); ++it) {
    it->jet_many(&wr, &wi, &pr, &pi, 1);
    if (++pending == kRenormalizeEvery || it + 1 == particles_.rend()) {
      require_orbit({wr, wi});
      const double mag = std::hypot(pr, pi);
      if (!(mag > 0.0) || !std::isfinite(mag)) throw SingularityError("cluster derivative degenerate");
      log_abs += std::log(mag);
      pr /= mag;
      pi /= mag;
      pending = 0;
    }
  }
  return {log_abs, std::atan2(pi, pr)};
}

void ClusterMap::log_abs_deriv_many(std::span<const cplx> z, std::span<double> out) const {
  if (z.size() != out.size()) throw ConfigError("log_abs_deriv_many: size mismatch");
  const std::size_t n = z.size();
  std::vector<double> wr(n), wi(n), pr(n, 1.0), pi(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    require_exterior(z[j]);
    wr[j] = z[j].real();
    wi[j] = z[j].imag();
    out[j] = 0.0;
  }
  std::size_t pending = 0;
  for (auto it = particles_.rbegin(); it != particles_.rend(); ++it) {
    it->jet_many(wr.data(), wi.data(), pr.data(), pi.data(), n);
    if (++pending == kRenormalizeEvery || it + 1 == particles_.rend()) {
      for (std::size_t j = 0; j < n; ++j) {
        const double mag2 = pr[j] * pr[j] + pi[j] * pi[j];
        const double w2 = wr[j] * wr[j] + wi[j] * wi[j];
        if (!(mag2 > 0.0) || !std::isfinite(mag2) || !(w2 > 1.0) || !std::isfinite(w2)) {
          throw SingularityError("cluster derivative degenerate");
        }
        const double inv = 1.0 / std::sqrt(mag2);
        out[j] += 0.5 * std::log(mag2);
        pr[j] *= inv;
        pi[j] *= inv;
      }
      pending = 0;
    }
  }
}

cplx ClusterMap::schlicht_deriv(cplx z) const {
  const LogDerivative d = log_deriv(z);
  return std::polar(std::exp(d.log_abs - total_capacity_), d.phase);
}

cplx ClusterMap::schlicht_residual(cplx z) const { return std::exp(-total_capacity_) * apply(z) - z; }

std::vector<cplx> boundary_trace(const ClusterMap& phi, std::size_t samples, double rho) {
  if (!(rho >= 1.0 + 1e-8)) throw ConfigError("trace radius must be at least 1 + 1e-8");
  if (samples < 16) throw ConfigError("trace needs at least 16 samples");
  std::vector<cplx> out(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(samples);
    out[j] = phi.apply(std::polar(rho, theta));
  }
  return out;
}

}  // namespace ale::conformal
