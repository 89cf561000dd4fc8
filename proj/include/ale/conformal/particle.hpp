#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

namespace ale::conformal {

using cplx = std::complex<double>;

enum class ParticleFamily { Slit };

/// Value and derivative of a map at one point.
struct MapJet {
  cplx value;
  cplx deriv;
};

/// One attached particle: the normalized exterior map F_{c,theta}(z) = e^{i theta} F_c(e^{-i theta} z)
/// onto the exterior disk minus a radial slit of height delta(c) at e^{i theta}.
///
/// F_c is the time-c flow of the exterior Loewner equation driven by a unit point mass at 1.
/// Conjugating by the Joukowski map J(z) = z + 1/z turns that flow into an affine map:
///   F_c(z) = J^{-1}(e^c J(z) + 2(e^c - 1)),
/// with J^{-1} the branch onto |w| > 1. This gives F_c(z) = e^c (z + a_0 + O(1/z)) with
/// a_0 = 2(1 - e^{-c}).
class ParticleMap {
 public:
  /// Largest capacity accepted by build_slit_map.
  static constexpr double kMaxCapacity = 1.0;

  double capacity() const { return capacity_; }
  double angle() const { return angle_; }
  ParticleFamily family() const { return ParticleFamily::Slit; }
  /// Slit height delta(c): the tip F_c(1) sits at 1 + delta.
  double slit_height() const { return slit_height_; }
  cplx rotation() const { return rotation_; }

  /// F_{c,theta}(z). Throws DomainError for |z| <= 1.
  cplx eval(cplx z) const;
  /// F'_{c,theta}(z). Throws DomainError for |z| <= 1, SingularityError at a branch point.
  cplx deriv(cplx z) const;

  /// Unchecked value and derivative; z must lie in |z| >= 1.
  MapJet jet(cplx z) const {
    double wr = z.real(), wi = z.imag(), pr = 1.0, pi = 0.0;
    jet_many(&wr, &wi, &pr, &pi, 1);
    return {{wr, wi}, {pr, pi}};
  }

  /// In-place jet over arrays: (wr, wi) <- F(w) and (pr, pi) <- (pr, pi) * F'(w).
  /// Unchecked, written without branches so the loop vectorizes.
  void jet_many(double* wr, double* wi, double* pr, double* pi, std::size_t n) const {
    const double rc = rotation_.real();
    const double rs = rotation_.imag();
    const double e = exp_cap_;
    const double shift = 2.0 * expm1_cap_;
    for (std::size_t j = 0; j < n; ++j) {
      const double ur = wr[j] * rc + wi[j] * rs;
      const double ui = wi[j] * rc - wr[j] * rs;
      const double inv_un = 1.0 / (ur * ur + ui * ui);
      const double vr = ur * inv_un;
      const double vi = -ui * inv_un;
      const double zr = e * (ur + vr) + shift;
      const double zi = e * (ui + vi);
      // root = sqrt((zeta - 2)(zeta + 2)) = w - 1/w on the branch |w| >= 1
      const double dr = (zr - 2.0) * (zr + 2.0) - zi * zi;
      const double di = 2.0 * zr * zi;
      const double m = std::sqrt(dr * dr + di * di);
      const double x = std::sqrt(0.5 * (m + std::abs(dr)));
      const double y = di / (2.0 * x);
      double sr = dr >= 0.0 ? x : std::abs(y);
      double si = dr >= 0.0 ? y : std::copysign(x, di);
      const double flip = sr * zr + si * zi < 0.0 ? -1.0 : 1.0;
      sr *= flip;
      si *= flip;
      const double ar = 0.5 * (zr + sr);
      const double ai = 0.5 * (zi + si);
      // F' = e (1 - u^{-2})/(1 - w^{-2}) = e (u - 1/u) w / (u root)
      const double gr = ur - vr;
      const double gi = ui - vi;
      const double nr = e * (gr * ar - gi * ai);
      const double ni = e * (gr * ai + gi * ar);
      const double hr = ur * sr - ui * si;
      const double hi = ur * si + ui * sr;
      const double inv_hn = 1.0 / (hr * hr + hi * hi);
      const double fr = (nr * hr + ni * hi) * inv_hn;
      const double fi = (ni * hr - nr * hi) * inv_hn;
      const double tr = pr[j] * fr - pi[j] * fi;
      pi[j] = pr[j] * fi + pi[j] * fr;
      pr[j] = tr;
      wr[j] = rc * ar - rs * ai;
      wi[j] = rc * ai + rs * ar;
    }
  }

  /// Unchecked value only.
  cplx value(cplx z) const {
    const cplx u = mul_conj(z, rotation_);
    return mul(rotation_, branch(exp_cap_ * (u + reciprocal(u)) + 2.0 * expm1_cap_));
  }

 private:
  // Plain complex arithmetic: the operands stay far from overflow, so the
  // inf/nan recovery of the library operators is not needed on this hot path.
  static cplx mul_conj(cplx a, cplx b) {
    return {a.real() * b.real() + a.imag() * b.imag(), a.imag() * b.real() - a.real() * b.imag()};
  }
  static cplx reciprocal(cplx a) {
    const double n = a.real() * a.real() + a.imag() * a.imag();
    return {a.real() / n, -a.imag() / n};
  }
  static cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
  }
  static cplx square(cplx a) {
    return {a.real() * a.real() - a.imag() * a.imag(), 2.0 * a.real() * a.imag()};
  }
  // J^{-1}(zeta) = (zeta + sqrt(zeta^2 - 4))/2 on the branch with |w| >= 1.
  static cplx branch(cplx zeta) {
    const cplx d = mul(zeta - 2.0, zeta + 2.0);
    const double m = std::sqrt(d.real() * d.real() + d.imag() * d.imag());
    const double x = std::sqrt(0.5 * (m + std::abs(d.real())));
    cplx root;
    if (x == 0.0) {
      root = 0.0;
    } else if (d.real() >= 0.0) {
      root = {x, d.imag() / (2.0 * x)};
    } else {
      root = {std::abs(d.imag()) / (2.0 * x), std::copysign(x, d.imag())};
    }
    if (root.real() * zeta.real() + root.imag() * zeta.imag() < 0.0) root = -root;
    return 0.5 * (zeta + root);
  }

  friend ParticleMap build_slit_map(double c, double theta);
  ParticleMap() = default;

  double capacity_ = 0.0;
  double angle_ = 0.0;
  double slit_height_ = 0.0;
  double exp_cap_ = 1.0;
  double expm1_cap_ = 0.0;
  cplx rotation_{1.0, 0.0};
};

/// Slit particle of capacity c attached at angle theta (reduced to [0, 2pi)).
/// Throws ConfigError unless 0 < c <= ParticleMap::kMaxCapacity.
ParticleMap build_slit_map(double c, double theta);

/// Slit height delta(c), read off the constructed map as |F_c(1)| - 1.
double slit_height(double c);

/// Inverse of slit_height by bisection (absolute tolerance 1e-10 in c).
double slit_capacity_for_height(double delta);

/// Free functions mirroring the member operations.
inline cplx particle_eval(const ParticleMap& p, cplx z) { return p.eval(z); }
inline cplx particle_deriv(const ParticleMap& p, cplx z) { return p.deriv(z); }

}  // namespace ale::conformal
