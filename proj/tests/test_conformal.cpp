#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "ale/conformal/cluster.hpp"
#include "ale/conformal/laurent.hpp"
#include "ale/conformal/particle.hpp"
#include "ale/errors.hpp"
#include "ale/rng.hpp"

using namespace ale;
using namespace ale::conformal;
using ale::testing::loewner_slit;

namespace {

constexpr double kPi = std::numbers::pi;

ClusterMap random_cluster(std::size_t n, double c, std::uint64_t seed) {
  Philox4x32 rng(seed);
  ClusterMap phi;
  for (std::size_t i = 0; i < n; ++i) phi.append(build_slit_map(c, 2.0 * kPi * uniform01(rng)));
  return phi;
}

}  // namespace

TEST_CASE("slit map agrees with the integrated Loewner flow") {
  for (double c : {1e-4, 1e-2, 0.3}) {
    const auto p = build_slit_map(c, 0.0);
    for (cplx z : {cplx(1.5, 0.0), cplx(0.0, 2.0), std::polar(1.05, 2.0), std::polar(3.0, -0.7), cplx(-1.2, 0.1)}) {
      const cplx ref = loewner_slit(c, z);
      CHECK(std::abs(p.eval(z) - ref) <= 1e-9 * std::abs(ref));
    }
  }
}

TEST_CASE("slit map capacity is read off the z^1 coefficient") {
  for (double c : {1e-5, 1e-3, 0.1, 1.0}) {
    const auto p = build_slit_map(c, 0.7);
    const std::size_t m = 256;
    cplx mean = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const cplx z = std::polar(4.0, 2.0 * kPi * j / m);
      mean += p.eval(z) / z;
    }
    mean /= static_cast<double>(m);
    CHECK(std::abs(std::log(mean) - c) <= 1e-10);
  }
}

TEST_CASE("slit map maps the exterior into the exterior and respects symmetry") {
  const auto p = build_slit_map(1e-2, 0.0);
  for (double r : {1.0 + 1e-6, 1.001, 1.2, 5.0}) {
    for (int j = 0; j < 360; ++j) {
      const cplx z = std::polar(r, 2.0 * kPi * j / 360.0);
      CHECK(std::abs(p.eval(z)) > 1.0);
      CHECK(std::abs(p.eval(std::conj(z)) - std::conj(p.eval(z))) <= 1e-14 * std::abs(p.eval(z)));
    }
  }
}

TEST_CASE("the short boundary arc around the attachment point lands on the slit") {
  const double c = 1e-2;
  const auto p = build_slit_map(c, 0.0);
  const double delta = p.slit_height();
  for (double phi : {-0.15, -0.05, 0.0, 0.05, 0.15}) {
    const cplx w = p.value(std::polar(1.0, phi));
    CHECK(std::abs(std::arg(w)) <= 1e-7);
    CHECK(std::abs(w) >= 1.0 - 1e-12);
    CHECK(std::abs(w) <= 1.0 + delta + 1e-12);
  }
  CHECK(std::abs(p.value(1.0)) == doctest::Approx(1.0 + delta).epsilon(1e-14));
}

TEST_CASE("slit height scales like the square root of capacity") {
  for (double c : {1e-5, 1e-4, 1e-3, 1e-2}) {
    const double d = slit_height(c);
    CHECK(d * d / c >= 1.0 / 8.0);
    CHECK(d * d / c <= 8.0);
    // closed form of the tip position of the Joukowski-conjugated flow
    CHECK(std::exp(c) == doctest::Approx((2.0 + d) * (2.0 + d) / (4.0 * (1.0 + d))).epsilon(1e-12));
  }
}

TEST_CASE("slit calibration inverts the height") {
  for (double c : {1e-5, 1e-3, 0.2}) {
    CHECK(std::abs(slit_capacity_for_height(slit_height(c)) - c) <= 1e-10);
  }
}

TEST_CASE("capacity outside (0, 1] is rejected") {
  CHECK_THROWS_AS(build_slit_map(0.0, 0.0), ConfigError);
  CHECK_THROWS_AS(build_slit_map(-1e-3, 0.0), ConfigError);
  CHECK_THROWS_AS(build_slit_map(1.5, 0.0), ConfigError);
  CHECK_NOTHROW(build_slit_map(1.0, 0.0));
}

TEST_CASE("particle_eval examples") {
  double prev = 1e300;
  for (double c : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
    const auto p = build_slit_map(c, 0.0);
    const double gap = std::abs(p.eval(2.0) - 2.0);
    CHECK(gap < prev);
    prev = gap;
    for (int j = 0; j < 64; ++j) {
      for (double r : {2.0, 3.0, 10.0}) {
        const cplx z = std::polar(r, 2.0 * kPi * j / 64.0);
        CHECK(std::abs(p.eval(z) - std::exp(c) * z) <= 2.0 * p.slit_height());
      }
    }
  }
  for (double c : {1e-3, 0.5}) {
    const auto p0 = build_slit_map(c, 0.0);
    const auto pp = build_slit_map(c, kPi);
    CHECK(std::abs(pp.eval(-2.0) + p0.eval(2.0)) <= 1e-13);
  }
  const auto p = build_slit_map(1e-3, 0.0);
  CHECK_THROWS_AS(p.eval(0.5), DomainError);
  CHECK_THROWS_AS(p.eval(1.0), DomainError);
  CHECK_THROWS_AS(particle_deriv(p, cplx(0.0, 0.9)), DomainError);
}

TEST_CASE("rotation covariance") {
  const double c = 3e-3;
  for (double theta : {0.3, 2.0, 5.9}) {
    const auto pr = build_slit_map(c, theta);
    const auto p0 = build_slit_map(c, 0.0);
    const cplx rot = std::polar(1.0, theta);
    for (cplx z : {cplx(1.3, 0.2), cplx(-2.0, 0.5), cplx(0.0, -1.01)}) {
      CHECK(std::abs(pr.eval(z) - rot * p0.eval(std::conj(rot) * z)) <= 1e-14 * std::abs(z) * 4);
      CHECK(std::abs(pr.deriv(z) - p0.deriv(std::conj(rot) * z)) <= 1e-12);
    }
  }
}

TEST_CASE("particle_deriv matches finite differences and the value at infinity") {
  const auto big = build_slit_map(1e-3, 0.0);
  CHECK(std::abs(big.deriv(10.0) - std::exp(1e-3)) / std::exp(1e-3) < 0.01);
  for (double c : {1e-3, 0.2}) {
    for (double theta : {0.0, 1.1}) {
      const auto p = build_slit_map(c, theta);
      for (cplx z : {std::polar(1.5, 0.3), std::polar(1.1, 1.2), cplx(-3.0, 0.4)}) {
        const double h = 1e-6;
        const cplx fd = (p.eval(z + h) - p.eval(z - h)) / (2.0 * h);
        CHECK(std::abs(fd - p.deriv(z)) <= 1e-6 * std::abs(p.deriv(z)));
        const cplx fdi = (p.eval(z + cplx(0, h)) - p.eval(z - cplx(0, h))) / cplx(0.0, 2.0 * h);
        CHECK(std::abs(fdi - p.deriv(z)) <= 1e-6 * std::abs(p.deriv(z)));
      }
    }
  }
}

TEST_CASE("empty and single-particle clusters") {
  ClusterMap empty;
  CHECK(empty.apply(cplx(1.5, 0.5)) == cplx(1.5, 0.5));
  CHECK(empty.deriv(cplx(1.5, 0.5)) == cplx(1.0, 0.0));
  CHECK(empty.schlicht_residual(cplx(2.0, 0.0)) == cplx(0.0, 0.0));
  CHECK(empty.total_capacity() == 0.0);

  const auto p = build_slit_map(1e-2, 0.4);
  ClusterMap one({p});
  const cplx z(1.2, -0.9);
  CHECK(std::abs(one.apply(z) - p.eval(z)) == 0.0);
  CHECK(std::abs(one.deriv(z) - p.deriv(z)) <= 1e-14 * std::abs(p.deriv(z)));
  CHECK_THROWS_AS(one.apply(cplx(0.3, 0.0)), DomainError);
}

TEST_CASE("cluster composition order and symmetry") {
  const auto a = build_slit_map(1e-2, 0.3);
  const auto b = build_slit_map(2e-2, 2.0);
  ClusterMap ab({a, b});
  const cplx z(1.4, 0.8);
  CHECK(std::abs(ab.apply(z) - a.eval(b.eval(z))) <= 1e-15 * std::abs(z) * 4);

  // The pair at 0 and pi is only mirror-symmetric up to the composition order:
  // reflecting in the imaginary axis swaps which slit is attached first.
  for (double c : {1e-3, 1e-2}) {
    ClusterMap fwd({build_slit_map(c, 0.0), build_slit_map(c, kPi)});
    ClusterMap rev({build_slit_map(c, kPi), build_slit_map(c, 0.0)});
    for (cplx w : {cplx(0.0, 2.0), cplx(0.7, 1.1), cplx(-1.5, -0.2)}) {
      CHECK(std::abs(fwd.apply(-std::conj(w)) + std::conj(rev.apply(w))) <= 1e-14);
    }
    CHECK(std::abs(fwd.apply(cplx(0.0, 2.0)).real()) <= std::pow(c, 1.5));
  }
}

TEST_CASE("total capacity is additive") {
  const auto phi = random_cluster(1000, 1e-3, 7);
  CHECK(std::abs(phi.total_capacity() - 1.0) <= 1e-12);
  const auto half = phi.prefix(500);
  CHECK(half.size() == 500);
  CHECK(std::abs(half.total_capacity() - 0.5) <= 1e-12);
}

TEST_CASE("cluster derivative matches finite differences") {
  const auto phi = random_cluster(100, 1e-3, 11);
  const cplx z = std::exp(cplx(0.1, 0.2));
  const double h = 1e-6;
  const cplx fd = (phi.apply(z + h) - phi.apply(z - h)) / (2.0 * h);
  CHECK(std::abs(fd - phi.deriv(z)) <= 1e-5 * std::abs(phi.deriv(z)));
  const cplx sd = phi.schlicht_deriv(z);
  CHECK(std::abs(sd - std::exp(-phi.total_capacity()) * phi.deriv(z)) <= 1e-12 * std::abs(sd));
}

TEST_CASE("log-space derivative survives long products") {
  // 20000 particles at one point: |Phi'| near the attachment site spans many orders of magnitude
  ClusterMap phi;
  for (int i = 0; i < 20000; ++i) phi.append(build_slit_map(1e-3, 0.0));
  const auto ld = phi.log_deriv(cplx(-1.5, 0.0));
  CHECK(std::isfinite(ld.log_abs));
  CHECK(ld.log_abs > 0.0);
}

TEST_CASE("normalized derivative obeys the distortion bound") {
  const auto phi = random_cluster(1000, 1e-3, 3);
  for (double r : {1.1, 1.3, 2.0}) {
    for (int j = 0; j < 256; ++j) {
      const cplx z = std::polar(r, 2.0 * kPi * j / 256.0);
      CHECK(std::abs(phi.schlicht_deriv(z) - 1.0) <= 1.0 / (r * r - 1.0));
    }
  }
}

TEST_CASE("schlicht residual is bounded and tends to the constant coefficient") {
  const auto p = build_slit_map(1e-2, 0.0);
  ClusterMap one({p});
  CHECK(std::abs(one.schlicht_residual(2.0)) <= 4.0 * p.slit_height());

  ClusterMap tiny({build_slit_map(1e-6, 0.5), build_slit_map(1e-6, 2.5)});
  const auto series = laurent_coeffs(tiny);
  CHECK(std::abs(tiny.schlicht_residual(cplx(100.0, 0.0)) - series.coeffs[0]) <= 1e-6);
  CHECK(std::abs(tiny.schlicht_residual(cplx(0.0, -100.0)) - series.coeffs[0]) <= 1e-6);
}

TEST_CASE("fft agrees with a direct DFT") {
  Philox4x32 rng(5);
  std::vector<cplx> x(64);
  for (auto& v : x) v = cplx(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
  for (int sign : {-1, 1}) {
    auto y = x;
    fft_in_place(y, sign);
    const auto ref = ale::testing::direct_dft(x, sign);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::abs(y[k] - ref[k]) <= 1e-12);
  }
  std::vector<cplx> bad(12);
  CHECK_THROWS_AS(fft_in_place(bad, 1), ConfigError);
}

TEST_CASE("laurent coefficients of simple clusters") {
  const auto id = laurent_coeffs(ClusterMap{});
  CHECK(id.modes() == 33);
  for (const auto& a : id.coeffs) CHECK(std::abs(a) <= 1e-14);

  for (double c : {1e-3, 1e-4}) {
    ClusterMap one({build_slit_map(c, 0.0)});
    const auto s = laurent_coeffs(one);
    CHECK(std::abs(s.coeffs[0].real() / (2.0 * c) - 1.0) <= 0.1);
    CHECK(std::abs(s.coeffs[0] - 2.0 * (1.0 - std::exp(-c))) <= 1e-12);
  }
  // a_0 - 2c is second order in c
  auto excess = [](double c) {
    ClusterMap one({build_slit_map(c, 0.0)});
    return std::abs(laurent_coeffs(one).coeffs[0] - 2.0 * c) / std::pow(c, 1.5);
  };
  CHECK(excess(1e-5) <= 3.0 * excess(1e-2));
}

TEST_CASE("laurent coefficients rotate with the cluster") {
  const double shift = 0.9;
  Philox4x32 rng(21);
  ClusterMap a, b;
  for (int i = 0; i < 50; ++i) {
    const double th = 2.0 * kPi * uniform01(rng);
    a.append(build_slit_map(1e-3, th));
    b.append(build_slit_map(1e-3, th + shift));
  }
  const auto sa = laurent_coeffs(a);
  const auto sb = laurent_coeffs(b);
  for (std::size_t k = 0; k < sa.modes(); ++k) {
    CHECK(std::abs(sb.coeffs[k] - sa.coeffs[k] * std::polar(1.0, (k + 1.0) * shift)) <= 1e-10);
  }
}

TEST_CASE("resampling a full series reproduces the samples") {
  const auto phi = random_cluster(200, 1e-3, 9);
  const double r = 1.5;
  const std::size_t m = 512, k = 128;
  const auto samples = sample_schlicht_residual(phi, r, m);
  const auto s = laurent_from_samples(samples, r, k);
  CHECK(s.tolerance == doctest::Approx(std::pow(r, -double(m - k)) * r / (r - 1.0)));
  for (std::size_t j = 0; j < m; j += 7) {
    const cplx z = std::polar(r, 2.0 * kPi * j / m);
    CHECK(std::abs(s.eval(z) - samples[j]) <= 1e-12);
  }
}

TEST_CASE("laurent extraction rejects bad grids") {
  std::vector<cplx> s(100);
  CHECK_THROWS_AS(laurent_from_samples(s, 1.5, 10), ConfigError);
  std::vector<cplx> s2(64);
  CHECK_THROWS_AS(laurent_from_samples(s2, 1.5, 32), ConfigError);
  CHECK_THROWS_AS(laurent_from_samples(s2, 1.0, 8), ConfigError);
}

TEST_CASE("boundary trace") {
  const auto circle = boundary_trace(ClusterMap{}, 64, 1.25);
  for (std::size_t j = 0; j < circle.size(); ++j) {
    CHECK(std::abs(circle[j] - std::polar(1.25, 2.0 * kPi * j / 64.0)) <= 1e-14);
  }
  const double c = 1e-2;
  ClusterMap one({build_slit_map(c, 0.0)});
  const auto tr = boundary_trace(one, 1024, 1.0 + 1e-6);
  double mx = 0.0, mn = 1e300;
  for (const auto& w : tr) {
    mx = std::max(mx, std::abs(w));
    mn = std::min(mn, std::abs(w));
  }
  CHECK(mn >= 1.0);
  CHECK(std::abs(mx / (1.0 + slit_height(c)) - 1.0) <= 0.01);
  CHECK_THROWS_AS(boundary_trace(one, 64, 1.0 + 1e-9), ConfigError);
  CHECK_THROWS_AS(boundary_trace(one, 8, 1.5), ConfigError);
}
