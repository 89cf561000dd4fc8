#pragma once

#include <string_view>

#include "ale/conformal/laurent.hpp"

namespace ale::limits {

/// Diagonal operators on Laurent coefficients psi(z) = sum_k psi_k z^{-k}.
///   Q:  q(k)  = k (1 - zeta e^{-sigma (k+1)})
///   Q0: q0(k) = (1 - zeta) k             Q1: q1(k) = zeta k (1 - e^{-sigma (k+1)})
///   Q~0: k                               Q~1: |zeta| k e^{-sigma (k+1)}
/// q = q0 + q1 always; for zeta < 0 also q = q~0 + q~1 with both parts nonnegative.
enum class Multiplier { Q, Q0, Q1, QTilde0, QTilde1 };

/// Parses "Q", "Q0", "Q1", "Qtilde0", "Qtilde1" (also "P", "P0", "P1" for the semigroups).
/// Throws ConfigError on anything else.
Multiplier parse_multiplier(std::string_view name);
std::string_view multiplier_name(Multiplier m);

/// Multiplier value for mode k >= -1.
double multiplier_q(int k, double zeta, double sigma, Multiplier variant = Multiplier::Q);

/// P(delta) = e^{-delta Q_variant}: coeffs[k] *= e^{-delta q_variant(k)}. Requires delta >= 0.
conformal::LaurentSeries apply_semigroup(const conformal::LaurentSeries& series, double delta, double zeta,
                                         double sigma, Multiplier variant = Multiplier::Q);

/// Scan k = 1..k_max and return the largest k with q(k) < 0, or -1 if none.
/// For zeta > 1 the unstable band is 1 <= k < log(zeta)/sigma - 1.
int last_unstable_mode(double zeta, double sigma, int k_max = 100000);
/// Smallest k >= 1 with q(k) < 0, or -1 if none up to k_max.
int first_unstable_mode(double zeta, double sigma, int k_max = 100000);

}  // namespace ale::limits
