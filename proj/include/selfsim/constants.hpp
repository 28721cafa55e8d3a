#pragma once

#include <cmath>

namespace selfsim::constants {

// Real root of X^3 + X^2 + X - 2.
inline constexpr double kEta = 0.8105357137661367;
inline constexpr double kLambda0 = 2.0 / kEta;
inline const double kAlpha0 = std::log(2.0) / std::log(kLambda0);

// A(n, w) <= kAContract * min_k (eta^k |w| + 2^k). Measured on the exhaustive
// sweep r <= 18, 3 <= n <= 8: worst ratio 1.4232 at |w| = 1 (A = 4).
inline constexpr double kAContract = 1.5;

// |zeta^n(ad)| / (2/eta)^n stays inside this band; observed 1.31 .. 2.0 for n <= 12.
inline constexpr double kZetaBandLo = 1.25;
inline constexpr double kZetaBandHi = 2.0;

// Constant of the volume estimate for diagonal products, calibrated on
// reference_plans() at R = 10: worst log v / upper shape 2.197 (log 9 at
// r = 1), worst log v / lower shape 0.966.
inline constexpr double kMainUpper = 2.5;

}  // namespace selfsim::constants
