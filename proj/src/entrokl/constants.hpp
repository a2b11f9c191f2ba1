#pragma once

#include <cmath>

namespace entrokl {

// Euler-Mascheroni constant, stored to more digits than a double can hold.
inline constexpr double kEulerGamma = 0.57721566490153286060651209;

// exp(euler_gamma), derived at load time so the identity holds to full
// working precision.
inline const double kGammaTilde = std::exp(kEulerGamma);

struct MathConstants {
  double euler_gamma;
  double gamma_tilde;
};

inline MathConstants math_constants() { return {kEulerGamma, kGammaTilde}; }

// Lebesgue volume of the unit Euclidean ball in dimension d, computed via
// log-Gamma. Throws std::invalid_argument for d < 1.
double unit_ball_volume(int dim);

// The convex gauge: 0 on [0,1), t*log(t) on [1,inf).
// Rejects negative or non-finite input.
double g_function(double t);

}  // namespace entrokl
