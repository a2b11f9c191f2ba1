#include "entrokl/constants.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace entrokl {

double unit_ball_volume(int dim) {
  if (dim < 1) {
    throw std::invalid_argument("unit_ball_volume: dimension must be >= 1, got " +
                                std::to_string(dim));
  }
  const double d = static_cast<double>(dim);
  return std::exp(0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0));
}

double g_function(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::invalid_argument("g_function: argument must be finite and >= 0");
  }
  if (t < 1.0) return 0.0;
  return t * std::log(t);
}

}  // namespace entrokl
