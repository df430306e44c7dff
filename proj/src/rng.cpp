#include "lsgan/rng.hpp"

#include <cmath>
#include <numbers>

namespace lsgan {

double BoxMuller::next(Pcg32& rng) {
  if (has_spare) {
    has_spare = false;
    return spare;
  }
  double u1 = rng.uniform01();
  double u2 = rng.uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare = r * std::sin(theta);
  has_spare = true;
  return r * std::cos(theta);
}

}  // namespace lsgan
