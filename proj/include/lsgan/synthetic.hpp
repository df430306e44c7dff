#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lsgan/matrix.hpp"
#include "lsgan/rng.hpp"

namespace lsgan {

/// Equal-weight mixture of K isotropic Gaussians with centers equally spaced
/// on a circle.
struct RingMixture {
  int num_modes = 8;
  double radius = 2.0;
  double sigma = 0.05;

  std::array<double, 2> center(int k) const;
  /// Checks num_modes >= 1, sigma >= 0 and pairwise center separation > 6 sigma.
  void validate() const;
};

struct LabeledSamples {
  Matrix points;  // n x 2
  std::vector<int> labels;
};

/// Mode index uniform over {0..K-1}, point ~ Normal(center_k, sigma^2 I).
/// Label and noise draws interleave on the given stream.
LabeledSamples sample_mixture(const RingMixture& mix, int n, Pcg32& rng, BoxMuller& bm);
LabeledSamples sample_mixture(const RingMixture& mix, int n, std::uint64_t seed);

enum class LatentKind { uniform, gaussian };

/// Uniform in [-1,1]^dim or standard normal, row-major draw order.
Matrix sample_latent(int n, int dim, LatentKind kind, Pcg32& rng, BoxMuller& bm);
Matrix sample_latent(int n, int dim, LatentKind kind, std::uint64_t seed);

/// Mixture pdf (1/K) sum_k N(point; center_k, sigma^2 I); requires sigma > 0.
double true_density(const RingMixture& mix, double x, double y);

}  // namespace lsgan
