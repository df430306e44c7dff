#include "lsgan/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lsgan/error.hpp"

namespace lsgan {

std::array<double, 2> RingMixture::center(int k) const {
  double angle = 2.0 * std::numbers::pi * k / num_modes;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

void RingMixture::validate() const {
  if (num_modes < 1) {
    throw ConfigError("data.num_modes must be >= 1 (got " +
                      std::to_string(num_modes) + ")");
  }
  if (!(sigma >= 0.0)) {
    throw ConfigError("data.sigma must be >= 0 (got " + std::to_string(sigma) + ")");
  }
  if (num_modes > 1) {
    // adjacent centers are the closest pair on the circle
    double min_dist = 2.0 * radius * std::sin(std::numbers::pi / num_modes);
    if (!(min_dist > 6.0 * sigma)) {
      throw ConfigError("data: mode separation " + std::to_string(min_dist) +
                        " must exceed 6*sigma = " + std::to_string(6.0 * sigma));
    }
  }
}

LabeledSamples sample_mixture(const RingMixture& mix, int n, Pcg32& rng,
                              BoxMuller& bm) {
  mix.validate();
  if (n <= 0) throw ConfigError("sample_mixture: n must be positive");
  LabeledSamples out;
  out.points = Matrix::uninitialized(n, 2);
  out.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    int k = static_cast<int>(rng.below(static_cast<std::uint32_t>(mix.num_modes)));
    auto c = mix.center(k);
    out.labels[i] = k;
    out.points.at(i, 0) = c[0] + mix.sigma * bm.next(rng);
    out.points.at(i, 1) = c[1] + mix.sigma * bm.next(rng);
  }
  return out;
}

LabeledSamples sample_mixture(const RingMixture& mix, int n, std::uint64_t seed) {
  Pcg32 rng = make_stream(seed, StreamPurpose::data);
  BoxMuller bm;
  return sample_mixture(mix, n, rng, bm);
}

Matrix sample_latent(int n, int dim, LatentKind kind, Pcg32& rng, BoxMuller& bm) {
  if (n <= 0 || dim <= 0) throw ConfigError("sample_latent: n and dim must be positive");
  Matrix z = Matrix::uninitialized(n, dim);
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = kind == LatentKind::uniform ? rng.uniform_pm1() : bm.next(rng);
  }
  return z;
}

Matrix sample_latent(int n, int dim, LatentKind kind, std::uint64_t seed) {
  Pcg32 rng = make_stream(seed, StreamPurpose::latent);
  BoxMuller bm;
  return sample_latent(n, dim, kind, rng, bm);
}

double true_density(const RingMixture& mix, double x, double y) {
  mix.validate();
  if (!(mix.sigma > 0.0)) {
    throw ConfigError("true_density: sigma must be positive");
  }
  double inv_two_var = 1.0 / (2.0 * mix.sigma * mix.sigma);
  double norm = 1.0 / (2.0 * std::numbers::pi * mix.sigma * mix.sigma);
  double acc = 0.0;
  for (int k = 0; k < mix.num_modes; ++k) {
    auto c = mix.center(k);
    double dx = x - c[0];
    double dy = y - c[1];
    acc += norm * std::exp(-(dx * dx + dy * dy) * inv_two_var);
  }
  return acc / mix.num_modes;
}

}  // namespace lsgan
