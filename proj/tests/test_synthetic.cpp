#include <cmath>
#include <doctest.h>
#include <numbers>

#include "lsgan/error.hpp"
#include "lsgan/synthetic.hpp"

using namespace lsgan;

TEST_CASE("sample_mixture") {
  SUBCASE("sigma zero degenerates to the mode centers") {
    RingMixture mix{8, 2.0, 0.0};
    LabeledSamples s = sample_mixture(mix, 100, 5);
    for (int i = 0; i < 100; ++i) {
      auto c = mix.center(s.labels[i]);
      CHECK(s.points.at(i, 0) == c[0]);
      CHECK(s.points.at(i, 1) == c[1]);
    }
  }
  SUBCASE("labels are uniform within binomial bounds") {
    RingMixture mix;
    LabeledSamples s = sample_mixture(mix, 8000, 7);
    std::vector<int> counts(8, 0);
    for (int l : s.labels) counts[l]++;
    double expected = 1000.0;
    double sigma = std::sqrt(8000.0 * (1.0 / 8.0) * (7.0 / 8.0));
    for (int k = 0; k < 8; ++k) {
      CHECK(std::abs(counts[k] - expected) <= 5.0 * sigma);
    }
  }
  SUBCASE("seeded determinism") {
    RingMixture mix;
    LabeledSamples a = sample_mixture(mix, 500, 11);
    LabeledSamples b = sample_mixture(mix, 500, 11);
    CHECK(a.points == b.points);
    CHECK(a.labels == b.labels);
    LabeledSamples c = sample_mixture(mix, 500, 12);
    CHECK_FALSE(a.points == c.points);
  }
  SUBCASE("invalid arguments") {
    RingMixture mix;
    CHECK_THROWS_AS(sample_mixture(mix, 0, 1), ConfigError);
    RingMixture crowded{8, 0.1, 0.05};  // separation 0.076 < 6 sigma
    CHECK_THROWS_AS(sample_mixture(crowded, 10, 1), ConfigError);
  }
}

TEST_CASE("sample_latent") {
  SUBCASE("uniform entries stay in [-1, 1]") {
    Matrix z = sample_latent(1000, 4, LatentKind::uniform, 3);
    for (std::size_t i = 0; i < z.size(); ++i) {
      CHECK(z[i] >= -1.0);
      CHECK(z[i] <= 1.0);
    }
  }
  SUBCASE("gaussian sample mean is near zero") {
    Matrix z = sample_latent(100000, 2, LatentKind::gaussian, 9);
    for (int c = 0; c < 2; ++c) {
      double mean = 0.0;
      for (int i = 0; i < z.rows(); ++i) mean += z.at(i, c);
      mean /= z.rows();
      CHECK(std::abs(mean) <= 0.02);
    }
  }
  SUBCASE("seeded determinism") {
    CHECK(sample_latent(64, 16, LatentKind::gaussian, 21) ==
          sample_latent(64, 16, LatentKind::gaussian, 21));
  }
  SUBCASE("latent and data streams are independent") {
    // same seed, different purposes: the draws must differ
    Matrix z = sample_latent(4, 2, LatentKind::gaussian, 33);
    LabeledSamples s = sample_mixture(RingMixture{8, 2.0, 1e-3}, 4, 33);
    CHECK_FALSE(z == s.points);
  }
}

TEST_CASE("true_density") {
  RingMixture mix{8, 2.0, 0.05};
  SUBCASE("value at a mode center") {
    auto c = mix.center(0);
    double d = true_density(mix, c[0], c[1]);
    double single_mode = 1.0 / (8.0 * 2.0 * std::numbers::pi * 0.05 * 0.05);
    CHECK(d == doctest::Approx(7.9577).epsilon(1e-4));
    CHECK(d >= single_mode);
  }
  SUBCASE("non-negative everywhere") {
    Pcg32 rng(3, 4);
    for (int i = 0; i < 200; ++i) {
      double x = 6.0 * rng.uniform_pm1();
      double y = 6.0 * rng.uniform_pm1();
      CHECK(true_density(mix, x, y) >= 0.0);
    }
  }
  SUBCASE("invariant under rotation by one mode spacing") {
    double angle = 2.0 * std::numbers::pi / mix.num_modes;
    double ca = std::cos(angle), sa = std::sin(angle);
    Pcg32 rng(5, 4);
    for (int i = 0; i < 100; ++i) {
      double x = 3.0 * rng.uniform_pm1();
      double y = 3.0 * rng.uniform_pm1();
      double rotated = true_density(mix, ca * x - sa * y, sa * x + ca * y);
      CHECK(std::abs(rotated - true_density(mix, x, y)) <= 1e-9);
    }
  }
  SUBCASE("degenerate sigma rejected") {
    RingMixture flat{8, 2.0, 0.0};
    CHECK_THROWS_AS(true_density(flat, 0.0, 0.0), ConfigError);
  }
}
