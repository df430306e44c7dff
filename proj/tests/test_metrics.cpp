#include <algorithm>
#include <cmath>
#include <doctest.h>
#include <numbers>

#include "lsgan/error.hpp"
#include "lsgan/metrics.hpp"
#include "lsgan/rng.hpp"

using namespace lsgan;

TEST_CASE("kde2d") {
  SUBCASE("single sample at a cell center peaks at 1/(2 pi h^2)") {
    GridSpec spec{-1.0, 1.0, -1.0, 1.0, 4};  // centers at +-0.75, +-0.25
    Matrix sample(1, 2);
    sample.at(0, 0) = 0.25;
    sample.at(0, 1) = 0.25;
    DensityGrid grid = kde2d(sample, 0.1, spec);
    double peak = 1.0 / (2.0 * std::numbers::pi * 0.01);
    CHECK(grid.at(2, 2) == doctest::Approx(peak).epsilon(1e-12));
    CHECK(grid.max_value() == grid.at(2, 2));
  }
  SUBCASE("grid integral is close to one") {
    Pcg32 rng(13, 1);
    Matrix samples = Matrix::uninitialized(200, 2);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = rng.uniform_pm1();
    double h = 0.1;
    GridSpec spec{-1.5, 1.5, -1.5, 1.5, 256};  // covers +-5h past the samples
    DensityGrid grid = kde2d(samples, h, spec);
    double integral = 0.0;
    for (double v : grid.values) integral += v;
    integral *= spec.cell_dx() * spec.cell_dy();
    CHECK(integral == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("translation equivariance is exact on a representable lattice") {
    Matrix samples(3, 2);
    samples.at(0, 0) = 0.25;
    samples.at(0, 1) = -0.5;
    samples.at(1, 0) = -0.75;
    samples.at(1, 1) = 0.125;
    samples.at(2, 0) = 0.0;
    samples.at(2, 1) = 0.5;
    GridSpec spec{-1.0, 1.0, -1.0, 1.0, 8};
    DensityGrid base = kde2d(samples, 0.25, spec);

    double shift = 4.0;
    Matrix moved = samples;
    for (int i = 0; i < moved.rows(); ++i) {
      moved.at(i, 0) += shift;
      moved.at(i, 1) += shift;
    }
    GridSpec moved_spec{-1.0 + shift, 1.0 + shift, -1.0 + shift, 1.0 + shift, 8};
    DensityGrid shifted = kde2d(moved, 0.25, moved_spec);
    CHECK(base.values == shifted.values);
  }
  SUBCASE("permutation invariance within rounding") {
    Pcg32 rng(17, 1);
    Matrix samples = Matrix::uninitialized(50, 2);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = rng.uniform_pm1();
    Matrix reversed = Matrix::uninitialized(50, 2);
    for (int i = 0; i < 50; ++i) {
      reversed.at(i, 0) = samples.at(49 - i, 0);
      reversed.at(i, 1) = samples.at(49 - i, 1);
    }
    GridSpec spec{-1.0, 1.0, -1.0, 1.0, 16};
    DensityGrid a = kde2d(samples, 0.2, spec);
    DensityGrid b = kde2d(reversed, 0.2, spec);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
    }
  }
  SUBCASE("input validation") {
    GridSpec spec;
    CHECK_THROWS_AS(kde2d(Matrix(), 0.1, spec), ConfigError);
    CHECK_THROWS_AS(kde2d(Matrix(3, 2), 0.0, spec), ConfigError);
    CHECK_THROWS_AS(kde2d(Matrix(3, 3), 0.1, spec), ConfigError);
    GridSpec bad{1.0, -1.0, -1.0, 1.0, 8};
    CHECK_THROWS_AS(kde2d(Matrix(3, 2), 0.1, bad), ConfigError);
  }
  SUBCASE("silverman bandwidth is positive and scale-aware") {
    Pcg32 rng(19, 1);
    Matrix samples = Matrix::uninitialized(500, 2);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = rng.uniform_pm1();
    double h = silverman_bandwidth(samples);
    CHECK(h > 0.0);
    Matrix scaled = samples;
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] *= 10.0;
    CHECK(silverman_bandwidth(scaled) == doctest::Approx(10.0 * h).epsilon(1e-12));
  }
}

TEST_CASE("mode_stats") {
  RingMixture mix;  // K=8, radius 2, sigma 0.05
  SUBCASE("the eight centers cover all modes") {
    Matrix pts = Matrix::uninitialized(8, 2);
    for (int k = 0; k < 8; ++k) {
      auto c = mix.center(k);
      pts.at(k, 0) = c[0];
      pts.at(k, 1) = c[1];
    }
    ModeStats s = mode_stats(pts, mix, 3.0 * mix.sigma, 1);
    CHECK(s.modes_covered == 8);
    CHECK(s.high_quality_fraction == 1.0);
  }
  SUBCASE("total collapse counts one mode") {
    auto c = mix.center(3);
    Matrix pts = Matrix::uninitialized(100, 2);
    for (int i = 0; i < 100; ++i) {
      pts.at(i, 0) = c[0];
      pts.at(i, 1) = c[1];
    }
    ModeStats s = mode_stats(pts, mix, 3.0 * mix.sigma, 1);
    CHECK(s.modes_covered == 1);
    CHECK(s.per_mode_counts[3] == 100);
  }
  SUBCASE("true samples are nearly all high quality at the 3-sigma threshold") {
    LabeledSamples data = sample_mixture(mix, 4000, 23);
    ModeStats s = mode_stats(data.points, mix, 3.0 * mix.sigma,
                             default_min_count(4000, 8));
    CHECK(s.high_quality_fraction >= 0.98);
    CHECK(s.modes_covered == 8);
  }
  SUBCASE("permutation invariance and determinism") {
    LabeledSamples data = sample_mixture(mix, 200, 29);
    Matrix reversed = Matrix::uninitialized(200, 2);
    for (int i = 0; i < 200; ++i) {
      reversed.at(i, 0) = data.points.at(199 - i, 0);
      reversed.at(i, 1) = data.points.at(199 - i, 1);
    }
    ModeStats a = mode_stats(data.points, mix, 0.15, 2);
    ModeStats b = mode_stats(reversed, mix, 0.15, 2);
    CHECK(a.modes_covered == b.modes_covered);
    CHECK(a.per_mode_counts == b.per_mode_counts);
    CHECK(a.high_quality_fraction == b.high_quality_fraction);
  }
  SUBCASE("equidistant ties go to the lowest mode index") {
    RingMixture two{2, 1.0, 0.01};
    Matrix origin(1, 2);  // equidistant from both centers
    ModeStats s = mode_stats(origin, two, 2.0, 1);
    CHECK(s.per_mode_counts[0] == 1);
    CHECK(s.per_mode_counts[1] == 0);
  }
  SUBCASE("default min count") {
    CHECK(default_min_count(2048, 8) == 25);
    CHECK(default_min_count(10, 8) == 1);
  }
  SUBCASE("bad thresholds rejected") {
    CHECK_THROWS_AS(mode_stats(Matrix(1, 2), mix, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(mode_stats(Matrix(1, 2), mix, 0.1, 0), ConfigError);
  }
}

TEST_CASE("saturation_probe") {
  std::vector<double> w{1.0, 0.0};
  std::vector<double> distances;
  for (int d = 0; d <= 10; ++d) distances.push_back(d);

  auto ce = saturation_probe(LossFamily::sigmoid_ce, w, distances);
  auto ls = saturation_probe(LossFamily::least_squares, w, distances);

  SUBCASE("ce norms equal sigmoid(-d); vanishing far past the boundary") {
    for (int d = 0; d <= 10; ++d) {
      double expected = 1.0 / (1.0 + std::exp(d));
      CHECK(std::abs(ce[d] - expected) <= 1e-12);
    }
    CHECK(ce[10] == doctest::Approx(4.5398e-5).epsilon(1e-4));
  }
  SUBCASE("ls norms equal |d - 1|; zero only at the target") {
    for (int d = 0; d <= 10; ++d) CHECK(ls[d] == doctest::Approx(std::abs(d - 1.0)));
    CHECK(ls[1] == 0.0);
    CHECK(ls[10] == doctest::Approx(9.0).epsilon(1e-14));
  }
  SUBCASE("monotone: ce strictly decreasing, ls strictly increasing past 1") {
    for (int d = 1; d <= 10; ++d) CHECK(ce[d] < ce[d - 1]);
    for (int d = 2; d <= 10; ++d) CHECK(ls[d] > ls[d - 1]);
  }
  SUBCASE("a tilted unit direction gives the same norms") {
    std::vector<double> tilted{0.6, 0.8};
    auto ls2 = saturation_probe(LossFamily::least_squares, tilted, distances);
    for (int d = 0; d <= 10; ++d) {
      CHECK(ls2[d] == doctest::Approx(std::abs(d - 1.0)).epsilon(1e-12));
    }
  }
  SUBCASE("empty direction rejected") {
    CHECK_THROWS_AS(saturation_probe(LossFamily::least_squares, {}, distances),
                    ConfigError);
  }
}
