#pragma once

#include <vector>

#include "lsgan/losses.hpp"
#include "lsgan/matrix.hpp"
#include "lsgan/synthetic.hpp"

namespace lsgan {

struct GridSpec {
  double x_min = -3.0;
  double x_max = 3.0;
  double y_min = -3.0;
  double y_max = 3.0;
  int resolution = 128;  // cells per axis

  void validate() const;
  double cell_dx() const { return (x_max - x_min) / resolution; }
  double cell_dy() const { return (y_max - y_min) / resolution; }
  /// Cell-center coordinates.
  double x_at(int ix) const { return x_min + (ix + 0.5) * cell_dx(); }
  double y_at(int iy) const { return y_min + (iy + 0.5) * cell_dy(); }
};

/// Density values at cell centers, row-major with y as the row index.
struct DensityGrid {
  GridSpec spec;
  std::vector<double> values;  // values[iy * resolution + ix]

  double at(int iy, int ix) const { return values[static_cast<std::size_t>(iy) * spec.resolution + ix]; }
  double& at(int iy, int ix) { return values[static_cast<std::size_t>(iy) * spec.resolution + ix]; }
  double max_value() const;
};

/// Gaussian KDE: value(g) = (1/(n 2 pi h^2)) sum_i exp(-|g - s_i|^2 / (2 h^2)).
DensityGrid kde2d(const Matrix& samples, double bandwidth, const GridSpec& spec);

/// Silverman's rule-of-thumb bandwidth for 2D data.
double silverman_bandwidth(const Matrix& samples);

struct ModeStats {
  int modes_covered = 0;
  double high_quality_fraction = 0.0;
  std::vector<int> per_mode_counts;  // high-quality samples per mode
};

/// Assigns each sample to its nearest mode center (ties to the lowest index);
/// a sample is high-quality when that distance is <= dist_threshold, and a
/// mode counts as covered when it holds >= min_count high-quality samples.
ModeStats mode_stats(const Matrix& samples, const RingMixture& mix,
                     double dist_threshold, int min_count);

/// Default coverage thresholds: distance 3 sigma, and a mode must receive at
/// least 10% of its fair share of samples.
inline double default_dist_threshold(const RingMixture& mix) { return 3.0 * mix.sigma; }
inline int default_min_count(int n, int num_modes) {
  int fair = n / (10 * num_modes);
  return fair > 1 ? fair : 1;
}

/// Gradient-magnitude probe of the generator update against a frozen linear
/// discriminator s(x) = w.x. For each distance d the probe places a fake
/// sample at x = d*w (the real side of the boundary) and reports
/// ||dL_G/dx||: least-squares uses 1/2 (s-c)^2 with c = 1 on the raw score,
/// sigmoid_ce the non-saturating loss through a sigmoid.
std::vector<double> saturation_probe(LossFamily family, const std::vector<double>& w,
                                     const std::vector<double>& distances);

}  // namespace lsgan
