#include "lsgan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lsgan/autodiff.hpp"
#include "lsgan/error.hpp"

namespace lsgan {

void GridSpec::validate() const {
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw ConfigError("grid: empty extent");
  }
  if (resolution < 1) {
    throw ConfigError("grid: resolution must be >= 1 (got " +
                      std::to_string(resolution) + ")");
  }
}

double DensityGrid::max_value() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

DensityGrid kde2d(const Matrix& samples, double bandwidth, const GridSpec& spec) {
  spec.validate();
  if (samples.rows() < 1 || samples.cols() != 2) {
    throw ConfigError("kde2d: need at least one 2D sample, got shape " +
                      samples.shape_str());
  }
  if (!(bandwidth > 0.0)) {
    throw ConfigError("kde2d: bandwidth must be positive");
  }
  DensityGrid grid;
  grid.spec = spec;
  grid.values.assign(static_cast<std::size_t>(spec.resolution) * spec.resolution, 0.0);
  double inv_two_h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  double norm =
      1.0 / (samples.rows() * 2.0 * std::numbers::pi * bandwidth * bandwidth);
  for (int iy = 0; iy < spec.resolution; ++iy) {
    double gy = spec.y_at(iy);
    for (int ix = 0; ix < spec.resolution; ++ix) {
      double gx = spec.x_at(ix);
      double acc = 0.0;
      for (int i = 0; i < samples.rows(); ++i) {
        double dx = gx - samples.at(i, 0);
        double dy = gy - samples.at(i, 1);
        acc += std::exp(-(dx * dx + dy * dy) * inv_two_h2);
      }
      grid.at(iy, ix) = norm * acc;
    }
  }
  return grid;
}

double silverman_bandwidth(const Matrix& samples) {
  if (samples.rows() < 2 || samples.cols() != 2) {
    throw ConfigError("silverman_bandwidth: need >= 2 2D samples");
  }
  // h = n^(-1/6) * mean of per-axis std devs (d = 2 rule of thumb)
  double n = samples.rows();
  double h = 0.0;
  for (int c = 0; c < 2; ++c) {
    double mean = 0.0;
    for (int i = 0; i < samples.rows(); ++i) mean += samples.at(i, c);
    mean /= n;
    double var = 0.0;
    for (int i = 0; i < samples.rows(); ++i) {
      double d = samples.at(i, c) - mean;
      var += d * d;
    }
    h += std::sqrt(var / (n - 1));
  }
  return 0.5 * h * std::pow(n, -1.0 / 6.0);
}

ModeStats mode_stats(const Matrix& samples, const RingMixture& mix,
                     double dist_threshold, int min_count) {
  mix.validate();
  if (!(dist_threshold > 0.0) || min_count < 1) {
    throw ConfigError("mode_stats: thresholds must be positive");
  }
  if (samples.cols() != 2 && samples.rows() > 0) {
    throw ConfigError("mode_stats: samples must be n x 2, got " + samples.shape_str());
  }
  ModeStats stats;
  stats.per_mode_counts.assign(mix.num_modes, 0);
  int hq = 0;
  for (int i = 0; i < samples.rows(); ++i) {
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < mix.num_modes; ++k) {
      auto c = mix.center(k);
      double dx = samples.at(i, 0) - c[0];
      double dy = samples.at(i, 1) - c[1];
      double d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {  // strict: ties stay with the lowest index
        best_d2 = d2;
        best = k;
      }
    }
    if (std::sqrt(best_d2) <= dist_threshold) {
      ++stats.per_mode_counts[best];
      ++hq;
    }
  }
  for (int count : stats.per_mode_counts) {
    if (count >= min_count) ++stats.modes_covered;
  }
  stats.high_quality_fraction =
      samples.rows() > 0 ? static_cast<double>(hq) / samples.rows() : 0.0;
  return stats;
}

std::vector<double> saturation_probe(LossFamily family, const std::vector<double>& w,
                                     const std::vector<double>& distances) {
  if (w.empty()) throw ConfigError("saturation_probe: empty direction");
  std::vector<double> norms;
  norms.reserve(distances.size());
  int dim = static_cast<int>(w.size());
  Matrix w_col(dim, 1);
  for (int i = 0; i < dim; ++i) w_col.at(i, 0) = w[i];
  for (double d : distances) {
    Graph g;
    Matrix point(1, dim);
    for (int i = 0; i < dim; ++i) point.at(0, i) = d * w[i];
    NodeId x = g.param(point);
    NodeId score = g.matmul(x, g.input(w_col));
    NodeId loss;
    if (family == LossFamily::least_squares) {
      loss = ls_g_loss(g, score, 1.0);
    } else {
      loss = ce_g_loss(g, g.sigmoid(score), CeVariant::non_saturating);
    }
    auto grads = g.backward(loss);
    norms.push_back(frobenius_norm(grads.at(x)));
  }
  return norms;
}

}  // namespace lsgan
