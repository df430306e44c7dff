#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lsgan/rng.hpp"

namespace lsgan {

/// Probability vector over a finite shared support: entries >= 0, sum 1
/// within 1e-12.
class DiscreteDist {
 public:
  explicit DiscreteDist(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  /// Normalized vector of seeded uniforms with roughly 10% of entries zeroed,
  /// to exercise empty-support points.
  static DiscreteDist random(std::size_t support, Pcg32& rng);

 private:
  std::vector<double> probs_;
};

/// D*(x) = (b p_d + a p_g) / (p_d + p_g) per support point; nullopt marks
/// points where p_d + p_g = 0 (zero measure, the optimum is unconstrained).
std::vector<std::optional<double>> optimal_discriminator(const DiscreteDist& p_d,
                                                         const DiscreteDist& p_g,
                                                         double a, double b);

/// 2C(G) = sum_x [p_d (D*-c)^2 + p_g (D*-c)^2] at the optimal discriminator.
double lsgan_value_at_optimum(const DiscreteDist& p_d, const DiscreteDist& p_g,
                              double a, double b, double c);

/// chi2(p_d + p_g || 2 p_g) = sum_x (2 p_g - (p_d + p_g))^2 / (p_d + p_g).
/// Note the convention: the first argument supplies the denominator.
double pearson_chi2_mix(const DiscreteDist& p_d, const DiscreteDist& p_g);

/// Minimax GAN value at the optimal discriminator p_d / (p_d + p_g);
/// equals 2 JS(p_d || p_g) - log 4.
double gan_value_at_optimum(const DiscreteDist& p_d, const DiscreteDist& p_g);

/// Jensen-Shannon divergence, natural log, in [0, log 2]; 0 log 0 := 0.
double js_divergence(const DiscreteDist& p, const DiscreteDist& q);

}  // namespace lsgan
