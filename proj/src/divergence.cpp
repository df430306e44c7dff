#include "lsgan/divergence.hpp"

#include <cmath>
#include <string>

#include "lsgan/error.hpp"

namespace lsgan {

DiscreteDist::DiscreteDist(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ConfigError("DiscreteDist: empty support");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) {
      throw ConfigError("DiscreteDist: negative entry " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ConfigError("DiscreteDist: entries sum to " + std::to_string(sum));
  }
}

DiscreteDist DiscreteDist::random(std::size_t support, Pcg32& rng) {
  std::vector<double> v(support);
  double sum = 0.0;
  for (double& p : v) {
    p = rng.uniform01();
    if (rng.uniform01() < 0.1) p = 0.0;
    sum += p;
  }
  if (sum == 0.0) {
    v[0] = 1.0;
    sum = 1.0;
  }
  for (double& p : v) p /= sum;
  // renormalize exactly enough for the 1e-12 gate
  double check = 0.0;
  for (double p : v) check += p;
  for (double& p : v) p /= check;
  return DiscreteDist(v);
}

namespace {

void check_same_support(const DiscreteDist& p, const DiscreteDist& q,
                        const char* who) {
  if (p.size() != q.size()) {
    throw ConfigError(std::string(who) + ": support sizes differ (" +
                      std::to_string(p.size()) + " vs " + std::to_string(q.size()) +
                      ")");
  }
}

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

}  // namespace

std::vector<std::optional<double>> optimal_discriminator(const DiscreteDist& p_d,
                                                         const DiscreteDist& p_g,
                                                         double a, double b) {
  check_same_support(p_d, p_g, "optimal_discriminator");
  std::vector<std::optional<double>> scores(p_d.size());
  for (std::size_t i = 0; i < p_d.size(); ++i) {
    double mass = p_d[i] + p_g[i];
    if (mass > 0.0) scores[i] = (b * p_d[i] + a * p_g[i]) / mass;
  }
  return scores;
}

double lsgan_value_at_optimum(const DiscreteDist& p_d, const DiscreteDist& p_g,
                              double a, double b, double c) {
  auto d_star = optimal_discriminator(p_d, p_g, a, b);
  double value = 0.0;
  for (std::size_t i = 0; i < p_d.size(); ++i) {
    if (!d_star[i]) {
      if (p_d[i] + p_g[i] > 0.0) {
        throw ConfigError("lsgan_value_at_optimum: undefined score on a point with mass");
      }
      continue;
    }
    double dev = *d_star[i] - c;
    value += (p_d[i] + p_g[i]) * dev * dev;
  }
  return value;
}

double pearson_chi2_mix(const DiscreteDist& p_d, const DiscreteDist& p_g) {
  check_same_support(p_d, p_g, "pearson_chi2_mix");
  double value = 0.0;
  for (std::size_t i = 0; i < p_d.size(); ++i) {
    double mix = p_d[i] + p_g[i];
    if (mix == 0.0) continue;  // zero measure
    double num = 2.0 * p_g[i] - mix;
    value += num * num / mix;
  }
  return value;
}

double gan_value_at_optimum(const DiscreteDist& p_d, const DiscreteDist& p_g) {
  check_same_support(p_d, p_g, "gan_value_at_optimum");
  double value = 0.0;
  for (std::size_t i = 0; i < p_d.size(); ++i) {
    double mass = p_d[i] + p_g[i];
    if (mass == 0.0) continue;
    double d_star = p_d[i] / mass;
    value += xlogy(p_d[i], d_star) + xlogy(p_g[i], 1.0 - d_star);
  }
  return value;
}

double js_divergence(const DiscreteDist& p, const DiscreteDist& q) {
  check_same_support(p, q, "js_divergence");
  double kl_pm = 0.0, kl_qm = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) kl_pm += p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) kl_qm += q[i] * std::log(q[i] / m);
  }
  return 0.5 * kl_pm + 0.5 * kl_qm;
}

}  // namespace lsgan
