#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lsgan/matrix.hpp"

namespace lsgan {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct RmsPropConfig {
  double lr = 0.001;
  double decay = 0.9;
  double eps = 1e-8;
};

enum class OptimizerKind { adam, rmsprop };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  AdamConfig adam;
  RmsPropConfig rmsprop;
  void validate() const;  // lr > 0, betas/decay in [0,1)
};

struct AdamState {
  std::vector<Matrix> m;  // first moments, one per parameter
  std::vector<Matrix> v;  // second moments
  std::int64_t step = 0;
};

struct RmsPropState {
  std::vector<Matrix> mean_square;
};

/// Standard bias-corrected Adam update, eps added outside the square root.
/// Empty state is initialized to zero moments on first use.
void adam_step(AdamState& state, std::span<Matrix* const> params,
               std::span<const Matrix* const> grads, const AdamConfig& cfg);

/// Running mean-square update: ms = decay*ms + (1-decay)*g^2,
/// p -= lr * g / (sqrt(ms) + eps).
void rmsprop_step(RmsPropState& state, std::span<Matrix* const> params,
                  std::span<const Matrix* const> grads, const RmsPropConfig& cfg);

/// Owns the moment buffers for one parameter list and dispatches on kind.
class Optimizer {
 public:
  explicit Optimizer(const OptimizerConfig& cfg) : cfg_(cfg) { cfg.validate(); }

  void step(std::span<Matrix* const> params, std::span<const Matrix* const> grads);

  const OptimizerConfig& config() const { return cfg_; }
  AdamState& adam_state() { return adam_; }
  const AdamState& adam_state() const { return adam_; }
  RmsPropState& rmsprop_state() { return rms_; }
  const RmsPropState& rmsprop_state() const { return rms_; }

 private:
  OptimizerConfig cfg_;
  AdamState adam_;
  RmsPropState rms_;
};

}  // namespace lsgan
