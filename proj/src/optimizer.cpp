#include "lsgan/optimizer.hpp"

#include <cmath>
#include <string>

#include "lsgan/error.hpp"

namespace lsgan {

void OptimizerConfig::validate() const {
  if (kind == OptimizerKind::adam) {
    if (!(adam.lr > 0.0)) throw ConfigError("optimizer.lr must be positive");
    if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0))
      throw ConfigError("optimizer.beta1 must be in [0,1)");
    if (!(adam.beta2 >= 0.0 && adam.beta2 < 1.0))
      throw ConfigError("optimizer.beta2 must be in [0,1)");
    if (!(adam.eps > 0.0)) throw ConfigError("optimizer.eps must be positive");
  } else {
    if (!(rmsprop.lr > 0.0)) throw ConfigError("optimizer.lr must be positive");
    if (!(rmsprop.decay >= 0.0 && rmsprop.decay < 1.0))
      throw ConfigError("optimizer.decay must be in [0,1)");
    if (!(rmsprop.eps > 0.0)) throw ConfigError("optimizer.eps must be positive");
  }
}

namespace {

void check_shapes(const std::vector<Matrix>& state, std::span<Matrix* const> params,
                  std::span<const Matrix* const> grads, const char* who) {
  if (params.size() != grads.size() || params.size() != state.size()) {
    throw ShapeError(std::string(who) + ": parameter/gradient/state counts differ");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->same_shape(*grads[i]) || !params[i]->same_shape(state[i])) {
      throw ShapeError(std::string(who) + ": shape mismatch on parameter " +
                       std::to_string(i) + " (param " + params[i]->shape_str() +
                       ", grad " + grads[i]->shape_str() + ")");
    }
  }
}

void init_like(std::vector<Matrix>& state, std::span<Matrix* const> params) {
  if (!state.empty()) return;
  state.reserve(params.size());
  for (const Matrix* p : params) state.emplace_back(p->rows(), p->cols());
}

}  // namespace

void adam_step(AdamState& state, std::span<Matrix* const> params,
               std::span<const Matrix* const> grads, const AdamConfig& cfg) {
  init_like(state.m, params);
  init_like(state.v, params);
  check_shapes(state.m, params, grads, "adam_step");
  state.step += 1;
  double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& p = *params[i];
    const Matrix& g = *grads[i];
    Matrix& m = state.m[i];
    Matrix& v = state.v[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * g[k];
      v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * g[k] * g[k];
      double m_hat = m[k] / bc1;
      double v_hat = v[k] / bc2;
      p[k] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
  }
}

void rmsprop_step(RmsPropState& state, std::span<Matrix* const> params,
                  std::span<const Matrix* const> grads, const RmsPropConfig& cfg) {
  init_like(state.mean_square, params);
  check_shapes(state.mean_square, params, grads, "rmsprop_step");
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& p = *params[i];
    const Matrix& g = *grads[i];
    Matrix& ms = state.mean_square[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      ms[k] = cfg.decay * ms[k] + (1.0 - cfg.decay) * g[k] * g[k];
      p[k] -= cfg.lr * g[k] / (std::sqrt(ms[k]) + cfg.eps);
    }
  }
}

void Optimizer::step(std::span<Matrix* const> params,
                     std::span<const Matrix* const> grads) {
  if (cfg_.kind == OptimizerKind::adam) {
    adam_step(adam_, params, grads, cfg_.adam);
  } else {
    rmsprop_step(rms_, params, grads, cfg_.rmsprop);
  }
}

}  // namespace lsgan
