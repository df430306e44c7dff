#include "lsgan/losses.hpp"

#include <string>

#include "lsgan/error.hpp"

namespace lsgan {

CodingCheck validate_coding(double a, double b, double c) {
  CodingCheck r;
  r.chi2 = (b - c == 1.0) && (b - a == 2.0);
  r.real_target = (c == b);
  return r;
}

void LossSpec::validate() const {
  if (family == LossFamily::least_squares && !(a < b)) {
    throw ConfigError("loss: least_squares requires a < b (got a=" +
                      std::to_string(a) + ", b=" + std::to_string(b) + ")");
  }
}

namespace {

void check_nonempty(const Graph& g, NodeId scores, const char* who) {
  if (g.value(scores).size() == 0) {
    throw ConfigError(std::string(who) + ": empty score batch");
  }
}

void check_probs(const Graph& g, NodeId probs, const char* who) {
  check_nonempty(g, probs, who);
  const Matrix& v = g.value(probs);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0 && v[i] < 1.0)) {
      throw ConfigError(std::string(who) + ": probability " + std::to_string(v[i]) +
                        " outside (0,1)");
    }
  }
}

// 1/2 mean((scores - target)^2)
NodeId half_mse(Graph& g, NodeId scores, double target) {
  NodeId diff = g.sub(scores, g.scalar(target));
  return g.mul(g.scalar(0.5), g.mean(g.square(diff)));
}

}  // namespace

NodeId ls_d_loss(Graph& g, NodeId real_scores, NodeId fake_scores, double a, double b) {
  check_nonempty(g, real_scores, "ls_d_loss");
  check_nonempty(g, fake_scores, "ls_d_loss");
  return g.add(half_mse(g, real_scores, b), half_mse(g, fake_scores, a));
}

NodeId ls_g_loss(Graph& g, NodeId fake_scores, double c,
                 std::optional<NodeId> real_scores) {
  check_nonempty(g, fake_scores, "ls_g_loss");
  NodeId loss = half_mse(g, fake_scores, c);
  if (real_scores) {
    check_nonempty(g, *real_scores, "ls_g_loss");
    NodeId detached = g.input(g.value(*real_scores));
    loss = g.add(loss, half_mse(g, detached, c));
  }
  return loss;
}

NodeId ce_d_loss(Graph& g, NodeId real_probs, NodeId fake_probs) {
  check_probs(g, real_probs, "ce_d_loss");
  check_probs(g, fake_probs, "ce_d_loss");
  NodeId real_term = g.mean(g.log(real_probs));
  NodeId fake_term = g.mean(g.log(g.sub(g.scalar(1.0), fake_probs)));
  return g.mul(g.scalar(-1.0), g.add(real_term, fake_term));
}

NodeId ce_g_loss(Graph& g, NodeId fake_probs, CeVariant variant) {
  check_probs(g, fake_probs, "ce_g_loss");
  if (variant == CeVariant::minimax) {
    return g.mean(g.log(g.sub(g.scalar(1.0), fake_probs)));
  }
  return g.mul(g.scalar(-1.0), g.mean(g.log(fake_probs)));
}

NodeId d_loss_from_spec(Graph& g, const LossSpec& spec, NodeId real, NodeId fake) {
  spec.validate();
  if (spec.family == LossFamily::least_squares) {
    return ls_d_loss(g, real, fake, spec.a, spec.b);
  }
  return ce_d_loss(g, real, fake);
}

NodeId g_loss_from_spec(Graph& g, const LossSpec& spec, NodeId fake,
                        std::optional<NodeId> real) {
  spec.validate();
  if (spec.family == LossFamily::least_squares) {
    if (spec.symmetric_g && !real) {
      throw ConfigError("g_loss_from_spec: symmetric_g set but no real scores given");
    }
    return ls_g_loss(g, fake, spec.c,
                     spec.symmetric_g ? real : std::optional<NodeId>{});
  }
  return ce_g_loss(g, fake, spec.ce_variant);
}

}  // namespace lsgan
