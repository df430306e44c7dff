#pragma once

#include <optional>

#include "lsgan/autodiff.hpp"

namespace lsgan {

enum class LossFamily { least_squares, sigmoid_ce };
enum class CeVariant { minimax, non_saturating };

struct CodingCheck {
  bool chi2 = false;         // b - c = 1 and b - a = 2
  bool real_target = false;  // c = b
};

CodingCheck validate_coding(double a, double b, double c);

/// Adversarial loss family plus its coding constants. a labels fake data, b
/// real data, c is the value G drives fake scores toward.
struct LossSpec {
  LossFamily family = LossFamily::least_squares;
  double a = 0.0;
  double b = 1.0;
  double c = 1.0;
  CeVariant ce_variant = CeVariant::non_saturating;
  bool symmetric_g = false;  // add the real-data term to G's loss

  CodingCheck coding() const { return validate_coding(a, b, c); }
  void validate() const;  // least_squares requires a < b
};

/// 1/2 mean((real - b)^2) + 1/2 mean((fake - a)^2)
NodeId ls_d_loss(Graph& g, NodeId real_scores, NodeId fake_scores, double a, double b);

/// 1/2 mean((fake - c)^2), plus 1/2 mean((real - c)^2) when real_scores is
/// given. The real term is detached: its value enters the loss, no gradient
/// flows through it, so enabling it cannot change any parameter update.
NodeId ls_g_loss(Graph& g, NodeId fake_scores, double c,
                 std::optional<NodeId> real_scores = std::nullopt);

/// -mean(log real) - mean(log(1 - fake)); operands are probabilities in (0,1).
NodeId ce_d_loss(Graph& g, NodeId real_probs, NodeId fake_probs);

/// minimax: mean(log(1 - fake)); non_saturating: -mean(log fake).
NodeId ce_g_loss(Graph& g, NodeId fake_probs, CeVariant variant);

/// Family dispatch used by the trainer. For sigmoid_ce the score nodes must
/// be probabilities (sigmoid discriminator head). Rejects a symmetric_g spec
/// without real scores.
NodeId d_loss_from_spec(Graph& g, const LossSpec& spec, NodeId real, NodeId fake);
NodeId g_loss_from_spec(Graph& g, const LossSpec& spec, NodeId fake,
                        std::optional<NodeId> real = std::nullopt);

}  // namespace lsgan
