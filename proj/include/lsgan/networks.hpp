#pragma once

#include <cstdint>
#include <vector>

#include "lsgan/autodiff.hpp"
#include "lsgan/matrix.hpp"

namespace lsgan {

enum class Activation { relu, leaky_relu, tanh };
enum class OutputHead { linear, sigmoid };

/// Weights and biases of a fully-connected network. Layer i maps size_i ->
/// size_{i+1} with weight shape (size_i, size_{i+1}) and a length-size_{i+1}
/// bias row; hidden layers apply the activation, the last layer the head.
struct MlpParams {
  std::vector<int> layer_sizes;
  std::vector<Matrix> weights;
  std::vector<Matrix> biases;  // 1 x size_{i+1} rows
  Activation hidden_activation = Activation::relu;
  OutputHead output_head = OutputHead::linear;
  std::uint64_t seed = 0;

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
};

/// He-style init: weights ~ Normal(0, sqrt(2/fan_in)) from the seeded PRNG,
/// biases zero. Same seed, same parameters.
MlpParams init_mlp(const std::vector<int>& layer_sizes, Activation hidden_activation,
                   OutputHead output_head, std::uint64_t seed);

/// Graph leaves for one MLP's parameters, in layer order.
struct MlpNodes {
  std::vector<NodeId> weights;
  std::vector<NodeId> biases;
};

/// Registers the parameters as graph leaves (trainable or constant).
MlpNodes register_mlp(Graph& g, const MlpParams& params, bool trainable);

/// Applies the network to `input` (batch x input_size) using existing
/// parameter leaves; returns the head output node.
NodeId mlp_apply(Graph& g, const MlpParams& params, const MlpNodes& nodes,
                 NodeId input);

struct ForwardResult {
  NodeId output;
  MlpNodes nodes;
};

/// G(z): latent batch -> data-space batch. Requires a linear head.
ForwardResult generator_forward(Graph& g, const MlpParams& params, NodeId z,
                                bool trainable = true);
ForwardResult generator_forward(Graph& g, const MlpParams& params, const Matrix& z,
                                bool trainable = true);

/// D(x): data batch -> (batch, 1) scores; sigmoid head yields probabilities.
ForwardResult discriminator_forward(Graph& g, const MlpParams& params, NodeId x,
                                    bool trainable = true);
ForwardResult discriminator_forward(Graph& g, const MlpParams& params, const Matrix& x,
                                    bool trainable = true);

/// Linear label mapping: one-hot rows (num_classes) -> embed rows (embed_dim),
/// no bias.
struct LabelEmbed {
  Matrix mapping;  // (num_classes, embed_dim)
  int num_classes() const { return mapping.rows(); }
  int embed_dim() const { return mapping.cols(); }
};

/// Seeded init; requires embed_dim < num_classes (the point of the mapping).
LabelEmbed init_label_embed(int num_classes, int embed_dim, std::uint64_t seed);

/// One-hot rows from integer labels.
Matrix one_hot(const std::vector<int>& labels, int num_classes);

struct CondTrainability {
  bool generator = true;
  bool discriminator = true;
  bool embed = true;
};

struct ConditionalResult {
  NodeId generated;
  NodeId real_scores;
  NodeId fake_scores;
  MlpNodes g_nodes;
  MlpNodes d_nodes;
  NodeId embed_node;
};

/// Conditional pass: the mapped label block is concatenated onto both G's
/// and D's inputs, and the same mapping leaf feeds all three uses, so its
/// gradient accumulates across them. Rows of y_onehot must be exactly
/// one-hot.
ConditionalResult conditional_forward(Graph& g, const MlpParams& gen,
                                      const MlpParams& disc, const LabelEmbed& embed,
                                      const Matrix& z, const Matrix& x,
                                      const Matrix& y_onehot,
                                      CondTrainability trainability = {});

}  // namespace lsgan
