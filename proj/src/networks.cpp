#include "lsgan/networks.hpp"

#include <cmath>
#include <string>

#include "lsgan/error.hpp"
#include "lsgan/rng.hpp"

namespace lsgan {

MlpParams init_mlp(const std::vector<int>& layer_sizes, Activation hidden_activation,
                   OutputHead output_head, std::uint64_t seed) {
  if (layer_sizes.size() < 2) {
    throw ConfigError("init_mlp: need at least 2 layer sizes, got " +
                      std::to_string(layer_sizes.size()));
  }
  for (int s : layer_sizes) {
    if (s <= 0) {
      throw ConfigError("init_mlp: layer sizes must be positive, got " +
                        std::to_string(s));
    }
  }
  MlpParams p;
  p.layer_sizes = layer_sizes;
  p.hidden_activation = hidden_activation;
  p.output_head = output_head;
  p.seed = seed;
  Pcg32 rng = make_stream(seed, StreamPurpose::weights);
  BoxMuller bm;
  for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
    int fan_in = layer_sizes[i];
    int fan_out = layer_sizes[i + 1];
    double std_dev = std::sqrt(2.0 / fan_in);
    Matrix w(fan_in, fan_out);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = std_dev * bm.next(rng);
    p.weights.push_back(std::move(w));
    p.biases.emplace_back(1, fan_out);
  }
  return p;
}

MlpNodes register_mlp(Graph& g, const MlpParams& params, bool trainable) {
  MlpNodes nodes;
  for (std::size_t i = 0; i < params.weights.size(); ++i) {
    nodes.weights.push_back(trainable ? g.param(params.weights[i])
                                      : g.input(params.weights[i]));
    nodes.biases.push_back(trainable ? g.param(params.biases[i])
                                     : g.input(params.biases[i]));
  }
  return nodes;
}

namespace {

// Row-broadcast of a (1, m) bias onto a (batch, m) block: ones(batch,1) @ bias.
// The graph has no wider-than-scalar broadcast; this keeps the op set small.
NodeId add_bias(Graph& g, NodeId h, NodeId bias_row, int batch) {
  NodeId ones = g.input(Matrix::constant(batch, 1, 1.0));
  return g.add(h, g.matmul(ones, bias_row));
}

NodeId apply_activation(Graph& g, Activation act, NodeId x) {
  switch (act) {
    case Activation::relu:
      return g.relu(x);
    case Activation::leaky_relu:
      return g.leaky_relu(x);
    case Activation::tanh:
      return g.tanh(x);
  }
  throw Error("unknown activation");
}

}  // namespace

NodeId mlp_apply(Graph& g, const MlpParams& params, const MlpNodes& nodes,
                 NodeId input) {
  const Matrix& in = g.value(input);
  if (in.cols() != params.input_size()) {
    throw ShapeError("mlp_apply: input has " + std::to_string(in.cols()) +
                     " columns, network expects " +
                     std::to_string(params.input_size()));
  }
  int batch = in.rows();
  NodeId h = input;
  for (std::size_t i = 0; i < nodes.weights.size(); ++i) {
    h = add_bias(g, g.matmul(h, nodes.weights[i]), nodes.biases[i], batch);
    bool last = i + 1 == nodes.weights.size();
    if (!last) {
      h = apply_activation(g, params.hidden_activation, h);
    } else if (params.output_head == OutputHead::sigmoid) {
      h = g.sigmoid(h);
    }
  }
  return h;
}

ForwardResult generator_forward(Graph& g, const MlpParams& params, NodeId z,
                                bool trainable) {
  if (params.output_head != OutputHead::linear) {
    throw ConfigError("generator_forward: generator head must be linear");
  }
  MlpNodes nodes = register_mlp(g, params, trainable);
  return {mlp_apply(g, params, nodes, z), std::move(nodes)};
}

ForwardResult generator_forward(Graph& g, const MlpParams& params, const Matrix& z,
                                bool trainable) {
  return generator_forward(g, params, g.input(z), trainable);
}

ForwardResult discriminator_forward(Graph& g, const MlpParams& params, NodeId x,
                                    bool trainable) {
  if (params.output_size() != 1) {
    throw ConfigError("discriminator_forward: output size must be 1, got " +
                      std::to_string(params.output_size()));
  }
  MlpNodes nodes = register_mlp(g, params, trainable);
  return {mlp_apply(g, params, nodes, x), std::move(nodes)};
}

ForwardResult discriminator_forward(Graph& g, const MlpParams& params, const Matrix& x,
                                    bool trainable) {
  return discriminator_forward(g, params, g.input(x), trainable);
}

LabelEmbed init_label_embed(int num_classes, int embed_dim, std::uint64_t seed) {
  if (num_classes < 2 || embed_dim < 1 || embed_dim >= num_classes) {
    throw ConfigError("init_label_embed: need 1 <= embed_dim < num_classes, got " +
                      std::to_string(embed_dim) + " / " + std::to_string(num_classes));
  }
  LabelEmbed e;
  e.mapping = Matrix(num_classes, embed_dim);
  Pcg32 rng = make_stream(seed, StreamPurpose::weights);
  BoxMuller bm;
  double std_dev = std::sqrt(2.0 / num_classes);
  for (std::size_t k = 0; k < e.mapping.size(); ++k) e.mapping[k] = std_dev * bm.next(rng);
  return e;
}

Matrix one_hot(const std::vector<int>& labels, int num_classes) {
  Matrix y(static_cast<int>(labels.size()), num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int k = labels[i];
    if (k < 0 || k >= num_classes) {
      throw ConfigError("one_hot: label " + std::to_string(k) + " out of range [0, " +
                        std::to_string(num_classes) + ")");
    }
    y.at(static_cast<int>(i), k) = 1.0;
  }
  return y;
}

namespace {

void check_one_hot(const Matrix& y) {
  for (int r = 0; r < y.rows(); ++r) {
    int ones = 0;
    for (int c = 0; c < y.cols(); ++c) {
      double v = y.at(r, c);
      if (v == 1.0) {
        ++ones;
      } else if (v != 0.0) {
        throw ConfigError("conditional_forward: row " + std::to_string(r) +
                          " of y_onehot is not one-hot");
      }
    }
    if (ones != 1) {
      throw ConfigError("conditional_forward: row " + std::to_string(r) +
                        " of y_onehot has " + std::to_string(ones) + " ones");
    }
  }
}

}  // namespace

ConditionalResult conditional_forward(Graph& g, const MlpParams& gen,
                                      const MlpParams& disc, const LabelEmbed& embed,
                                      const Matrix& z, const Matrix& x,
                                      const Matrix& y_onehot,
                                      CondTrainability trainability) {
  check_one_hot(y_onehot);
  if (y_onehot.cols() != embed.num_classes()) {
    throw ShapeError("conditional_forward: y_onehot has " +
                     std::to_string(y_onehot.cols()) + " columns, embed expects " +
                     std::to_string(embed.num_classes()));
  }
  if (z.rows() != x.rows() || z.rows() != y_onehot.rows()) {
    throw ShapeError("conditional_forward: batch sizes differ (z " + z.shape_str() +
                     ", x " + x.shape_str() + ", y " + y_onehot.shape_str() + ")");
  }
  if (gen.input_size() != z.cols() + embed.embed_dim()) {
    throw ShapeError("conditional_forward: generator expects input size " +
                     std::to_string(gen.input_size()) + ", got latent " +
                     std::to_string(z.cols()) + " + embed " +
                     std::to_string(embed.embed_dim()));
  }
  if (disc.input_size() != x.cols() + embed.embed_dim()) {
    throw ShapeError("conditional_forward: discriminator expects input size " +
                     std::to_string(disc.input_size()) + ", got data " +
                     std::to_string(x.cols()) + " + embed " +
                     std::to_string(embed.embed_dim()));
  }

  ConditionalResult res;
  res.embed_node = trainability.embed ? g.param(embed.mapping) : g.input(embed.mapping);
  NodeId y = g.input(y_onehot);
  NodeId mapped = g.matmul(y, res.embed_node);  // shared by all three uses

  res.g_nodes = register_mlp(g, gen, trainability.generator);
  res.generated = mlp_apply(g, gen, res.g_nodes, g.concat(g.input(z), mapped));

  res.d_nodes = register_mlp(g, disc, trainability.discriminator);
  res.real_scores = mlp_apply(g, disc, res.d_nodes, g.concat(g.input(x), mapped));
  res.fake_scores = mlp_apply(g, disc, res.d_nodes, g.concat(res.generated, mapped));
  return res;
}

}  // namespace lsgan
