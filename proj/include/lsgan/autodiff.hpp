#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "lsgan/matrix.hpp"

namespace lsgan {

/// Slope used on the negative side of leaky ReLU (DCGAN convention).
inline constexpr double kDefaultLeakySlope = 0.2;

enum class OpKind {
  input,
  add,
  sub,
  mul,  // elementwise
  matmul,
  relu,
  leaky_relu,
  sigmoid,
  tanh,
  log,
  square,
  mean,    // mean over all entries, yields 1x1
  concat,  // column-wise
};

struct NodeId {
  std::uint32_t index = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// Reverse-mode autodiff tape over dense rank<=2 arrays.
///
/// Nodes are appended in construction order, so ids form a topological order
/// and the backward sweep is a single reverse pass. Forward values are
/// computed eagerly as ops are built. Elementwise ops accept equal shapes or
/// a 1x1 operand on either side (scalar broadcast); nothing wider.
class Graph {
 public:
  /// Constant leaf: no gradient flows into it.
  NodeId input(Matrix value);
  /// Trainable leaf: receives a gradient entry from backward().
  NodeId param(Matrix value);
  NodeId scalar(double v) { return input(Matrix::scalar(v)); }

  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId matmul(NodeId a, NodeId b);
  NodeId relu(NodeId x);
  NodeId leaky_relu(NodeId x, double slope = kDefaultLeakySlope);
  NodeId sigmoid(NodeId x);
  NodeId tanh(NodeId x);
  NodeId log(NodeId x);
  NodeId square(NodeId x);
  NodeId mean(NodeId x);
  NodeId concat(NodeId a, NodeId b);

  const Matrix& value(NodeId id) const { return nodes_[id.index].value; }
  OpKind op(NodeId id) const { return nodes_[id.index].op; }
  bool is_trainable(NodeId id) const { return nodes_[id.index].trainable; }
  bool requires_grad(NodeId id) const { return nodes_[id.index].requires_grad; }
  int parent_count(NodeId id) const { return nodes_[id.index].parent_count; }
  NodeId parent(NodeId id, int i) const { return nodes_[id.index].parents[i]; }
  std::size_t size() const { return nodes_.size(); }

  /// True once backward has accumulated into this node's gradient.
  bool has_grad(NodeId id) const { return !nodes_[id.index].grad.empty(); }
  const Matrix& grad(NodeId id) const;

  /// Clears every accumulated gradient (grads start fresh on next backward).
  void zero_grads();

  /// Reverse sweep from a scalar (1x1) root. Accumulates grads additively for
  /// every node lying on a path from a trainable leaf to the root; returns
  /// the gradients of the trainable leaves reached, keyed by node id.
  /// Throws ShapeError if the root is not 1x1.
  std::map<NodeId, Matrix> backward(NodeId root);

 private:
  struct Node {
    OpKind op;
    Matrix value;
    Matrix grad;  // empty until backward touches it
    std::array<NodeId, 2> parents{};
    std::uint8_t parent_count = 0;
    bool trainable = false;
    bool requires_grad = false;
    double slope = 0.0;  // leaky_relu only
  };

  NodeId push(Node node);
  NodeId unary(OpKind op, NodeId x, Matrix value, double slope = 0.0);
  NodeId binary_elementwise(OpKind op, NodeId a, NodeId b);
  Matrix& grad_buffer(NodeId id);  // allocates zeros on first use

  std::vector<Node> nodes_;
};

/// Builds a scalar loss from parameter leaves the checker created; the ids
/// arrive in the same order as the parameter arrays passed to
/// finite_diff_check.
using LossBuilder = std::function<NodeId(Graph&, const std::vector<NodeId>&)>;

struct FiniteDiffReport {
  double max_rel_err = 0.0;
  int checked = 0;
  int skipped = 0;
  bool all_skipped = false;  // warning: every coordinate was near a kink
};

/// Central-difference gradient check of a scalar loss against the tape,
/// using the fourth-order stencil over +-eps and +-2eps so the truncation
/// term stays below double rounding noise.
///
/// Relative error per coordinate is |g_ad - g_fd| / max(1e-12, |g_ad| +
/// |g_fd|). A coordinate is skipped when any ReLU / leaky-ReLU
/// pre-activation, in the nominal or any perturbed pass, has magnitude
/// below 10*eps: the difference quotient straddles a kink there and says
/// nothing about the tape. If everything gets skipped the report carries
/// max_rel_err 0 and the all_skipped flag.
FiniteDiffReport finite_diff_check(const LossBuilder& build,
                                   const std::vector<Matrix>& params,
                                   double eps);

}  // namespace lsgan
