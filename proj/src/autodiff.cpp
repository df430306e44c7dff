#include "lsgan/autodiff.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "lsgan/error.hpp"

namespace lsgan {

namespace {

using ConstRowMajorMap = Eigen::Map<
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using RowMajorMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Largest double strictly below 1 and smallest normal double: the sigmoid
// image is the open interval (0,1), and these are its representable ends.
constexpr double kOneMinusUlp = 1.0 - DBL_EPSILON / 2.0;
constexpr double kTiny = DBL_MIN;

double stable_sigmoid(double x) {
  double y;
  if (x >= 0.0) {
    y = 1.0 / (1.0 + std::exp(-x));
  } else {
    double e = std::exp(x);
    y = e / (1.0 + e);
  }
  return std::min(std::max(y, kTiny), kOneMinusUlp);
}

}  // namespace

NodeId Graph::push(Node node) {
  NodeId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(std::move(node));
  return id;
}

NodeId Graph::input(Matrix value) {
  Node n;
  n.op = OpKind::input;
  n.value = std::move(value);
  return push(std::move(n));
}

NodeId Graph::param(Matrix value) {
  Node n;
  n.op = OpKind::input;
  n.value = std::move(value);
  n.trainable = true;
  n.requires_grad = true;
  return push(std::move(n));
}

NodeId Graph::binary_elementwise(OpKind op, NodeId a, NodeId b) {
  const Matrix& va = nodes_[a.index].value;
  const Matrix& vb = nodes_[b.index].value;
  if (!va.same_shape(vb) && !va.is_scalar() && !vb.is_scalar()) {
    throw ShapeError("elementwise op: shapes " + va.shape_str() + " and " +
                     vb.shape_str() + " do not conform");
  }
  const Matrix& big = va.is_scalar() && !vb.is_scalar() ? vb : va;
  Matrix out = Matrix::uninitialized(big.rows(), big.cols());
  auto lhs = [&](std::size_t i) { return va.is_scalar() ? va[0] : va[i]; };
  auto rhs = [&](std::size_t i) { return vb.is_scalar() ? vb[0] : vb[i]; };
  switch (op) {
    case OpKind::add:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = lhs(i) + rhs(i);
      break;
    case OpKind::sub:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = lhs(i) - rhs(i);
      break;
    case OpKind::mul:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = lhs(i) * rhs(i);
      break;
    default:
      throw Error("not an elementwise op");
  }
  Node n;
  n.op = op;
  n.value = std::move(out);
  n.parents = {a, b};
  n.parent_count = 2;
  n.requires_grad = nodes_[a.index].requires_grad || nodes_[b.index].requires_grad;
  return push(std::move(n));
}

NodeId Graph::add(NodeId a, NodeId b) { return binary_elementwise(OpKind::add, a, b); }
NodeId Graph::sub(NodeId a, NodeId b) { return binary_elementwise(OpKind::sub, a, b); }
NodeId Graph::mul(NodeId a, NodeId b) { return binary_elementwise(OpKind::mul, a, b); }

NodeId Graph::matmul(NodeId a, NodeId b) {
  Node n;
  n.op = OpKind::matmul;
  n.value = lsgan::matmul(nodes_[a.index].value, nodes_[b.index].value);
  n.parents = {a, b};
  n.parent_count = 2;
  n.requires_grad = nodes_[a.index].requires_grad || nodes_[b.index].requires_grad;
  return push(std::move(n));
}

NodeId Graph::unary(OpKind op, NodeId x, Matrix value, double slope) {
  Node n;
  n.op = op;
  n.value = std::move(value);
  n.parents = {x, x};
  n.parent_count = 1;
  n.requires_grad = nodes_[x.index].requires_grad;
  n.slope = slope;
  return push(std::move(n));
}

NodeId Graph::relu(NodeId x) {
  const Matrix& v = nodes_[x.index].value;
  Matrix out = Matrix::uninitialized(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? v[i] : 0.0;
  return unary(OpKind::relu, x, std::move(out));
}

NodeId Graph::leaky_relu(NodeId x, double slope) {
  const Matrix& v = nodes_[x.index].value;
  Matrix out = Matrix::uninitialized(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? v[i] : slope * v[i];
  return unary(OpKind::leaky_relu, x, std::move(out), slope);
}

NodeId Graph::sigmoid(NodeId x) {
  const Matrix& v = nodes_[x.index].value;
  Matrix out = Matrix::uninitialized(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = stable_sigmoid(v[i]);
  return unary(OpKind::sigmoid, x, std::move(out));
}

NodeId Graph::tanh(NodeId x) {
  const Matrix& v = nodes_[x.index].value;
  Matrix out = Matrix::uninitialized(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
  return unary(OpKind::tanh, x, std::move(out));
}

NodeId Graph::log(NodeId x) {
  const Matrix& v = nodes_[x.index].value;
  Matrix out = Matrix::uninitialized(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::log(v[i]);
  return unary(OpKind::log, x, std::move(out));
}

NodeId Graph::square(NodeId x) {
  const Matrix& v = nodes_[x.index].value;
  Matrix out = Matrix::uninitialized(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * v[i];
  return unary(OpKind::square, x, std::move(out));
}

NodeId Graph::mean(NodeId x) {
  const Matrix& v = nodes_[x.index].value;
  if (v.empty()) throw ShapeError("mean: empty operand");
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += v[i];
  return unary(OpKind::mean, x, Matrix::scalar(acc / static_cast<double>(v.size())));
}

NodeId Graph::concat(NodeId a, NodeId b) {
  const Matrix& va = nodes_[a.index].value;
  const Matrix& vb = nodes_[b.index].value;
  if (va.rows() != vb.rows()) {
    throw ShapeError("concat: row counts differ, " + va.shape_str() + " vs " +
                     vb.shape_str());
  }
  Matrix out = Matrix::uninitialized(va.rows(), va.cols() + vb.cols());
  for (int r = 0; r < va.rows(); ++r) {
    for (int c = 0; c < va.cols(); ++c) out.at(r, c) = va.at(r, c);
    for (int c = 0; c < vb.cols(); ++c) out.at(r, va.cols() + c) = vb.at(r, c);
  }
  Node n;
  n.op = OpKind::concat;
  n.value = std::move(out);
  n.parents = {a, b};
  n.parent_count = 2;
  n.requires_grad = nodes_[a.index].requires_grad || nodes_[b.index].requires_grad;
  return push(std::move(n));
}

const Matrix& Graph::grad(NodeId id) const {
  const Node& n = nodes_[id.index];
  if (n.grad.empty()) {
    throw Error("grad: node " + std::to_string(id.index) +
                " has no accumulated gradient");
  }
  return n.grad;
}

void Graph::zero_grads() {
  for (Node& n : nodes_) n.grad = Matrix();
}

Matrix& Graph::grad_buffer(NodeId id) {
  Node& n = nodes_[id.index];
  if (n.grad.empty()) n.grad = Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

std::map<NodeId, Matrix> Graph::backward(NodeId root) {
  const Node& r = nodes_[root.index];
  if (!r.value.is_scalar()) {
    throw ShapeError("backward: root must be 1x1, got " + r.value.shape_str());
  }
  // each call computes the gradients of this root alone
  for (std::uint32_t idx = 0; idx <= root.index; ++idx) nodes_[idx].grad = Matrix();
  grad_buffer(root)[0] = 1.0;

  // accumulate into one parent slot, honoring scalar broadcast on that slot
  auto accumulate_elementwise = [&](NodeId pid, const Matrix& g, const Matrix& term,
                                    bool term_is_factor) {
    // term_is_factor: contribution is g (x) term; otherwise just g (term unused)
    const Node& p = nodes_[pid.index];
    Matrix& pg = grad_buffer(pid);
    if (p.value.is_scalar() && !g.is_scalar()) {
      double acc = 0.0;
      if (term_is_factor) {
        for (std::size_t i = 0; i < g.size(); ++i)
          acc += g[i] * (term.is_scalar() ? term[0] : term[i]);
      } else {
        for (std::size_t i = 0; i < g.size(); ++i) acc += g[i];
      }
      pg[0] += acc;
    } else {
      if (term_is_factor) {
        for (std::size_t i = 0; i < pg.size(); ++i)
          pg[i] += g[i] * (term.is_scalar() ? term[0] : term[i]);
      } else {
        for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += g[i];
      }
    }
  };

  for (std::uint32_t idx = root.index + 1; idx-- > 0;) {
    Node& n = nodes_[idx];
    if (!n.requires_grad || n.grad.empty()) continue;
    const Matrix& g = n.grad;
    NodeId a = n.parents[0];
    NodeId b = n.parents[1];
    bool a_rg = n.parent_count >= 1 && nodes_[a.index].requires_grad;
    bool b_rg = n.parent_count >= 2 && nodes_[b.index].requires_grad;
    switch (n.op) {
      case OpKind::input:
        break;
      case OpKind::add:
        if (a_rg) accumulate_elementwise(a, g, Matrix(), false);
        if (b_rg) accumulate_elementwise(b, g, Matrix(), false);
        break;
      case OpKind::sub: {
        if (a_rg) accumulate_elementwise(a, g, Matrix(), false);
        if (b_rg) {
          const Node& pb = nodes_[b.index];
          Matrix& pg = grad_buffer(b);
          if (pb.value.is_scalar() && !g.is_scalar()) {
            double acc = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) acc += g[i];
            pg[0] -= acc;
          } else {
            for (std::size_t i = 0; i < pg.size(); ++i) pg[i] -= g[i];
          }
        }
        break;
      }
      case OpKind::mul:
        if (a_rg) accumulate_elementwise(a, g, nodes_[b.index].value, true);
        if (b_rg) accumulate_elementwise(b, g, nodes_[a.index].value, true);
        break;
      case OpKind::matmul: {
        const Matrix& va = nodes_[a.index].value;
        const Matrix& vb = nodes_[b.index].value;
        ConstRowMajorMap mg(g.data(), g.rows(), g.cols());
        if (a_rg) {
          Matrix& pg = grad_buffer(a);
          ConstRowMajorMap mb(vb.data(), vb.rows(), vb.cols());
          RowMajorMap mpg(pg.data(), pg.rows(), pg.cols());
          mpg.noalias() += mg * mb.transpose();
        }
        if (b_rg) {
          Matrix& pg = grad_buffer(b);
          ConstRowMajorMap ma(va.data(), va.rows(), va.cols());
          RowMajorMap mpg(pg.data(), pg.rows(), pg.cols());
          mpg.noalias() += ma.transpose() * mg;
        }
        break;
      }
      case OpKind::relu: {
        if (!a_rg) break;
        const Matrix& vx = nodes_[a.index].value;
        Matrix& pg = grad_buffer(a);
        // subgradient 0 at the kink
        for (std::size_t i = 0; i < pg.size(); ++i)
          if (vx[i] > 0.0) pg[i] += g[i];
        break;
      }
      case OpKind::leaky_relu: {
        if (!a_rg) break;
        const Matrix& vx = nodes_[a.index].value;
        Matrix& pg = grad_buffer(a);
        // negative-side slope at the kink
        for (std::size_t i = 0; i < pg.size(); ++i)
          pg[i] += g[i] * (vx[i] > 0.0 ? 1.0 : n.slope);
        break;
      }
      case OpKind::sigmoid: {
        if (!a_rg) break;
        Matrix& pg = grad_buffer(a);
        const Matrix& y = n.value;
        for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += g[i] * y[i] * (1.0 - y[i]);
        break;
      }
      case OpKind::tanh: {
        if (!a_rg) break;
        Matrix& pg = grad_buffer(a);
        const Matrix& y = n.value;
        for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += g[i] * (1.0 - y[i] * y[i]);
        break;
      }
      case OpKind::log: {
        if (!a_rg) break;
        const Matrix& vx = nodes_[a.index].value;
        Matrix& pg = grad_buffer(a);
        for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += g[i] / vx[i];
        break;
      }
      case OpKind::square: {
        if (!a_rg) break;
        const Matrix& vx = nodes_[a.index].value;
        Matrix& pg = grad_buffer(a);
        for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += g[i] * 2.0 * vx[i];
        break;
      }
      case OpKind::mean: {
        if (!a_rg) break;
        Matrix& pg = grad_buffer(a);
        double share = g[0] / static_cast<double>(pg.size());
        for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += share;
        break;
      }
      case OpKind::concat: {
        const Matrix& va = nodes_[a.index].value;
        if (a_rg) {
          Matrix& pg = grad_buffer(a);
          for (int r = 0; r < pg.rows(); ++r)
            for (int c = 0; c < pg.cols(); ++c) pg.at(r, c) += g.at(r, c);
        }
        if (b_rg) {
          Matrix& pg = grad_buffer(b);
          for (int r = 0; r < pg.rows(); ++r)
            for (int c = 0; c < pg.cols(); ++c) pg.at(r, c) += g.at(r, va.cols() + c);
        }
        break;
      }
    }
  }

  std::map<NodeId, Matrix> grads;
  for (std::uint32_t idx = 0; idx <= root.index; ++idx) {
    const Node& n = nodes_[idx];
    if (n.trainable && !n.grad.empty()) grads.emplace(NodeId{idx}, n.grad);
  }
  return grads;
}

namespace {

// Smallest |pre-activation| feeding any ReLU / leaky-ReLU in the graph;
// +inf when the graph has no kinked activation.
double min_kink_margin(const Graph& g) {
  double m = std::numeric_limits<double>::infinity();
  for (std::uint32_t idx = 0; idx < g.size(); ++idx) {
    NodeId id{idx};
    OpKind k = g.op(id);
    if (k != OpKind::relu && k != OpKind::leaky_relu) continue;
    const Matrix& pre = g.value(g.parent(id, 0));
    for (std::size_t i = 0; i < pre.size(); ++i) m = std::min(m, std::abs(pre[i]));
  }
  return m;
}

}  // namespace

FiniteDiffReport finite_diff_check(const LossBuilder& build,
                                   const std::vector<Matrix>& params, double eps) {
  Graph nominal;
  std::vector<NodeId> ids;
  ids.reserve(params.size());
  for (const Matrix& p : params) ids.push_back(nominal.param(p));
  NodeId root = build(nominal, ids);
  if (!nominal.value(root).is_scalar()) {
    throw ShapeError("finite_diff_check: loss must be scalar, got " +
                     nominal.value(root).shape_str());
  }
  auto grads = nominal.backward(root);
  double nominal_margin = min_kink_margin(nominal);

  auto eval_loss = [&](const std::vector<Matrix>& p, double* margin) {
    Graph g;
    std::vector<NodeId> pids;
    pids.reserve(p.size());
    for (const Matrix& m : p) pids.push_back(g.param(m));
    NodeId r = build(g, pids);
    *margin = std::min(*margin, min_kink_margin(g));
    return g.value(r)[0];
  };

  FiniteDiffReport report;
  std::vector<Matrix> work = params;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    const Matrix& ad = grads.at(ids[pi]);
    for (std::size_t i = 0; i < params[pi].size(); ++i) {
      double saved = work[pi][i];
      double margin = nominal_margin;
      auto at = [&](double offset) {
        work[pi][i] = saved + offset;
        return eval_loss(work, &margin);
      };
      // fourth-order central stencil over +-eps and +-2eps; truncation error
      // stays below the rounding floor even for tiny gradients
      double lp1 = at(eps);
      double lm1 = at(-eps);
      double lp2 = at(2.0 * eps);
      double lm2 = at(-2.0 * eps);
      work[pi][i] = saved;

      if (margin < 10.0 * eps) {  // a perturbed pass grazed a kink
        ++report.skipped;
        continue;
      }
      double fd = (8.0 * (lp1 - lm1) - (lp2 - lm2)) / (12.0 * eps);
      double rel = std::abs(ad[i] - fd) / std::max(1e-12, std::abs(ad[i]) + std::abs(fd));
      report.max_rel_err = std::max(report.max_rel_err, rel);
      ++report.checked;
    }
  }
  report.all_skipped = report.checked == 0 && report.skipped > 0;
  return report;
}

}  // namespace lsgan
