#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "ironic/types.hpp"
#include "ironic/util/rng.hpp"

namespace ironic::nn {

// Named tensor with a persistent gradient accumulator.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;  // same shape as value, zeroed between optimizer steps
  bool trainable = true;
};

// Owns a model's parameters in creation order (the order is the checkpoint
// and optimizer-state order, so it must be deterministic).
class ParameterSet {
 public:
  Parameter& create(const std::string& name, Index rows, Index cols, bool trainable = true);
  Parameter& at(const std::string& name);
  const Parameter& at(const std::string& name) const;
  Parameter* find(const std::string& name);
  const std::vector<std::unique_ptr<Parameter>>& all() const { return params_; }
  size_t size() const { return params_.size(); }
  void zero_grads();
  long total_values() const;
  // FNV-1a over every value byte in creation order; used by the
  // frozen-parameter checks.
  uint64_t value_checksum() const;

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::unordered_map<std::string, size_t> index_;
};

class Graph;

// Lightweight handle to a node in a Graph's tape.
class Var {
 public:
  Var() = default;
  Var(Graph* g, size_t idx) : g_(g), idx_(idx) {}
  const Matrix& value() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  Graph* graph() const { return g_; }
  size_t index() const { return idx_; }

 private:
  Graph* g_ = nullptr;
  size_t idx_ = 0;
};

// Reverse-mode tape. Nodes are created in forward order; backward walks the
// tape in reverse, so creation order is the topological order.
class Graph {
 public:
  struct Node {
    Matrix value;
    Matrix grad;  // empty until the node receives a gradient
    bool needs_grad = false;
    std::function<void(Graph&, const Matrix&)> backprop;  // given this node's grad
  };

  Var constant(Matrix m);
  Var param(Parameter& p);

  // Seeds d(loss)/d(loss) = 1 and accumulates gradients into every
  // reachable trainable parameter. `loss` must be 1x1.
  void backward(Var loss);

  const Matrix& value(size_t idx) const { return nodes_[idx].value; }
  Matrix& grad(size_t idx);  // allocates zeros on first touch
  bool needs_grad(size_t idx) const { return nodes_[idx].needs_grad; }
  size_t size() const { return nodes_.size(); }

  Var make_node(Matrix value, bool needs_grad,
                std::function<void(Graph&, const Matrix&)> backprop);
  void accumulate(size_t idx, const Matrix& g);

 private:
  std::deque<Node> nodes_;
};

// ---- ops ----------------------------------------------------------------
// Every op validates operand shapes and throws std::invalid_argument naming
// the op and both shapes on mismatch.

Var matmul(Var a, Var b);
Var matmul_nt(Var a, Var b);  // a * b^T
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var add_rowvec(Var a, Var bias);  // bias is 1 x cols(a), broadcast over rows
Var scale(Var a, Scalar c);
Var hadamard(Var a, Var b);
Var relu(Var a);
Var sigmoid(Var a);
Var tanh_act(Var a);
Var exp_elem(Var a);
Var softmax_rows(Var a);
// additive mask (same shape as a) applied to the logits before the softmax
Var softmax_rows_masked(Var a, const Matrix& mask);
Var layer_norm_rows(Var a, Var gain, Var bias, Scalar eps = 1e-5);
Var embedding_rows(Graph& g, Parameter& table, const std::vector<int>& ids);
// x: L x d, w: (width*d) x maps, b: 1 x maps -> (L-width+1) x maps
Var conv1d_text(Var x, Var w, Var b, int width);
Var max_over_time(Var a);  // column-wise max -> 1 x cols
Var concat_cols(const std::vector<Var>& parts);
Var slice_cols(Var a, Index c0, Index n);
Var row(Var a, Index r);
Var sum_all(Var a);   // 1x1
Var mean_all(Var a);  // 1x1
Var add_scalars(const std::vector<Var>& vs);  // sum of 1x1 nodes
// sum over rows of -log softmax(row)[target]; logits: L x V, targets size L
Var cross_entropy_rows(Var logits, const std::vector<int>& targets);
// numerically stable binary cross-entropy on a 1x1 logit against label y
Var bce_with_logits(Var logit, Scalar y);
// inverted dropout; active only when rng is non-null
Var dropout(Var a, Scalar p, Rng* rng);

}  // namespace ironic::nn
