#include "ironic/nn/graph.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ironic/util/hash.hpp"

namespace ironic::nn {

namespace {

[[noreturn]] void shape_error(const char* op, const Matrix& a, const Matrix& b) {
  std::ostringstream os;
  os << op << ": shape mismatch (" << a.rows() << "x" << a.cols() << ") vs ("
     << b.rows() << "x" << b.cols() << ")";
  throw std::invalid_argument(os.str());
}

[[noreturn]] void op_error(const char* op, const std::string& detail) {
  std::ostringstream os;
  os << op << ": " << detail;
  throw std::invalid_argument(os.str());
}

}  // namespace

// ---- ParameterSet --------------------------------------------------------

Parameter& ParameterSet::create(const std::string& name, Index rows, Index cols,
                                bool trainable) {
  if (index_.count(name)) op_error("ParameterSet::create", "duplicate parameter '" + name + "'");
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Matrix::Zero(rows, cols);
  p->grad = Matrix::Zero(rows, cols);
  p->trainable = trainable;
  index_[name] = params_.size();
  params_.push_back(std::move(p));
  return *params_.back();
}

Parameter& ParameterSet::at(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end())
    op_error("ParameterSet::at", "unknown parameter '" + name + "'");
  return *params_[it->second];
}

const Parameter& ParameterSet::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    op_error("ParameterSet::at", "unknown parameter '" + name + "'");
  return *params_[it->second];
}

Parameter* ParameterSet::find(const std::string& name) {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : params_[it->second].get();
}

void ParameterSet::zero_grads() {
  for (auto& p : params_) p->grad.setZero();
}

long ParameterSet::total_values() const {
  long n = 0;
  for (const auto& p : params_) n += static_cast<long>(p->value.size());
  return n;
}

uint64_t ParameterSet::value_checksum() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& p : params_) {
    h = fnv1a64(p->name, h);
    for (Index r = 0; r < p->value.rows(); ++r)
      for (Index c = 0; c < p->value.cols(); ++c) {
        const Scalar v = p->value(r, c);
        h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&v), sizeof(v)), h);
      }
  }
  return h;
}

// ---- Graph ---------------------------------------------------------------

const Matrix& Var::value() const { return g_->value(idx_); }

Var Graph::make_node(Matrix value, bool needs_grad,
                     std::function<void(Graph&, const Matrix&)> backprop) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  n.backprop = std::move(backprop);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Graph::constant(Matrix m) { return make_node(std::move(m), false, nullptr); }

Var Graph::param(Parameter& p) {
  Parameter* pp = &p;
  return make_node(p.value, p.trainable,
                   [pp](Graph&, const Matrix& g) { pp->grad += g; });
}

Matrix& Graph::grad(size_t idx) {
  Node& n = nodes_[idx];
  if (n.grad.size() == 0) n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

void Graph::accumulate(size_t idx, const Matrix& g) {
  if (!nodes_[idx].needs_grad) return;
  Matrix& acc = grad(idx);
  if (acc.rows() != g.rows() || acc.cols() != g.cols())
    shape_error("Graph::accumulate", acc, g);
  acc += g;
}

void Graph::backward(Var loss) {
  if (loss.graph() != this) op_error("Graph::backward", "loss from another graph");
  const Node& ln = nodes_[loss.index()];
  if (ln.value.rows() != 1 || ln.value.cols() != 1)
    op_error("Graph::backward", "loss must be 1x1");
  grad(loss.index())(0, 0) = 1.0;
  for (size_t i = nodes_.size(); i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.backprop || n.grad.size() == 0) continue;
    n.backprop(*this, n.grad);
  }
}

// ---- op helpers ----------------------------------------------------------

namespace {

bool any_parent_needs(std::initializer_list<Var> vs) {
  for (const Var& v : vs)
    if (v.graph()->needs_grad(v.index())) return true;
  return false;
}

Graph& common_graph(const char* op, std::initializer_list<Var> vs) {
  Graph* g = nullptr;
  for (const Var& v : vs) {
    if (!v.graph()) op_error(op, "uninitialized operand");
    if (g && v.graph() != g) op_error(op, "operands from different graphs");
    g = v.graph();
  }
  return *g;
}

}  // namespace

// ---- binary / unary ops --------------------------------------------------

Var matmul(Var a, Var b) {
  Graph& g = common_graph("matmul", {a, b});
  if (a.cols() != b.rows()) shape_error("matmul", a.value(), b.value());
  Matrix out = a.value() * b.value();
  const size_t ia = a.index(), ib = b.index();
  return g.make_node(std::move(out), any_parent_needs({a, b}),
                     [ia, ib](Graph& gg, const Matrix& go) {
                       gg.accumulate(ia, go * gg.value(ib).transpose());
                       gg.accumulate(ib, gg.value(ia).transpose() * go);
                     });
}

Var matmul_nt(Var a, Var b) {
  Graph& g = common_graph("matmul_nt", {a, b});
  if (a.cols() != b.cols()) shape_error("matmul_nt", a.value(), b.value());
  Matrix out = a.value() * b.value().transpose();
  const size_t ia = a.index(), ib = b.index();
  return g.make_node(std::move(out), any_parent_needs({a, b}),
                     [ia, ib](Graph& gg, const Matrix& go) {
                       gg.accumulate(ia, go * gg.value(ib));
                       gg.accumulate(ib, go.transpose() * gg.value(ia));
                     });
}

Var add(Var a, Var b) {
  Graph& g = common_graph("add", {a, b});
  if (a.rows() != b.rows() || a.cols() != b.cols()) shape_error("add", a.value(), b.value());
  const size_t ia = a.index(), ib = b.index();
  return g.make_node(a.value() + b.value(), any_parent_needs({a, b}),
                     [ia, ib](Graph& gg, const Matrix& go) {
                       gg.accumulate(ia, go);
                       gg.accumulate(ib, go);
                     });
}

Var sub(Var a, Var b) {
  Graph& g = common_graph("sub", {a, b});
  if (a.rows() != b.rows() || a.cols() != b.cols()) shape_error("sub", a.value(), b.value());
  const size_t ia = a.index(), ib = b.index();
  return g.make_node(a.value() - b.value(), any_parent_needs({a, b}),
                     [ia, ib](Graph& gg, const Matrix& go) {
                       gg.accumulate(ia, go);
                       gg.accumulate(ib, -go);
                     });
}

Var add_rowvec(Var a, Var bias) {
  Graph& g = common_graph("add_rowvec", {a, bias});
  if (bias.rows() != 1 || bias.cols() != a.cols())
    shape_error("add_rowvec", a.value(), bias.value());
  Matrix out = a.value().rowwise() + bias.value().row(0);
  const size_t ia = a.index(), ib = bias.index();
  return g.make_node(std::move(out), any_parent_needs({a, bias}),
                     [ia, ib](Graph& gg, const Matrix& go) {
                       gg.accumulate(ia, go);
                       gg.accumulate(ib, go.colwise().sum());
                     });
}

Var scale(Var a, Scalar c) {
  Graph& g = common_graph("scale", {a});
  const size_t ia = a.index();
  return g.make_node(a.value() * c, any_parent_needs({a}),
                     [ia, c](Graph& gg, const Matrix& go) { gg.accumulate(ia, go * c); });
}

Var hadamard(Var a, Var b) {
  Graph& g = common_graph("hadamard", {a, b});
  if (a.rows() != b.rows() || a.cols() != b.cols())
    shape_error("hadamard", a.value(), b.value());
  const size_t ia = a.index(), ib = b.index();
  return g.make_node(a.value().cwiseProduct(b.value()), any_parent_needs({a, b}),
                     [ia, ib](Graph& gg, const Matrix& go) {
                       gg.accumulate(ia, go.cwiseProduct(gg.value(ib)));
                       gg.accumulate(ib, go.cwiseProduct(gg.value(ia)));
                     });
}

Var relu(Var a) {
  Graph& g = common_graph("relu", {a});
  const size_t ia = a.index();
  return g.make_node(a.value().cwiseMax(0.0), any_parent_needs({a}),
                     [ia](Graph& gg, const Matrix& go) {
                       Matrix m = (gg.value(ia).array() > 0.0).cast<Scalar>().matrix();
                       gg.accumulate(ia, go.cwiseProduct(m));
                     });
}

Var sigmoid(Var a) {
  Graph& g = common_graph("sigmoid", {a});
  Matrix out = a.value().unaryExpr([](Scalar x) {
    return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  });
  const size_t ia = a.index();
  Matrix y = out;  // kept for the backward pass
  return g.make_node(std::move(out), any_parent_needs({a}),
                     [ia, y](Graph& gg, const Matrix& go) {
                       Matrix m = (y.array() * (1.0 - y.array())).matrix();
                       gg.accumulate(ia, go.cwiseProduct(m));
                     });
}

Var tanh_act(Var a) {
  Graph& g = common_graph("tanh_act", {a});
  Matrix out = a.value().array().tanh().matrix();
  const size_t ia = a.index();
  Matrix y = out;
  return g.make_node(std::move(out), any_parent_needs({a}),
                     [ia, y](Graph& gg, const Matrix& go) {
                       Matrix m = (1.0 - y.array().square()).matrix();
                       gg.accumulate(ia, go.cwiseProduct(m));
                     });
}

Var exp_elem(Var a) {
  Graph& g = common_graph("exp_elem", {a});
  Matrix out = a.value().array().exp().matrix();
  const size_t ia = a.index();
  Matrix y = out;
  return g.make_node(std::move(out), any_parent_needs({a}),
                     [ia, y](Graph& gg, const Matrix& go) {
                       gg.accumulate(ia, go.cwiseProduct(y));
                     });
}

namespace {

Matrix stable_row_softmax(const Matrix& z) {
  Matrix out(z.rows(), z.cols());
  for (Index r = 0; r < z.rows(); ++r) {
    const Scalar m = z.row(r).maxCoeff();
    Eigen::Array<Scalar, 1, Eigen::Dynamic> e = (z.row(r).array() - m).exp();
    out.row(r) = (e / e.sum()).matrix();
  }
  return out;
}

Var softmax_impl(const char* op, Var a, const Matrix* mask) {
  Graph& g = common_graph(op, {a});
  Matrix z = a.value();
  if (mask) {
    if (mask->rows() != z.rows() || mask->cols() != z.cols())
      shape_error(op, z, *mask);
    z += *mask;
  }
  Matrix out = stable_row_softmax(z);
  const size_t ia = a.index();
  Matrix y = out;
  return g.make_node(std::move(out), g.needs_grad(ia),
                     [ia, y](Graph& gg, const Matrix& go) {
                       Matrix gx(y.rows(), y.cols());
                       for (Index r = 0; r < y.rows(); ++r) {
                         const Scalar dot = go.row(r).cwiseProduct(y.row(r)).sum();
                         gx.row(r) =
                             (y.row(r).array() * (go.row(r).array() - dot)).matrix();
                       }
                       gg.accumulate(ia, gx);
                     });
}

}  // namespace

Var softmax_rows(Var a) { return softmax_impl("softmax_rows", a, nullptr); }

Var softmax_rows_masked(Var a, const Matrix& mask) {
  return softmax_impl("softmax_rows_masked", a, &mask);
}

Var layer_norm_rows(Var a, Var gain, Var bias, Scalar eps) {
  Graph& g = common_graph("layer_norm_rows", {a, gain, bias});
  if (gain.rows() != 1 || gain.cols() != a.cols())
    shape_error("layer_norm_rows", a.value(), gain.value());
  if (bias.rows() != 1 || bias.cols() != a.cols())
    shape_error("layer_norm_rows", a.value(), bias.value());
  const Index n = a.cols();
  const Matrix& x = a.value();
  Matrix xhat(x.rows(), n);
  Vector inv_std(x.rows());
  for (Index r = 0; r < x.rows(); ++r) {
    const Scalar mu = x.row(r).mean();
    const Scalar var = (x.row(r).array() - mu).square().sum() / static_cast<Scalar>(n);
    const Scalar is = 1.0 / std::sqrt(var + eps);
    inv_std(r) = is;
    xhat.row(r) = ((x.row(r).array() - mu) * is).matrix();
  }
  Matrix out = ((xhat.array().rowwise() * gain.value().row(0).array()).rowwise() +
                bias.value().row(0).array())
                   .matrix();
  const size_t ia = a.index(), ig = gain.index(), ib = bias.index();
  bool ng = any_parent_needs({a, gain, bias});
  // capture xhat / inv_std by value for the backward pass
  return g.make_node(std::move(out), ng,
                     [ia, ig, ib, xhat, inv_std, n](Graph& gg, const Matrix& go) {
                       const Matrix& gv = gg.value(ig);
                       Matrix dxhat = (go.array().rowwise() * gv.row(0).array()).matrix();
                       Matrix gx(go.rows(), n);
                       for (Index r = 0; r < go.rows(); ++r) {
                         const Scalar s1 = dxhat.row(r).sum();
                         const Scalar s2 = dxhat.row(r).cwiseProduct(xhat.row(r)).sum();
                         gx.row(r) =
                             ((dxhat.row(r).array() - s1 / static_cast<Scalar>(n) -
                               xhat.row(r).array() * (s2 / static_cast<Scalar>(n))) *
                              inv_std(r))
                                 .matrix();
                       }
                       gg.accumulate(ia, gx);
                       gg.accumulate(ig, go.cwiseProduct(xhat).colwise().sum());
                       gg.accumulate(ib, go.colwise().sum());
                     });
}

Var embedding_rows(Graph& g, Parameter& table, const std::vector<int>& ids) {
  if (ids.empty()) op_error("embedding_rows", "empty id list");
  const Index v = table.value.rows();
  Matrix out(static_cast<Index>(ids.size()), table.value.cols());
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= v) {
      std::ostringstream os;
      os << "id " << ids[i] << " out of range [0," << v << ") in table '" << table.name << "'";
      op_error("embedding_rows", os.str());
    }
    out.row(static_cast<Index>(i)) = table.value.row(ids[i]);
  }
  Parameter* tp = &table;
  std::vector<int> idc = ids;
  return g.make_node(std::move(out), table.trainable,
                     [tp, idc](Graph&, const Matrix& go) {
                       for (size_t i = 0; i < idc.size(); ++i)
                         tp->grad.row(idc[i]) += go.row(static_cast<Index>(i));
                     });
}

Var conv1d_text(Var x, Var w, Var b, int width) {
  Graph& g = common_graph("conv1d_text", {x, w, b});
  const Index L = x.rows(), d = x.cols();
  if (width < 1) op_error("conv1d_text", "width must be >= 1");
  if (w.rows() != static_cast<Index>(width) * d)
    shape_error("conv1d_text", x.value(), w.value());
  if (b.rows() != 1 || b.cols() != w.cols()) shape_error("conv1d_text", w.value(), b.value());
  if (L < width) {
    std::ostringstream os;
    os << "input length " << L << " shorter than filter width " << width;
    op_error("conv1d_text", os.str());
  }
  const Index spans = L - width + 1;
  // unfold windows into rows of U, then one matmul
  Matrix u(spans, static_cast<Index>(width) * d);
  for (Index s = 0; s < spans; ++s)
    for (int k = 0; k < width; ++k)
      u.block(s, static_cast<Index>(k) * d, 1, d) = x.value().row(s + k);
  Matrix out = (u * w.value()).rowwise() + b.value().row(0);
  const size_t ix = x.index(), iw = w.index(), ib = b.index();
  return g.make_node(std::move(out), any_parent_needs({x, w, b}),
                     [ix, iw, ib, u, width, d](Graph& gg, const Matrix& go) {
                       gg.accumulate(iw, u.transpose() * go);
                       gg.accumulate(ib, go.colwise().sum());
                       if (gg.needs_grad(ix)) {
                         Matrix du = go * gg.value(iw).transpose();
                         Matrix gx = Matrix::Zero(gg.value(ix).rows(), d);
                         for (Index s = 0; s < du.rows(); ++s)
                           for (int k = 0; k < width; ++k)
                             gx.row(s + k) += du.block(s, static_cast<Index>(k) * d, 1, d);
                         gg.accumulate(ix, gx);
                       }
                     });
}

Var max_over_time(Var a) {
  Graph& g = common_graph("max_over_time", {a});
  const Index nc = a.cols();
  Matrix out(1, nc);
  std::vector<Index> arg(static_cast<size_t>(nc));
  for (Index c = 0; c < nc; ++c) {
    Index r;
    out(0, c) = a.value().col(c).maxCoeff(&r);
    arg[static_cast<size_t>(c)] = r;
  }
  const size_t ia = a.index();
  return g.make_node(std::move(out), any_parent_needs({a}),
                     [ia, arg](Graph& gg, const Matrix& go) {
                       Matrix gx = Matrix::Zero(gg.value(ia).rows(), gg.value(ia).cols());
                       for (Index c = 0; c < go.cols(); ++c)
                         gx(arg[static_cast<size_t>(c)], c) += go(0, c);
                       gg.accumulate(ia, gx);
                     });
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) op_error("concat_cols", "no parts");
  Graph& g = *parts[0].graph();
  const Index r = parts[0].rows();
  Index total = 0;
  bool ng = false;
  for (const Var& p : parts) {
    if (p.graph() != &g) op_error("concat_cols", "operands from different graphs");
    if (p.rows() != r) shape_error("concat_cols", parts[0].value(), p.value());
    total += p.cols();
    ng = ng || g.needs_grad(p.index());
  }
  Matrix out(r, total);
  std::vector<std::pair<size_t, Index>> layout;  // (node index, col offset)
  Index off = 0;
  for (const Var& p : parts) {
    out.block(0, off, r, p.cols()) = p.value();
    layout.emplace_back(p.index(), off);
    off += p.cols();
  }
  return g.make_node(std::move(out), ng,
                     [layout](Graph& gg, const Matrix& go) {
                       for (size_t i = 0; i < layout.size(); ++i) {
                         const Index c0 = layout[i].second;
                         const Index nc = (i + 1 < layout.size() ? layout[i + 1].second
                                                                 : go.cols()) -
                                          c0;
                         gg.accumulate(layout[i].first, go.block(0, c0, go.rows(), nc));
                       }
                     });
}

Var slice_cols(Var a, Index c0, Index n) {
  Graph& g = common_graph("slice_cols", {a});
  if (c0 < 0 || n < 1 || c0 + n > a.cols()) {
    std::ostringstream os;
    os << "columns [" << c0 << "," << c0 + n << ") outside 0.." << a.cols();
    op_error("slice_cols", os.str());
  }
  const size_t ia = a.index();
  return g.make_node(a.value().block(0, c0, a.rows(), n), any_parent_needs({a}),
                     [ia, c0, n](Graph& gg, const Matrix& go) {
                       Matrix gx = Matrix::Zero(gg.value(ia).rows(), gg.value(ia).cols());
                       gx.block(0, c0, go.rows(), n) = go;
                       gg.accumulate(ia, gx);
                     });
}

Var row(Var a, Index r) {
  Graph& g = common_graph("row", {a});
  if (r < 0 || r >= a.rows()) {
    std::ostringstream os;
    os << "row " << r << " outside 0.." << a.rows();
    op_error("row", os.str());
  }
  const size_t ia = a.index();
  return g.make_node(a.value().row(r), any_parent_needs({a}),
                     [ia, r](Graph& gg, const Matrix& go) {
                       Matrix gx = Matrix::Zero(gg.value(ia).rows(), gg.value(ia).cols());
                       gx.row(r) = go;
                       gg.accumulate(ia, gx);
                     });
}

Var sum_all(Var a) {
  Graph& g = common_graph("sum_all", {a});
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  const size_t ia = a.index();
  return g.make_node(std::move(out), any_parent_needs({a}),
                     [ia](Graph& gg, const Matrix& go) {
                       gg.accumulate(ia, Matrix::Constant(gg.value(ia).rows(),
                                                          gg.value(ia).cols(), go(0, 0)));
                     });
}

Var mean_all(Var a) {
  Var s = sum_all(a);
  return scale(s, 1.0 / static_cast<Scalar>(a.rows() * a.cols()));
}

Var add_scalars(const std::vector<Var>& vs) {
  if (vs.empty()) op_error("add_scalars", "no operands");
  Graph& g = *vs[0].graph();
  Scalar total = 0;
  bool ng = false;
  std::vector<size_t> idx;
  idx.reserve(vs.size());
  for (const Var& v : vs) {
    if (v.graph() != &g) op_error("add_scalars", "operands from different graphs");
    if (v.rows() != 1 || v.cols() != 1) op_error("add_scalars", "operand not 1x1");
    total += v.value()(0, 0);
    ng = ng || g.needs_grad(v.index());
    idx.push_back(v.index());
  }
  Matrix out(1, 1);
  out(0, 0) = total;
  return g.make_node(std::move(out), ng,
                     [idx](Graph& gg, const Matrix& go) {
                       for (size_t i : idx) gg.accumulate(i, go);
                     });
}

Var cross_entropy_rows(Var logits, const std::vector<int>& targets) {
  Graph& g = common_graph("cross_entropy_rows", {logits});
  const Index L = logits.rows(), v = logits.cols();
  if (static_cast<Index>(targets.size()) != L) {
    std::ostringstream os;
    os << "targets size " << targets.size() << " != logit rows " << L;
    op_error("cross_entropy_rows", os.str());
  }
  const Matrix& z = logits.value();
  Matrix probs = stable_row_softmax(z);
  Scalar loss = 0;
  for (Index r = 0; r < L; ++r) {
    const int t = targets[static_cast<size_t>(r)];
    if (t < 0 || t >= v) {
      std::ostringstream os;
      os << "target " << t << " outside 0.." << v;
      op_error("cross_entropy_rows", os.str());
    }
    const Scalar m = z.row(r).maxCoeff();
    const Scalar lse = m + std::log((z.row(r).array() - m).exp().sum());
    loss += lse - z(r, t);
  }
  Matrix out(1, 1);
  out(0, 0) = loss;
  const size_t il = logits.index();
  std::vector<int> tg = targets;
  return g.make_node(std::move(out), any_parent_needs({logits}),
                     [il, probs, tg](Graph& gg, const Matrix& go) {
                       Matrix gx = probs;
                       for (Index r = 0; r < gx.rows(); ++r)
                         gx(r, tg[static_cast<size_t>(r)]) -= 1.0;
                       gg.accumulate(il, gx * go(0, 0));
                     });
}

Var bce_with_logits(Var logit, Scalar y) {
  Graph& g = common_graph("bce_with_logits", {logit});
  if (logit.rows() != 1 || logit.cols() != 1) op_error("bce_with_logits", "logit not 1x1");
  if (y < 0.0 || y > 1.0) op_error("bce_with_logits", "label outside [0,1]");
  const Scalar z = logit.value()(0, 0);
  // max(z,0) - z*y + log(1 + exp(-|z|))
  const Scalar loss = std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
  Matrix out(1, 1);
  out(0, 0) = loss;
  const size_t il = logit.index();
  return g.make_node(std::move(out), any_parent_needs({logit}),
                     [il, z, y](Graph& gg, const Matrix& go) {
                       const Scalar s =
                           z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
                       Matrix gx(1, 1);
                       gx(0, 0) = (s - y) * go(0, 0);
                       gg.accumulate(il, gx);
                     });
}

Var dropout(Var a, Scalar p, Rng* rng) {
  if (!rng || p <= 0.0) return a;
  Graph& g = common_graph("dropout", {a});
  if (p >= 1.0) op_error("dropout", "rate must be < 1");
  const Scalar keep = 1.0 - p;
  Matrix mask(a.rows(), a.cols());
  for (Index r = 0; r < mask.rows(); ++r)
    for (Index c = 0; c < mask.cols(); ++c)
      mask(r, c) = rng->uniform() < p ? 0.0 : 1.0 / keep;
  const size_t ia = a.index();
  return g.make_node(a.value().cwiseProduct(mask), any_parent_needs({a}),
                     [ia, mask](Graph& gg, const Matrix& go) {
                       gg.accumulate(ia, go.cwiseProduct(mask));
                     });
}

}  // namespace ironic::nn
