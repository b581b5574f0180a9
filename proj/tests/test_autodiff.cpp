// Gradient checks: every op's analytic backward against central finite
// differences, then composites and the full model losses on tiny shapes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "ironic/model/classifier.hpp"
#include "ironic/model/transformer.hpp"
#include "ironic/nn/graph.hpp"
#include "ironic/types.hpp"
#include "ironic/util/rng.hpp"
#include "ironic/vocab.hpp"

using namespace ironic;
using namespace ironic::model;
using nn::Graph;
using nn::Parameter;
using nn::ParameterSet;
using nn::Var;

namespace {

constexpr double kTol = 1e-4;   // relative error bound per entry
constexpr double kStep = 1e-5;  // central-difference step

Matrix random_matrix(Rng& rng, Index rows, Index cols, double scale = 1.0) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = scale * rng.normal();
  return m;
}

// Values bounded away from zero so ReLU's kink can't sit under the FD step.
Matrix random_offzero(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      m(r, c) = sign * rng.uniform(0.1, 1.5);
    }
  return m;
}

// Re-runs `build` from scratch for every probe, so the builder must be a pure
// function of the parameter values (dropout builders re-seed their own Rng).
using LossBuilder = std::function<Var(Graph&, std::vector<Parameter*>&)>;

struct WorstEntry {
  double err = 0.0;
  std::string where = "(none)";
};

WorstEntry check_gradients(const std::string& op, const std::vector<Matrix>& inits,
                           const LossBuilder& build) {
  ParameterSet ps;
  std::vector<Parameter*> ins;
  for (size_t i = 0; i < inits.size(); ++i) {
    Parameter& p = ps.create("in" + std::to_string(i), inits[i].rows(), inits[i].cols());
    p.value = inits[i];
    ins.push_back(&p);
  }

  ps.zero_grads();
  {
    Graph g;
    Var loss = build(g, ins);
    REQUIRE(loss.rows() == 1);
    REQUIRE(loss.cols() == 1);
    g.backward(loss);
  }

  auto eval = [&]() {
    Graph g;
    return build(g, ins).value()(0, 0);
  };

  WorstEntry worst;
  for (size_t i = 0; i < ins.size(); ++i) {
    Parameter& p = *ins[i];
    for (Index r = 0; r < p.value.rows(); ++r) {
      for (Index c = 0; c < p.value.cols(); ++c) {
        const double keep = p.value(r, c);
        p.value(r, c) = keep + kStep;
        const double up = eval();
        p.value(r, c) = keep - kStep;
        const double down = eval();
        p.value(r, c) = keep;
        const double numeric = (up - down) / (2.0 * kStep);
        const double analytic = p.grad(r, c);
        const double err = std::abs(numeric - analytic) /
                           std::max({1.0, std::abs(numeric), std::abs(analytic)});
        if (err > worst.err) {
          worst.err = err;
          worst.where = op + " input " + std::to_string(i) + " entry (" +
                        std::to_string(r) + "," + std::to_string(c) + ")";
        }
      }
    }
  }
  return worst;
}

void expect_grads_ok(const std::string& op, const std::vector<Matrix>& inits,
                     const LossBuilder& build) {
  WorstEntry w = check_gradients(op, inits, build);
  CAPTURE(w.where);
  REQUIRE(w.err < kTol);
}

// Weights the op output by a fixed random matrix before summing, so backward
// sees a non-uniform upstream gradient (uniform ones hide transpose bugs).
Var weighted_sum(Graph& g, Var v, const Matrix& w) {
  return nn::sum_all(nn::hadamard(v, g.constant(w)));
}

constexpr int kInstances = 20;

}  // namespace

TEST_CASE("gradcheck: elementwise arithmetic") {
  for (int s = 0; s < kInstances; ++s) {
    Rng rng(1000 + s);
    const Index rows = 1 + static_cast<Index>(rng.below(4));
    const Index cols = 1 + static_cast<Index>(rng.below(4));
    const Matrix a = random_matrix(rng, rows, cols);
    const Matrix b = random_matrix(rng, rows, cols);
    const Matrix w = random_matrix(rng, rows, cols);
    const double c = rng.uniform(-2.0, 2.0);

    expect_grads_ok("add", {a, b}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::add(g.param(*in[0]), g.param(*in[1])), w);
    });
    expect_grads_ok("sub", {a, b}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::sub(g.param(*in[0]), g.param(*in[1])), w);
    });
    expect_grads_ok("hadamard", {a, b}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::hadamard(g.param(*in[0]), g.param(*in[1])), w);
    });
    expect_grads_ok("scale", {a}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::scale(g.param(*in[0]), c), w);
    });

    const Matrix bias = random_matrix(rng, 1, cols);
    expect_grads_ok("add_rowvec", {a, bias}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::add_rowvec(g.param(*in[0]), g.param(*in[1])), w);
    });
  }
}

TEST_CASE("gradcheck: activations") {
  for (int s = 0; s < kInstances; ++s) {
    Rng rng(2000 + s);
    const Index rows = 1 + static_cast<Index>(rng.below(4));
    const Index cols = 1 + static_cast<Index>(rng.below(4));
    const Matrix w = random_matrix(rng, rows, cols);
    const Matrix off = random_offzero(rng, rows, cols);
    const Matrix a = random_matrix(rng, rows, cols);

    expect_grads_ok("relu", {off}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::relu(g.param(*in[0])), w);
    });
    expect_grads_ok("sigmoid", {a}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::sigmoid(g.param(*in[0])), w);
    });
    expect_grads_ok("tanh", {a}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::tanh_act(g.param(*in[0])), w);
    });
    expect_grads_ok("exp", {a}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::exp_elem(g.param(*in[0])), w);
    });
  }
}

TEST_CASE("gradcheck: matrix products") {
  for (int s = 0; s < kInstances; ++s) {
    Rng rng(3000 + s);
    const Index m = 1 + static_cast<Index>(rng.below(4));
    const Index k = 1 + static_cast<Index>(rng.below(4));
    const Index n = 1 + static_cast<Index>(rng.below(4));
    const Matrix a = random_matrix(rng, m, k);
    const Matrix b = random_matrix(rng, k, n);
    const Matrix bt = random_matrix(rng, n, k);
    const Matrix w = random_matrix(rng, m, n);

    expect_grads_ok("matmul", {a, b}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::matmul(g.param(*in[0]), g.param(*in[1])), w);
    });
    expect_grads_ok("matmul_nt", {a, bt}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::matmul_nt(g.param(*in[0]), g.param(*in[1])), w);
    });
  }
}

TEST_CASE("gradcheck: softmax and layer norm") {
  for (int s = 0; s < kInstances; ++s) {
    Rng rng(4000 + s);
    const Index rows = 1 + static_cast<Index>(rng.below(3));
    const Index cols = 2 + static_cast<Index>(rng.below(4));
    const Matrix a = random_matrix(rng, rows, cols);
    const Matrix w = random_matrix(rng, rows, cols);

    expect_grads_ok("softmax_rows", {a}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::softmax_rows(g.param(*in[0])), w);
    });

    Matrix mask = Matrix::Zero(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols - 1; ++c)  // keep one live logit per row
        if (rng.uniform() < 0.4) mask(r, c) = -4.0;
    expect_grads_ok("softmax_rows_masked", {a}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::softmax_rows_masked(g.param(*in[0]), mask), w);
    });

    const Matrix gain = random_matrix(rng, 1, cols);
    const Matrix bias = random_matrix(rng, 1, cols);
    expect_grads_ok("layer_norm_rows", {a, gain, bias}, [&](Graph& g, auto& in) {
      return weighted_sum(
          g, nn::layer_norm_rows(g.param(*in[0]), g.param(*in[1]), g.param(*in[2])), w);
    });
  }
}

TEST_CASE("gradcheck: embedding, convolution, pooling") {
  for (int s = 0; s < kInstances; ++s) {
    Rng rng(5000 + s);

    const Index vocab = 4 + static_cast<Index>(rng.below(4));
    const Index dim = 2 + static_cast<Index>(rng.below(3));
    const Matrix table = random_matrix(rng, vocab, dim);
    std::vector<int> ids;
    const int len = 3 + static_cast<int>(rng.below(4));
    for (int i = 0; i < len; ++i) ids.push_back(static_cast<int>(rng.below(vocab)));
    ids.push_back(ids.front());  // a repeat, so scatter-add accumulation is hit
    const Matrix we = random_matrix(rng, static_cast<Index>(ids.size()), dim);
    expect_grads_ok("embedding_rows", {table}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::embedding_rows(g, *in[0], ids), we);
    });

    const int width = 2 + static_cast<int>(rng.below(2));
    const Index length = width + 1 + static_cast<Index>(rng.below(3));
    const Index maps = 1 + static_cast<Index>(rng.below(3));
    const Matrix x = random_matrix(rng, length, dim);
    const Matrix cw = random_matrix(rng, width * dim, maps, 0.7);
    const Matrix cb = random_matrix(rng, 1, maps);
    const Matrix wc = random_matrix(rng, length - width + 1, maps);
    expect_grads_ok("conv1d_text", {x, cw, cb}, [&](Graph& g, auto& in) {
      return weighted_sum(
          g, nn::conv1d_text(g.param(*in[0]), g.param(*in[1]), g.param(*in[2]), width), wc);
    });

    const Matrix pool_in = random_matrix(rng, 3 + static_cast<Index>(rng.below(3)), maps, 2.0);
    const Matrix wp = random_matrix(rng, 1, maps);
    expect_grads_ok("max_over_time", {pool_in}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::max_over_time(g.param(*in[0])), wp);
    });
  }
}

TEST_CASE("gradcheck: concatenation and slicing") {
  for (int s = 0; s < kInstances; ++s) {
    Rng rng(6000 + s);
    const Index rows = 1 + static_cast<Index>(rng.below(3));
    const Index c1 = 1 + static_cast<Index>(rng.below(3));
    const Index c2 = 1 + static_cast<Index>(rng.below(3));
    const Index c3 = 1 + static_cast<Index>(rng.below(3));
    const Matrix a = random_matrix(rng, rows, c1);
    const Matrix b = random_matrix(rng, rows, c2);
    const Matrix c = random_matrix(rng, rows, c3);
    const Matrix w = random_matrix(rng, rows, c1 + c2 + c3);

    expect_grads_ok("concat_cols", {a, b, c}, [&](Graph& g, auto& in) {
      return weighted_sum(
          g, nn::concat_cols({g.param(*in[0]), g.param(*in[1]), g.param(*in[2])}), w);
    });

    const Index total = c1 + c2 + c3;
    const Index c0 = static_cast<Index>(rng.below(total));
    const Index n = 1 + static_cast<Index>(rng.below(total - c0));
    const Matrix big = random_matrix(rng, rows, total);
    const Matrix ws = random_matrix(rng, rows, n);
    expect_grads_ok("slice_cols", {big}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::slice_cols(g.param(*in[0]), c0, n), ws);
    });

    const Index r = static_cast<Index>(rng.below(rows));
    const Matrix wr = random_matrix(rng, 1, total);
    expect_grads_ok("row", {big}, [&](Graph& g, auto& in) {
      return weighted_sum(g, nn::row(g.param(*in[0]), r), wr);
    });
  }
}

TEST_CASE("gradcheck: reductions and losses") {
  for (int s = 0; s < kInstances; ++s) {
    Rng rng(7000 + s);
    const Index rows = 1 + static_cast<Index>(rng.below(4));
    const Index cols = 1 + static_cast<Index>(rng.below(4));
    const Matrix a = random_matrix(rng, rows, cols);
    const Matrix b = random_matrix(rng, rows, cols);

    expect_grads_ok("sum_all", {a}, [&](Graph& g, auto& in) {
      return nn::sum_all(g.param(*in[0]));
    });
    expect_grads_ok("mean_all", {a}, [&](Graph& g, auto& in) {
      return nn::mean_all(g.param(*in[0]));
    });
    expect_grads_ok("add_scalars", {a, b}, [&](Graph& g, auto& in) {
      return nn::add_scalars({nn::sum_all(g.param(*in[0])), nn::mean_all(g.param(*in[1])),
                              nn::sum_all(nn::hadamard(g.param(*in[0]), g.param(*in[1])))});
    });

    const Index len = 1 + static_cast<Index>(rng.below(4));
    const Index vocab = 3 + static_cast<Index>(rng.below(5));
    const Matrix logits = random_matrix(rng, len, vocab, 1.5);
    std::vector<int> targets;
    for (Index i = 0; i < len; ++i) targets.push_back(static_cast<int>(rng.below(vocab)));
    expect_grads_ok("cross_entropy_rows", {logits}, [&](Graph& g, auto& in) {
      return nn::cross_entropy_rows(g.param(*in[0]), targets);
    });

    const Matrix logit = random_matrix(rng, 1, 1, 2.0);
    for (double y : {0.0, 1.0, 0.5}) {
      expect_grads_ok("bce_with_logits", {logit}, [&](Graph& g, auto& in) {
        return nn::bce_with_logits(g.param(*in[0]), y);
      });
    }
  }
}

TEST_CASE("gradcheck: dropout with a replayed mask") {
  for (int s = 0; s < kInstances; ++s) {
    Rng rng(8000 + s);
    const Index rows = 2 + static_cast<Index>(rng.below(3));
    const Index cols = 2 + static_cast<Index>(rng.below(3));
    const Matrix a = random_matrix(rng, rows, cols);
    const Matrix w = random_matrix(rng, rows, cols);
    const uint64_t mask_seed = 97 + s;

    // A fresh Rng per forward pass replays the same mask, so the builder
    // stays a fixed differentiable function across FD probes.
    expect_grads_ok("dropout", {a}, [&](Graph& g, auto& in) {
      Rng mask_rng(mask_seed);
      return weighted_sum(g, nn::dropout(g.param(*in[0]), 0.4, &mask_rng), w);
    });
  }
}

TEST_CASE("dropout semantics: inactive paths and inverted scaling") {
  Rng rng(42);
  const Matrix a = random_matrix(rng, 4, 6);

  ParameterSet ps;
  Parameter& p = ps.create("a", 4, 6);
  p.value = a;

  Graph g;
  Var plain = nn::dropout(g.param(p), 0.5, nullptr);  // no rng: identity
  CHECK(plain.value() == a);

  Rng r1(7), r2(7), r3(8);
  Graph g2;
  Matrix m1 = nn::dropout(g2.param(p), 0.5, &r1).value();
  Matrix m2 = nn::dropout(g2.param(p), 0.5, &r2).value();
  Matrix m3 = nn::dropout(g2.param(p), 0.5, &r3).value();
  CHECK(m1 == m2);        // same seed, same mask
  CHECK_FALSE(m1 == m3);  // different seed, different mask

  // Surviving entries are scaled by 1/(1-p); the rest are zero.
  int kept = 0;
  for (Index r = 0; r < m1.rows(); ++r)
    for (Index c = 0; c < m1.cols(); ++c) {
      if (m1(r, c) == 0.0) continue;
      ++kept;
      CHECK(m1(r, c) == doctest::Approx(a(r, c) * 2.0));
    }
  CHECK(kept > 0);
  CHECK(kept < m1.size());
}

TEST_CASE("gradcheck: composite blocks") {
  for (int s = 0; s < 5; ++s) {
    Rng rng(9000 + s);
    const Index batch = 3;
    const Index dim = 4;
    const Index hidden = 5;
    const Index vocab = 6;

    const Matrix x = random_matrix(rng, batch, dim);
    const Matrix w1 = random_matrix(rng, dim, hidden, 0.6);
    const Matrix b1 = random_matrix(rng, 1, hidden, 0.3);
    const Matrix gain = Matrix::Ones(1, hidden) + random_matrix(rng, 1, hidden, 0.1);
    const Matrix beta = random_matrix(rng, 1, hidden, 0.1);
    const Matrix w2 = random_matrix(rng, hidden, vocab, 0.6);
    std::vector<int> targets;
    for (Index i = 0; i < batch; ++i) targets.push_back(static_cast<int>(rng.below(vocab)));

    expect_grads_ok("mlp chain", {x, w1, b1, gain, beta, w2}, [&](Graph& g, auto& in) {
      Var h = nn::tanh_act(nn::add_rowvec(nn::matmul(g.param(*in[0]), g.param(*in[1])),
                                          g.param(*in[2])));
      h = nn::layer_norm_rows(h, g.param(*in[3]), g.param(*in[4]));
      return nn::cross_entropy_rows(nn::matmul(h, g.param(*in[5])), targets);
    });

    // Single-head causal attention assembled from the primitive ops.
    const Index len = 4;
    const Matrix q = random_matrix(rng, len, dim, 0.8);
    const Matrix k = random_matrix(rng, len, dim, 0.8);
    const Matrix v = random_matrix(rng, len, dim, 0.8);
    const Matrix wa = random_matrix(rng, len, dim);
    Matrix causal = Matrix::Zero(len, len);
    for (Index r = 0; r < len; ++r)
      for (Index c = r + 1; c < len; ++c) causal(r, c) = -1e9;

    expect_grads_ok("attention block", {q, k, v}, [&](Graph& g, auto& in) {
      Var scores = nn::scale(nn::matmul_nt(g.param(*in[0]), g.param(*in[1])),
                             1.0 / std::sqrt(static_cast<double>(dim)));
      Var attn = nn::softmax_rows_masked(scores, causal);
      return weighted_sum(g, nn::matmul(attn, g.param(*in[2])), wa);
    });
  }
}

TEST_CASE("gradcheck: full sequence loss through the dual model") {
  TransformerConfig mc;
  mc.vocab_size = 12;
  mc.model_dim = 8;
  mc.n_heads = 2;
  mc.ffn_dim = 12;
  mc.n_layers = 2;
  mc.n_shared = 1;
  mc.max_len = 8;
  mc.seed = 5;
  DualSeq2Seq model(mc);

  const std::vector<int> src = {7, 9, 4, Vocabulary::kEos};
  const std::vector<int> tgt = {6, 10, 8, Vocabulary::kEos};

  model.params().zero_grads();
  {
    Graph g;
    Var loss = model.sequence_nll(g, src, Style::non_irony, tgt, Style::irony);
    g.backward(loss);
  }

  auto eval = [&]() {
    Graph g;
    return model.sequence_nll(g, src, Style::non_irony, tgt, Style::irony).value()(0, 0);
  };

  // Probing every weight would be slow; a seeded sample across all tensors
  // still visits every layer type in the stack.
  Rng pick(31);
  int probed = 0;
  double worst = 0.0;
  std::string worst_at = "(none)";
  for (const auto& p : model.params().all()) {
    if (!p->trainable) continue;
    const int n = static_cast<int>(std::min<Index>(p->value.size(), 4));
    for (int i = 0; i < n; ++i) {
      const Index r = static_cast<Index>(pick.below(static_cast<uint64_t>(p->value.rows())));
      const Index c = static_cast<Index>(pick.below(static_cast<uint64_t>(p->value.cols())));
      const double keep = p->value(r, c);
      p->value(r, c) = keep + kStep;
      const double up = eval();
      p->value(r, c) = keep - kStep;
      const double down = eval();
      p->value(r, c) = keep;
      const double numeric = (up - down) / (2.0 * kStep);
      const double analytic = p->grad(r, c);
      const double err = std::abs(numeric - analytic) /
                         std::max({1.0, std::abs(numeric), std::abs(analytic)});
      if (err > worst) {
        worst = err;
        worst_at = p->name;
      }
      ++probed;
    }
  }
  CAPTURE(worst_at);
  CHECK(probed > 100);
  REQUIRE(worst < kTol);
}

TEST_CASE("gradcheck: classifier logits") {
  const std::vector<int> ids = {4, 7, 5, 9, 6, 8, Vocabulary::kEos};

  auto probe_model = [&](nn::ParameterSet& params, const std::function<double()>& eval,
                         const std::function<void()>& backward) {
    params.zero_grads();
    backward();
    Rng pick(13);
    double worst = 0.0;
    std::string worst_at = "(none)";
    for (const auto& p : params.all()) {
      if (!p->trainable) continue;
      const int n = static_cast<int>(std::min<Index>(p->value.size(), 4));
      for (int i = 0; i < n; ++i) {
        const Index r = static_cast<Index>(pick.below(static_cast<uint64_t>(p->value.rows())));
        const Index c = static_cast<Index>(pick.below(static_cast<uint64_t>(p->value.cols())));
        const double keep = p->value(r, c);
        p->value(r, c) = keep + kStep;
        const double up = eval();
        p->value(r, c) = keep - kStep;
        const double down = eval();
        p->value(r, c) = keep;
        const double numeric = (up - down) / (2.0 * kStep);
        const double analytic = p->grad(r, c);
        const double err = std::abs(numeric - analytic) /
                           std::max({1.0, std::abs(numeric), std::abs(analytic)});
        if (err > worst) {
          worst = err;
          worst_at = p->name;
        }
      }
    }
    CAPTURE(worst_at);
    REQUIRE(worst < kTol);
  };

  SUBCASE("convolutional") {
    ConvTextClassifier::Config cc;
    cc.vocab_size = 12;
    cc.embed_dim = 6;
    cc.widths = {2, 3};
    cc.maps_per_width = 4;
    cc.dropout = 0.0;
    cc.seed = 3;
    ConvTextClassifier clf(cc);
    auto eval = [&]() {
      Graph g;
      return nn::bce_with_logits(clf.score_logit_graph(g, ids, nullptr), 1.0).value()(0, 0);
    };
    probe_model(clf.params(), eval, [&]() {
      Graph g;
      g.backward(nn::bce_with_logits(clf.score_logit_graph(g, ids, nullptr), 1.0));
    });
  }

  SUBCASE("recurrent") {
    RecurrentTextClassifier::Config rc;
    rc.vocab_size = 12;
    rc.embed_dim = 6;
    rc.hidden_dim = 5;
    rc.seed = 4;
    RecurrentTextClassifier clf(rc);
    auto eval = [&]() {
      Graph g;
      return nn::bce_with_logits(clf.score_logit_graph(g, ids, nullptr), 0.0).value()(0, 0);
    };
    probe_model(clf.params(), eval, [&]() {
      Graph g;
      g.backward(nn::bce_with_logits(clf.score_logit_graph(g, ids, nullptr), 0.0));
    });
  }
}

TEST_CASE("graph plumbing: accumulation, constants, non-trainables") {
  ParameterSet ps;
  Parameter& p = ps.create("p", 2, 2);
  p.value << 1.0, 2.0, 3.0, 4.0;
  Parameter& frozen = ps.create("frozen", 2, 2, /*trainable=*/false);
  frozen.value = Matrix::Ones(2, 2);

  SUBCASE("gradients accumulate across graphs until zeroed") {
    ps.zero_grads();
    for (int pass = 0; pass < 2; ++pass) {
      Graph g;
      g.backward(nn::sum_all(g.param(p)));
    }
    CHECK(p.grad == Matrix::Constant(2, 2, 2.0));
    ps.zero_grads();
    CHECK(p.grad == Matrix::Zero(2, 2));
  }

  SUBCASE("two uses of one parameter in a single graph add up") {
    ps.zero_grads();
    Graph g;
    Var v = g.param(p);
    g.backward(nn::sum_all(nn::add(v, v)));
    CHECK(p.grad == Matrix::Constant(2, 2, 2.0));
  }

  SUBCASE("constants and frozen parameters receive nothing") {
    ps.zero_grads();
    Graph g;
    Var c = g.constant(Matrix::Ones(2, 2));
    Var out = nn::hadamard(nn::add(g.param(frozen), c), g.param(p));
    g.backward(nn::sum_all(out));
    CHECK(frozen.grad.isZero());
    CHECK(p.grad == Matrix::Constant(2, 2, 2.0));
  }

  SUBCASE("a loss with no trainable inputs backpropagates into nothing") {
    Graph g;
    Var c = g.constant(Matrix::Ones(1, 3));
    CHECK_NOTHROW(g.backward(nn::sum_all(c)));
  }
}

TEST_CASE("ops reject mismatched shapes by name") {
  ParameterSet ps;
  Parameter& a23 = ps.create("a23", 2, 3);
  a23.value = Matrix::Ones(2, 3);
  Parameter& b22 = ps.create("b22", 2, 2);
  b22.value = Matrix::Ones(2, 2);

  Graph g;
  Var a = g.param(a23);
  Var b = g.param(b22);

  CHECK_THROWS_AS(nn::add(a, b), std::invalid_argument);
  CHECK_THROWS_AS(nn::matmul(a, b), std::invalid_argument);
  CHECK_THROWS_AS(nn::matmul_nt(a, b), std::invalid_argument);
  CHECK_THROWS_AS(nn::add_rowvec(a, b), std::invalid_argument);
  CHECK_THROWS_AS(nn::hadamard(a, b), std::invalid_argument);
  CHECK_THROWS_AS(nn::concat_cols({a, g.param(ps.create("r1", 1, 3))}),
                  std::invalid_argument);
  CHECK_THROWS_AS(nn::slice_cols(a, 2, 5), std::invalid_argument);
  CHECK_THROWS_AS(nn::row(a, 4), std::invalid_argument);
  CHECK_THROWS_AS(nn::cross_entropy_rows(a, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(nn::bce_with_logits(a, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(g.backward(a), std::invalid_argument);

  try {
    nn::matmul(a, b);
    FAIL("matmul should have thrown");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("matmul") != std::string::npos);
    CHECK(msg.find("2x3") != std::string::npos);
  }
}
