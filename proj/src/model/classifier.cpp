#include "ironic/model/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ironic/nn/checkpoint.hpp"
#include "ironic/vocab.hpp"

namespace ironic::model {

using nn::Graph;
using nn::Var;

// ---- TextClassifier ------------------------------------------------------

void TextClassifier::create_meta() {
  calib_ = &params_.create("calib.threshold", 1, 1, /*trainable=*/false);
  calib_->value(0, 0) = 0.5;
  meta_trained_ = &params_.create("meta.trained", 1, 1, /*trainable=*/false);
}

bool TextClassifier::trained() const { return meta_trained_->value(0, 0) != 0.0; }

void TextClassifier::mark_trained() { meta_trained_->value(0, 0) = 1.0; }

double TextClassifier::threshold() const { return calib_->value(0, 0); }

void TextClassifier::set_threshold(double t) {
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("classifier threshold must lie in (0,1)");
  calib_->value(0, 0) = t;
}

double TextClassifier::score(const std::vector<int>& ids) {
  if (!trained()) throw std::logic_error("classifier not trained");
  Graph g;
  Var z = score_logit_graph(g, ids, nullptr);
  const Scalar x = z.value()(0, 0);
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

std::vector<double> TextClassifier::score_batch(const std::vector<std::vector<int>>& batch) {
  std::vector<double> out;
  out.reserve(batch.size());
  for (const auto& ids : batch) out.push_back(score(ids));
  return out;
}

// ---- ConvTextClassifier ---------------------------------------------------

ConvTextClassifier::ConvTextClassifier(const Config& cfg) : cfg_(cfg) {
  if (cfg_.vocab_size < 1) throw std::invalid_argument("cnn: vocab_size must be positive");
  if (cfg_.widths.empty()) throw std::invalid_argument("cnn: no filter widths");
  Rng rng(cfg_.seed);
  embed_ = &params_.create("embed.table", cfg_.vocab_size, cfg_.embed_dim);
  for (Index r = 0; r < embed_->value.rows(); ++r)
    for (Index c = 0; c < embed_->value.cols(); ++c)
      embed_->value(r, c) = rng.uniform(-0.1, 0.1);
  for (int w : cfg_.widths) {
    auto& cw = params_.create("conv.w" + std::to_string(w),
                              static_cast<Index>(w) * cfg_.embed_dim, cfg_.maps_per_width);
    const Scalar sd = 1.0 / std::sqrt(static_cast<Scalar>(cw.value.rows()));
    for (Index r = 0; r < cw.value.rows(); ++r)
      for (Index c = 0; c < cw.value.cols(); ++c) cw.value(r, c) = rng.normal() * sd;
    conv_w_.push_back(&cw);
    conv_b_.push_back(&params_.create("conv.b" + std::to_string(w), 1, cfg_.maps_per_width));
  }
  const Index feat = static_cast<Index>(cfg_.widths.size()) * cfg_.maps_per_width;
  out_w_ = &params_.create("out.w", feat, 1);
  const Scalar sd = 1.0 / std::sqrt(static_cast<Scalar>(feat));
  for (Index r = 0; r < feat; ++r) out_w_->value(r, 0) = rng.normal() * sd;
  out_b_ = &params_.create("out.b", 1, 1);
  create_meta();
}

Var ConvTextClassifier::score_logit_graph(Graph& g, const std::vector<int>& ids,
                                          Rng* dropout_rng) {
  if (ids.empty()) throw std::invalid_argument("cnn: empty input");
  std::vector<int> padded = ids;
  const int widest = *std::max_element(cfg_.widths.begin(), cfg_.widths.end());
  while (static_cast<int>(padded.size()) < widest) padded.push_back(Vocabulary::kPad);

  Var x = nn::embedding_rows(g, *embed_, padded);
  std::vector<Var> pooled;
  pooled.reserve(cfg_.widths.size());
  for (size_t i = 0; i < cfg_.widths.size(); ++i) {
    Var conv = nn::conv1d_text(x, g.param(*conv_w_[i]), g.param(*conv_b_[i]),
                               cfg_.widths[i]);
    pooled.push_back(nn::max_over_time(nn::relu(conv)));
  }
  Var feat = pooled.size() == 1 ? pooled[0] : nn::concat_cols(pooled);
  feat = nn::dropout(feat, cfg_.dropout, dropout_rng);
  return nn::add_rowvec(nn::matmul(feat, g.param(*out_w_)), g.param(*out_b_));
}

// ---- RecurrentTextClassifier ----------------------------------------------

RecurrentTextClassifier::RecurrentTextClassifier(const Config& cfg) : cfg_(cfg) {
  if (cfg_.vocab_size < 1) throw std::invalid_argument("lstm: vocab_size must be positive");
  Rng rng(cfg_.seed);
  embed_ = &params_.create("embed.table", cfg_.vocab_size, cfg_.embed_dim);
  for (Index r = 0; r < embed_->value.rows(); ++r)
    for (Index c = 0; c < embed_->value.cols(); ++c)
      embed_->value(r, c) = rng.uniform(-0.1, 0.1);

  const Index h = cfg_.hidden_dim;
  auto init = [&rng](nn::Parameter& p) {
    const Scalar sd = 1.0 / std::sqrt(static_cast<Scalar>(p.value.rows()));
    for (Index r = 0; r < p.value.rows(); ++r)
      for (Index c = 0; c < p.value.cols(); ++c) p.value(r, c) = rng.normal() * sd;
  };
  w_ = &params_.create("lstm.w", cfg_.embed_dim, 4 * h);
  init(*w_);
  u_ = &params_.create("lstm.u", h, 4 * h);
  init(*u_);
  b_ = &params_.create("lstm.b", 1, 4 * h);
  b_->value.block(0, h, 1, h).setOnes();  // forget-gate bias starts open
  out_w_ = &params_.create("out.w", h, 1);
  init(*out_w_);
  out_b_ = &params_.create("out.b", 1, 1);
  create_meta();
}

Var RecurrentTextClassifier::score_logit_graph(Graph& g, const std::vector<int>& ids,
                                               Rng* /*dropout_rng*/) {
  if (ids.empty()) throw std::invalid_argument("lstm: empty input");
  const Index hd = cfg_.hidden_dim;
  Var x = nn::embedding_rows(g, *embed_, ids);
  Var wv = g.param(*w_);
  Var uv = g.param(*u_);
  Var bv = g.param(*b_);
  Var h = g.constant(Matrix::Zero(1, hd));
  Var c = g.constant(Matrix::Zero(1, hd));
  for (size_t t = 0; t < ids.size(); ++t) {
    Var xt = nn::row(x, static_cast<Index>(t));
    Var z = nn::add_rowvec(nn::add(nn::matmul(xt, wv), nn::matmul(h, uv)), bv);
    Var gi = nn::sigmoid(nn::slice_cols(z, 0, hd));
    Var gf = nn::sigmoid(nn::slice_cols(z, hd, hd));
    Var go = nn::sigmoid(nn::slice_cols(z, 2 * hd, hd));
    Var gg = nn::tanh_act(nn::slice_cols(z, 3 * hd, hd));
    c = nn::add(nn::hadamard(gf, c), nn::hadamard(gi, gg));
    h = nn::hadamard(go, nn::tanh_act(c));
  }
  return nn::add_rowvec(nn::matmul(h, g.param(*out_w_)), g.param(*out_b_));
}

// ---- training --------------------------------------------------------------

ClassifierTrainReport train_classifier(TextClassifier& model,
                                       const std::vector<LabeledExample>& corpus,
                                       int epochs, uint64_t seed,
                                       const ClassifierTrainOptions& opt) {
  if (corpus.empty()) throw std::invalid_argument("train_classifier: empty corpus");
  std::vector<size_t> pos, neg;
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].label != 0 && corpus[i].label != 1)
      throw std::invalid_argument("train_classifier: labels must be 0 or 1");
    (corpus[i].label == 1 ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty())
    throw std::invalid_argument("train_classifier: single-class corpus");
  if (pos.size() < 2 || neg.size() < 2) {
    std::ostringstream os;
    os << "train_classifier: need >= 2 examples per class (have " << neg.size()
       << " negative, " << pos.size() << " positive)";
    throw std::invalid_argument(os.str());
  }

  // stratified holdout
  Rng split_rng(derive_seed(seed, "clf-split"));
  split_rng.shuffle(pos);
  split_rng.shuffle(neg);
  std::vector<size_t> train_idx, val_idx;
  auto take = [&](std::vector<size_t>& cls) {
    size_t nv = std::max<size_t>(1, static_cast<size_t>(opt.holdout_fraction *
                                                        static_cast<double>(cls.size())));
    if (nv >= cls.size()) nv = cls.size() - 1;
    for (size_t i = 0; i < cls.size(); ++i)
      (i < nv ? val_idx : train_idx).push_back(cls[i]);
  };
  take(pos);
  take(neg);

  nn::Adam adam({.lr = opt.lr});
  Rng order_rng(derive_seed(seed, "clf-order"));
  Rng dropout_rng(derive_seed(seed, "clf-dropout"));
  const int bs = std::max(1, opt.batch_size);

  for (int e = 0; e < epochs; ++e) {
    order_rng.shuffle(train_idx);
    for (size_t start = 0; start < train_idx.size(); start += bs) {
      const size_t end = std::min(train_idx.size(), start + bs);
      Graph g;
      std::vector<Var> losses;
      losses.reserve(end - start);
      for (size_t k = start; k < end; ++k) {
        const LabeledExample& ex = corpus[train_idx[k]];
        Var z = model.score_logit_graph(g, ex.ids, &dropout_rng);
        losses.push_back(nn::bce_with_logits(z, static_cast<Scalar>(ex.label)));
      }
      Var loss = nn::scale(nn::add_scalars(losses), 1.0 / static_cast<Scalar>(losses.size()));
      model.params().zero_grads();
      g.backward(loss);
      adam.step(model.params());
    }
  }
  model.mark_trained();

  int correct = 0;
  for (size_t i : val_idx) {
    const double s = model.score(corpus[i].ids);
    const int pred = s >= 0.5 ? 1 : 0;
    if (pred == corpus[i].label) ++correct;
  }

  ClassifierTrainReport rep;
  rep.val_accuracy = static_cast<double>(correct) / static_cast<double>(val_idx.size());
  rep.epochs = epochs;
  rep.train_examples = static_cast<int>(train_idx.size());
  rep.val_examples = static_cast<int>(val_idx.size());
  return rep;
}

// ---- threshold calibration --------------------------------------------------

namespace {

double balanced_accuracy(const std::vector<std::pair<double, int>>& scored, double th) {
  long tp = 0, fn = 0, tn = 0, fp = 0;
  for (const auto& [s, y] : scored) {
    const int pred = s >= th ? 1 : 0;
    if (y == 1)
      (pred == 1 ? tp : fn) += 1;
    else
      (pred == 0 ? tn : fp) += 1;
  }
  const double tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double tnr = static_cast<double>(tn) / static_cast<double>(tn + fp);
  return 0.5 * (tpr + tnr);
}

}  // namespace

double calibrate_threshold(TextClassifier& model,
                           const std::vector<LabeledExample>& validation) {
  if (validation.empty()) throw std::invalid_argument("calibrate_threshold: empty set");
  bool has_pos = false, has_neg = false;
  std::vector<std::pair<double, int>> scored;
  scored.reserve(validation.size());
  for (const auto& ex : validation) {
    if (ex.label != 0 && ex.label != 1)
      throw std::invalid_argument("calibrate_threshold: labels must be 0 or 1");
    (ex.label == 1 ? has_pos : has_neg) = true;
    scored.emplace_back(model.score(ex.ids), ex.label);
  }
  if (!has_pos || !has_neg)
    throw std::invalid_argument("calibrate_threshold: validation set lacks a class");

  std::vector<double> s;
  s.reserve(scored.size());
  for (const auto& [sc, y] : scored) s.push_back(sc);
  std::sort(s.begin(), s.end());
  std::set<double> candidates = {0.5};
  for (size_t i = 0; i + 1 < s.size(); ++i) candidates.insert(0.5 * (s[i] + s[i + 1]));

  double best_th = 0.5, best_ba = -1.0;
  for (double th : candidates) {
    const double ba = balanced_accuracy(scored, th);
    bool better = ba > best_ba + 1e-12;
    if (!better && std::abs(ba - best_ba) <= 1e-12) {
      const double d_new = std::abs(th - 0.5), d_old = std::abs(best_th - 0.5);
      better = d_new < d_old - 1e-12 ||
               (std::abs(d_new - d_old) <= 1e-12 && th < best_th);
    }
    if (better) {
      best_ba = ba;
      best_th = th;
    }
  }
  return best_th;
}

// ---- checkpoint round-trip ---------------------------------------------------

std::unique_ptr<TextClassifier> load_classifier(const std::string& path) {
  auto raw = nn::load_checkpoint_raw(path);
  Index vocab = 0, embed_dim = 0;
  bool has_lstm = false;
  std::vector<int> widths;
  Index maps = 0, hidden = 0;
  for (const auto& [name, m] : raw) {
    if (name == "embed.table") {
      vocab = m.rows();
      embed_dim = m.cols();
    } else if (name == "lstm.u") {
      has_lstm = true;
      hidden = m.rows();
    } else if (name.rfind("conv.w", 0) == 0) {
      widths.push_back(std::stoi(name.substr(6)));
      maps = m.cols();
    }
  }
  if (vocab == 0)
    throw std::runtime_error("'" + path + "' is not a classifier checkpoint");

  std::unique_ptr<TextClassifier> model;
  if (has_lstm) {
    RecurrentTextClassifier::Config c;
    c.vocab_size = static_cast<int>(vocab);
    c.embed_dim = static_cast<int>(embed_dim);
    c.hidden_dim = static_cast<int>(hidden);
    model = std::make_unique<RecurrentTextClassifier>(c);
  } else {
    if (widths.empty())
      throw std::runtime_error("'" + path + "' is not a classifier checkpoint");
    std::sort(widths.begin(), widths.end());
    ConvTextClassifier::Config c;
    c.vocab_size = static_cast<int>(vocab);
    c.embed_dim = static_cast<int>(embed_dim);
    c.widths = widths;
    c.maps_per_width = static_cast<int>(maps);
    model = std::make_unique<ConvTextClassifier>(c);
  }
  nn::load_checkpoint(path, model->params());
  return model;
}

}  // namespace ironic::model
