#include "ironic/model/transformer.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ironic/nn/checkpoint.hpp"
#include "ironic/vocab.hpp"

namespace ironic::model {

using nn::Graph;
using nn::Parameter;
using nn::Var;

namespace {

constexpr Scalar kMaskValue = -1e30;

Matrix sinusoidal_positions(int max_len, int dim) {
  Matrix p(max_len, dim);
  for (int pos = 0; pos < max_len; ++pos)
    for (int j = 0; j < dim; ++j) {
      const double angle = pos / std::pow(10000.0, (2.0 * (j / 2)) / dim);
      p(pos, j) = (j % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
  return p;
}

void init_linear(Parameter& w, Rng& rng) {
  const Scalar sd = 1.0 / std::sqrt(static_cast<Scalar>(w.value.rows()));
  for (Index r = 0; r < w.value.rows(); ++r)
    for (Index c = 0; c < w.value.cols(); ++c) w.value(r, c) = rng.normal() * sd;
}

}  // namespace

DualSeq2Seq::DualSeq2Seq(const TransformerConfig& cfg) : cfg_(cfg) {
  if (cfg_.vocab_size <= static_cast<int>(Vocabulary::kReservedCount))
    throw std::invalid_argument("transformer: vocab_size must exceed the reserved ids");
  if (cfg_.model_dim % cfg_.n_heads != 0)
    throw std::invalid_argument("transformer: model_dim must be divisible by n_heads");
  if (cfg_.n_shared < 0 || cfg_.n_shared > cfg_.n_layers)
    throw std::invalid_argument("transformer: n_shared outside [0, n_layers]");

  Rng rng(cfg_.seed);
  embed_ = &params_.create("embed.table", cfg_.vocab_size, cfg_.model_dim);
  for (Index r = 0; r < embed_->value.rows(); ++r)
    for (Index c = 0; c < embed_->value.cols(); ++c)
      embed_->value(r, c) = rng.uniform(-0.1, 0.1);

  positions_ = sinusoidal_positions(cfg_.max_len, cfg_.model_dim);

  const int own_enc = cfg_.n_layers - cfg_.n_shared;  // bottom layers are per-style
  enc_n_.resize(cfg_.n_layers);
  enc_i_.resize(cfg_.n_layers);
  for (int l = 0; l < own_enc; ++l)
    enc_n_[l] = make_enc_layer("enc.n.l" + std::to_string(l), rng);
  for (int l = 0; l < own_enc; ++l)
    enc_i_[l] = make_enc_layer("enc.i.l" + std::to_string(l), rng);
  for (int l = own_enc; l < cfg_.n_layers; ++l) {
    EncLayer shared = make_enc_layer("enc.sh.l" + std::to_string(l), rng);
    enc_n_[l] = shared;
    enc_i_[l] = shared;  // same Parameter pointers: physically shared storage
  }

  dec_n_.resize(cfg_.n_layers);
  dec_i_.resize(cfg_.n_layers);
  for (int l = 0; l < cfg_.n_shared; ++l) {  // bottom decoder layers shared
    DecLayer shared = make_dec_layer("dec.sh.l" + std::to_string(l), rng);
    dec_n_[l] = shared;
    dec_i_[l] = shared;
  }
  for (int l = cfg_.n_shared; l < cfg_.n_layers; ++l)
    dec_n_[l] = make_dec_layer("dec.n.l" + std::to_string(l), rng);
  for (int l = cfg_.n_shared; l < cfg_.n_layers; ++l)
    dec_i_[l] = make_dec_layer("dec.i.l" + std::to_string(l), rng);

  out_w_n_ = &params_.create("dec.n.out.w", cfg_.model_dim, cfg_.vocab_size);
  init_linear(*out_w_n_, rng);
  out_b_n_ = &params_.create("dec.n.out.b", 1, cfg_.vocab_size);
  out_w_i_ = &params_.create("dec.i.out.w", cfg_.model_dim, cfg_.vocab_size);
  init_linear(*out_w_i_, rng);
  out_b_i_ = &params_.create("dec.i.out.b", 1, cfg_.vocab_size);

  // architecture record so a checkpoint alone can rebuild the model
  auto& meta = params_.create("meta.model", 1, 7, /*trainable=*/false);
  meta.value << cfg_.vocab_size, cfg_.model_dim, cfg_.n_heads, cfg_.ffn_dim,
      cfg_.n_layers, cfg_.n_shared, cfg_.max_len;
}

DualSeq2Seq DualSeq2Seq::from_checkpoint(const std::string& path) {
  auto raw = nn::load_checkpoint_raw(path);
  const Matrix* meta = nullptr;
  for (const auto& [name, m] : raw)
    if (name == "meta.model") meta = &m;
  if (!meta || meta->rows() != 1 || meta->cols() != 7)
    throw std::runtime_error("'" + path + "' is not a transfer-model checkpoint");
  TransformerConfig cfg;
  cfg.vocab_size = static_cast<int>((*meta)(0, 0));
  cfg.model_dim = static_cast<int>((*meta)(0, 1));
  cfg.n_heads = static_cast<int>((*meta)(0, 2));
  cfg.ffn_dim = static_cast<int>((*meta)(0, 3));
  cfg.n_layers = static_cast<int>((*meta)(0, 4));
  cfg.n_shared = static_cast<int>((*meta)(0, 5));
  cfg.max_len = static_cast<int>((*meta)(0, 6));
  DualSeq2Seq model(cfg);
  nn::load_checkpoint(path, model.params());
  return model;
}

DualSeq2Seq::AttnParams DualSeq2Seq::make_attn(const std::string& prefix, Rng& rng) {
  const int d = cfg_.model_dim;
  AttnParams ap;
  ap.wq = &params_.create(prefix + ".wq", d, d);
  ap.bq = &params_.create(prefix + ".bq", 1, d);
  ap.wk = &params_.create(prefix + ".wk", d, d);
  ap.bk = &params_.create(prefix + ".bk", 1, d);
  ap.wv = &params_.create(prefix + ".wv", d, d);
  ap.bv = &params_.create(prefix + ".bv", 1, d);
  ap.wo = &params_.create(prefix + ".wo", d, d);
  ap.bo = &params_.create(prefix + ".bo", 1, d);
  init_linear(*ap.wq, rng);
  init_linear(*ap.wk, rng);
  init_linear(*ap.wv, rng);
  init_linear(*ap.wo, rng);
  return ap;
}

DualSeq2Seq::LnParams DualSeq2Seq::make_ln(const std::string& prefix) {
  LnParams ln;
  ln.g = &params_.create(prefix + ".g", 1, cfg_.model_dim);
  ln.g->value.setOnes();
  ln.b = &params_.create(prefix + ".b", 1, cfg_.model_dim);
  return ln;
}

DualSeq2Seq::FfnParams DualSeq2Seq::make_ffn(const std::string& prefix, Rng& rng) {
  FfnParams fp;
  fp.w1 = &params_.create(prefix + ".w1", cfg_.model_dim, cfg_.ffn_dim);
  fp.b1 = &params_.create(prefix + ".b1", 1, cfg_.ffn_dim);
  fp.w2 = &params_.create(prefix + ".w2", cfg_.ffn_dim, cfg_.model_dim);
  fp.b2 = &params_.create(prefix + ".b2", 1, cfg_.model_dim);
  init_linear(*fp.w1, rng);
  init_linear(*fp.w2, rng);
  return fp;
}

DualSeq2Seq::EncLayer DualSeq2Seq::make_enc_layer(const std::string& prefix, Rng& rng) {
  EncLayer l;
  l.self = make_attn(prefix + ".attn", rng);
  l.ln1 = make_ln(prefix + ".ln1");
  l.ffn = make_ffn(prefix + ".ffn", rng);
  l.ln2 = make_ln(prefix + ".ln2");
  return l;
}

DualSeq2Seq::DecLayer DualSeq2Seq::make_dec_layer(const std::string& prefix, Rng& rng) {
  DecLayer l;
  l.self = make_attn(prefix + ".attn", rng);
  l.ln1 = make_ln(prefix + ".ln1");
  l.cross = make_attn(prefix + ".xattn", rng);
  l.ln2 = make_ln(prefix + ".ln2");
  l.ffn = make_ffn(prefix + ".ffn", rng);
  l.ln3 = make_ln(prefix + ".ln3");
  return l;
}

Var DualSeq2Seq::attention(Graph& g, const AttnParams& ap, Var q_in, Var kv_in,
                           bool causal) {
  const int dk = cfg_.model_dim / cfg_.n_heads;
  Var q = nn::add_rowvec(nn::matmul(q_in, g.param(*ap.wq)), g.param(*ap.bq));
  Var k = nn::add_rowvec(nn::matmul(kv_in, g.param(*ap.wk)), g.param(*ap.bk));
  Var v = nn::add_rowvec(nn::matmul(kv_in, g.param(*ap.wv)), g.param(*ap.bv));

  Matrix mask;
  if (causal) {
    mask = Matrix::Zero(q.rows(), k.rows());
    for (Index r = 0; r < mask.rows(); ++r)
      for (Index c = r + 1; c < mask.cols(); ++c) mask(r, c) = kMaskValue;
  }

  std::vector<Var> heads;
  heads.reserve(cfg_.n_heads);
  for (int h = 0; h < cfg_.n_heads; ++h) {
    Var qh = nn::slice_cols(q, static_cast<Index>(h) * dk, dk);
    Var kh = nn::slice_cols(k, static_cast<Index>(h) * dk, dk);
    Var vh = nn::slice_cols(v, static_cast<Index>(h) * dk, dk);
    Var scores = nn::scale(nn::matmul_nt(qh, kh), 1.0 / std::sqrt(static_cast<Scalar>(dk)));
    Var probs = causal ? nn::softmax_rows_masked(scores, mask) : nn::softmax_rows(scores);
    heads.push_back(nn::matmul(probs, vh));
  }
  Var merged = cfg_.n_heads == 1 ? heads[0] : nn::concat_cols(heads);
  return nn::add_rowvec(nn::matmul(merged, g.param(*ap.wo)), g.param(*ap.bo));
}

Var DualSeq2Seq::ffn_block(Graph& g, const FfnParams& fp, Var x) {
  Var h = nn::relu(nn::add_rowvec(nn::matmul(x, g.param(*fp.w1)), g.param(*fp.b1)));
  return nn::add_rowvec(nn::matmul(h, g.param(*fp.w2)), g.param(*fp.b2));
}

Var DualSeq2Seq::enc_layer_fwd(Graph& g, const EncLayer& l, Var x) {
  x = nn::layer_norm_rows(nn::add(x, attention(g, l.self, x, x, false)),
                          g.param(*l.ln1.g), g.param(*l.ln1.b));
  x = nn::layer_norm_rows(nn::add(x, ffn_block(g, l.ffn, x)), g.param(*l.ln2.g),
                          g.param(*l.ln2.b));
  return x;
}

Var DualSeq2Seq::dec_layer_fwd(Graph& g, const DecLayer& l, Var x, Var latent) {
  x = nn::layer_norm_rows(nn::add(x, attention(g, l.self, x, x, true)),
                          g.param(*l.ln1.g), g.param(*l.ln1.b));
  x = nn::layer_norm_rows(nn::add(x, attention(g, l.cross, x, latent, false)),
                          g.param(*l.ln2.g), g.param(*l.ln2.b));
  x = nn::layer_norm_rows(nn::add(x, ffn_block(g, l.ffn, x)), g.param(*l.ln3.g),
                          g.param(*l.ln3.b));
  return x;
}

Var DualSeq2Seq::embed_with_positions(Graph& g, const std::vector<int>& ids) {
  Var e = nn::embedding_rows(g, *embed_, ids);
  Var pos = g.constant(positions_.topRows(static_cast<Index>(ids.size())));
  return nn::add(e, pos);
}

Var DualSeq2Seq::encode_graph(Graph& g, const std::vector<int>& src, Style enc_style) {
  if (src.empty()) throw std::invalid_argument("encode: empty source");
  if (static_cast<int>(src.size()) > cfg_.max_len) {
    std::ostringstream os;
    os << "encode: source length " << src.size() << " exceeds max_len " << cfg_.max_len;
    throw std::invalid_argument(os.str());
  }
  Var x = embed_with_positions(g, src);
  const auto& stack = (enc_style == Style::non_irony) ? enc_n_ : enc_i_;
  for (const EncLayer& l : stack) x = enc_layer_fwd(g, l, x);
  return x;
}

Var DualSeq2Seq::prefix_logits(Graph& g, Var latent, const std::vector<int>& input_ids,
                               Style dec_style) {
  Var y = embed_with_positions(g, input_ids);
  const auto& stack = (dec_style == Style::non_irony) ? dec_n_ : dec_i_;
  for (const DecLayer& l : stack) y = dec_layer_fwd(g, l, y, latent);
  Parameter* ow = (dec_style == Style::non_irony) ? out_w_n_ : out_w_i_;
  Parameter* ob = (dec_style == Style::non_irony) ? out_b_n_ : out_b_i_;
  return nn::add_rowvec(nn::matmul(y, g.param(*ow)), g.param(*ob));
}

Var DualSeq2Seq::decoder_logits(Graph& g, Var latent, const std::vector<int>& tgt,
                                Style dec_style) {
  if (tgt.empty()) throw std::invalid_argument("decoder_logits: empty target");
  if (static_cast<int>(tgt.size()) > cfg_.max_len) {
    std::ostringstream os;
    os << "decoder_logits: target length " << tgt.size() << " exceeds max_len "
       << cfg_.max_len;
    throw std::invalid_argument(os.str());
  }
  std::vector<int> input;
  input.reserve(tgt.size());
  input.push_back(Vocabulary::kBos);
  input.insert(input.end(), tgt.begin(), tgt.end() - 1);
  return prefix_logits(g, latent, input, dec_style);
}

Var DualSeq2Seq::sequence_nll(Graph& g, const std::vector<int>& src, Style enc_style,
                              const std::vector<int>& tgt, Style dec_style,
                              const std::vector<int>* dec_input) {
  if (dec_input && dec_input->size() != tgt.size())
    throw std::invalid_argument("sequence_nll: decoder input length mismatch");
  Var latent = encode_graph(g, src, enc_style);
  // the last entry of the prefix source never reaches the decoder input, so
  // scoring tgt against logits built from dec_input stays aligned
  Var logits = decoder_logits(g, latent, dec_input ? *dec_input : tgt, dec_style);
  return nn::cross_entropy_rows(logits, tgt);
}

Matrix DualSeq2Seq::encode(const std::vector<int>& src, Style enc_style) {
  Graph g;
  return encode_graph(g, src, enc_style).value();
}

DecodeResult DualSeq2Seq::decode(const Matrix& latent, Style dec_style,
                                 const DecodeConfig& dc, Rng* rng) {
  if (dc.mode == DecodeConfig::Mode::sample) {
    if (dc.temperature <= 0.0)
      throw std::invalid_argument("decode: sample mode needs temperature > 0");
    if (!rng) throw std::invalid_argument("decode: sample mode needs an rng");
  }
  if (dc.rep_penalty < 0.0)
    throw std::invalid_argument("decode: repetition penalty must be >= 0");
  const int limit = std::min(dc.max_len, cfg_.max_len);

  DecodeResult res;
  std::vector<int> input = {Vocabulary::kBos};
  for (int step = 0; step < limit; ++step) {
    Graph g;
    Var lat = g.constant(latent);
    Var logits = prefix_logits(g, lat, input, dec_style);
    RowVector z = logits.value().row(logits.rows() - 1);
    // never emit control ids that cannot appear in real sequences
    z(Vocabulary::kPad) = kMaskValue;
    z(Vocabulary::kBos) = kMaskValue;
    for (int id : res.ids) z(id) -= dc.rep_penalty;

    int chosen;
    double logp;
    if (dc.mode == DecodeConfig::Mode::greedy) {
      Index arg;
      z.maxCoeff(&arg);
      chosen = static_cast<int>(arg);
      // log-probability under the penalized distribution
      const Scalar m = z.maxCoeff();
      const Scalar lse = m + std::log((z.array() - m).exp().sum());
      logp = z(chosen) - lse;
    } else {
      RowVector zt = z / dc.temperature;
      const Scalar m = zt.maxCoeff();
      Eigen::Array<Scalar, 1, Eigen::Dynamic> p = (zt.array() - m).exp();
      p /= p.sum();
      const double u = rng->uniform();
      double acc = 0.0;
      chosen = static_cast<int>(p.size()) - 1;
      for (Index j = 0; j < p.size(); ++j) {
        acc += p(j);
        if (u < acc) {
          chosen = static_cast<int>(j);
          break;
        }
      }
      logp = std::log(std::max(p(chosen), 1e-300));
    }

    res.ids.push_back(chosen);
    res.log_probs.push_back(std::min(logp, 0.0));
    if (chosen == Vocabulary::kEos) break;
    input.push_back(chosen);
  }
  return res;
}

double DualSeq2Seq::sequence_log_prob(const std::vector<int>& src, Style enc_style,
                                      const std::vector<int>& tgt, Style dec_style) {
  Graph g;
  Var nll = sequence_nll(g, src, enc_style, tgt, dec_style);
  return -nll.value()(0, 0);
}

}  // namespace ironic::model
