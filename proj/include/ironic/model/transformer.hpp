#pragma once

#include <string>
#include <vector>

#include "ironic/nn/graph.hpp"
#include "ironic/types.hpp"
#include "ironic/util/rng.hpp"

namespace ironic::model {

struct TransformerConfig {
  int vocab_size = 0;
  int model_dim = 128;
  int n_heads = 4;
  int ffn_dim = 512;
  int n_layers = 4;  // per stack
  int n_shared = 2;  // layers physically shared between the two styles
  int max_len = kMaxLen;
  uint64_t seed = 1;
};

struct DecodeConfig {
  enum class Mode { greedy, sample };
  Mode mode = Mode::greedy;
  double temperature = 1.0;   // sample mode only; must be > 0
  double rep_penalty = 2.0;   // additive logit penalty on already-emitted ids
  int max_len = kMaxLen;
};

struct DecodeResult {
  std::vector<int> ids;            // ends with EOS unless cut off at max_len
  std::vector<double> log_probs;   // per emitted id, under the decoding distribution
};

// Two encoder-decoder pairs over one embedding table. The top `n_shared`
// encoder layers and the bottom `n_shared` decoder layers (the ones touching
// the latent) are the same storage for both styles; the remaining layers and
// the output projections are per-style.
class DualSeq2Seq {
 public:
  explicit DualSeq2Seq(const TransformerConfig& cfg);

  // Rebuilds the architecture recorded in the checkpoint's meta tensor and
  // loads the weights.
  static DualSeq2Seq from_checkpoint(const std::string& path);

  const TransformerConfig& config() const { return cfg_; }
  nn::ParameterSet& params() { return params_; }
  const nn::ParameterSet& params() const { return params_; }
  nn::Parameter& param(const std::string& name) { return params_.at(name); }

  // --- graph builders (differentiable) ---
  // Latent representation, one row per source position (source includes EOS).
  nn::Var encode_graph(nn::Graph& g, const std::vector<int>& src, Style enc_style);
  // Teacher-forced logits over the target prefix: input = BOS + tgt[:-1].
  nn::Var decoder_logits(nn::Graph& g, nn::Var latent, const std::vector<int>& tgt,
                         Style dec_style);
  // Total negative log-likelihood (1x1) of tgt given src through
  // (E_enc_style, D_dec_style). `dec_input`, when given, replaces tgt as the
  // teacher-forced prefix (same length; the loss still scores tgt) so callers
  // can corrupt the prefix without touching the targets.
  nn::Var sequence_nll(nn::Graph& g, const std::vector<int>& src, Style enc_style,
                       const std::vector<int>& tgt, Style dec_style,
                       const std::vector<int>* dec_input = nullptr);

  // --- inference (no gradients) ---
  Matrix encode(const std::vector<int>& src, Style enc_style);
  DecodeResult decode(const Matrix& latent, Style dec_style, const DecodeConfig& dc,
                      Rng* rng = nullptr);
  // log p(tgt | src) under the raw (unpenalized, temperature-1) model.
  double sequence_log_prob(const std::vector<int>& src, Style enc_style,
                           const std::vector<int>& tgt, Style dec_style);

 private:
  struct AttnParams {
    nn::Parameter *wq, *bq, *wk, *bk, *wv, *bv, *wo, *bo;
  };
  struct LnParams {
    nn::Parameter *g, *b;
  };
  struct FfnParams {
    nn::Parameter *w1, *b1, *w2, *b2;
  };
  struct EncLayer {
    AttnParams self;
    LnParams ln1;
    FfnParams ffn;
    LnParams ln2;
  };
  struct DecLayer {
    AttnParams self;
    LnParams ln1;
    AttnParams cross;
    LnParams ln2;
    FfnParams ffn;
    LnParams ln3;
  };

  AttnParams make_attn(const std::string& prefix, Rng& rng);
  LnParams make_ln(const std::string& prefix);
  FfnParams make_ffn(const std::string& prefix, Rng& rng);
  EncLayer make_enc_layer(const std::string& prefix, Rng& rng);
  DecLayer make_dec_layer(const std::string& prefix, Rng& rng);

  nn::Var attention(nn::Graph& g, const AttnParams& ap, nn::Var q_in, nn::Var kv_in,
                    bool causal);
  nn::Var ffn_block(nn::Graph& g, const FfnParams& fp, nn::Var x);
  nn::Var enc_layer_fwd(nn::Graph& g, const EncLayer& l, nn::Var x);
  nn::Var dec_layer_fwd(nn::Graph& g, const DecLayer& l, nn::Var x, nn::Var latent);
  nn::Var embed_with_positions(nn::Graph& g, const std::vector<int>& ids);
  // one decoder forward over a teacher-forced prefix, returning logits
  nn::Var prefix_logits(nn::Graph& g, nn::Var latent, const std::vector<int>& input_ids,
                        Style dec_style);

  TransformerConfig cfg_;
  nn::ParameterSet params_;
  nn::Parameter* embed_ = nullptr;
  Matrix positions_;  // max_len x model_dim, sinusoidal, not trained
  std::vector<EncLayer> enc_n_, enc_i_;  // full stacks (shared layers aliased)
  std::vector<DecLayer> dec_n_, dec_i_;
  nn::Parameter *out_w_n_, *out_b_n_, *out_w_i_, *out_b_i_;
};

}  // namespace ironic::model
