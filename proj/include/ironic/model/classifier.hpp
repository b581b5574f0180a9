#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ironic/nn/adam.hpp"
#include "ironic/nn/graph.hpp"
#include "ironic/types.hpp"
#include "ironic/util/rng.hpp"

namespace ironic::model {

struct LabeledExample {
  int label = 0;  // 0 or 1
  std::vector<int> ids;
};

// Binary scorer over token-id sequences: trainable body + sigmoid head.
// `calib.threshold` and `meta.trained` ride along in the parameter set so a
// checkpoint carries them.
class TextClassifier {
 public:
  virtual ~TextClassifier() = default;

  // Pre-sigmoid 1x1 logit. Dropout (where the architecture has any) is
  // active only when dropout_rng is non-null.
  virtual nn::Var score_logit_graph(nn::Graph& g, const std::vector<int>& ids,
                                    Rng* dropout_rng) = 0;
  virtual const char* arch() const = 0;

  // Probability the sequence is a positive example. Requires a trained model.
  double score(const std::vector<int>& ids);
  std::vector<double> score_batch(const std::vector<std::vector<int>>& batch);

  bool trained() const;
  void mark_trained();
  double threshold() const;
  void set_threshold(double t);  // must lie in (0,1)

  nn::ParameterSet& params() { return params_; }
  const nn::ParameterSet& params() const { return params_; }

 protected:
  void create_meta();  // call after the architecture parameters exist

  nn::ParameterSet params_;
  nn::Parameter* calib_ = nullptr;
  nn::Parameter* meta_trained_ = nullptr;
};

// Text CNN: per-width convolutions over the embedded sequence, max-over-time
// pooling, concatenation, dropout, linear head. Inputs shorter than the
// widest filter are right-padded with PAD.
class ConvTextClassifier : public TextClassifier {
 public:
  struct Config {
    int vocab_size = 0;
    int embed_dim = 128;
    std::vector<int> widths = {3, 4, 5};
    int maps_per_width = 100;
    double dropout = 0.5;
    uint64_t seed = 7;
  };

  explicit ConvTextClassifier(const Config& cfg);
  nn::Var score_logit_graph(nn::Graph& g, const std::vector<int>& ids,
                            Rng* dropout_rng) override;
  const char* arch() const override { return "cnn"; }
  const Config& config() const { return cfg_; }

 private:
  Config cfg_;
  nn::Parameter* embed_;
  std::vector<nn::Parameter*> conv_w_, conv_b_;  // parallel to cfg_.widths
  nn::Parameter *out_w_, *out_b_;
};

// Single-layer LSTM; the final hidden state feeds the linear head.
class RecurrentTextClassifier : public TextClassifier {
 public:
  struct Config {
    int vocab_size = 0;
    int embed_dim = 128;
    int hidden_dim = 128;
    uint64_t seed = 9;
  };

  explicit RecurrentTextClassifier(const Config& cfg);
  nn::Var score_logit_graph(nn::Graph& g, const std::vector<int>& ids,
                            Rng* dropout_rng) override;
  const char* arch() const override { return "lstm"; }
  const Config& config() const { return cfg_; }

 private:
  Config cfg_;
  nn::Parameter* embed_;
  nn::Parameter *w_, *u_, *b_;  // input, recurrent, bias: gates i|f|o|g
  nn::Parameter *out_w_, *out_b_;
};

struct ClassifierTrainOptions {
  Scalar lr = 1e-3;
  int batch_size = 32;
  double holdout_fraction = 0.2;  // stratified validation split
};

struct ClassifierTrainReport {
  double val_accuracy = 0.0;
  int epochs = 0;
  int train_examples = 0;
  int val_examples = 0;
};

// Binary cross-entropy training with Adam; deterministic under seed.
// Throws std::invalid_argument on an empty or single-class corpus or when a
// class has fewer than 2 examples.
ClassifierTrainReport train_classifier(TextClassifier& model,
                                       const std::vector<LabeledExample>& corpus,
                                       int epochs, uint64_t seed,
                                       const ClassifierTrainOptions& opt = {});

// Sweeps the sorted midpoints of observed scores plus 0.5 and returns the
// threshold maximizing balanced accuracy (score >= threshold reads as
// positive); ties resolve to the candidate closest to 0.5, then the smaller.
// Throws std::invalid_argument if the set lacks either class.
double calibrate_threshold(TextClassifier& model,
                           const std::vector<LabeledExample>& validation);

// A frozen classifier plus its calibrated threshold; standardized scores are
// raw minus threshold, in (-1, 1).
struct CalibratedSentimentScorer {
  TextClassifier* classifier = nullptr;
  double threshold = 0.5;

  double standardized(const std::vector<int>& ids) const {
    return classifier->score(ids) - threshold;
  }
};

// Reconstructs the right architecture from a checkpoint's tensor names and
// shapes, then loads it.
std::unique_ptr<TextClassifier> load_classifier(const std::string& path);

}  // namespace ironic::model
