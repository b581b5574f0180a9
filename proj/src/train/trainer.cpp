#include "ironic/train/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "ironic/nn/checkpoint.hpp"

namespace ironic::train {

using model::DecodeConfig;

// ---- EpochRecord -----------------------------------------------------------

std::string EpochRecord::to_line() const {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  os << "epoch=" << epoch << " phase=" << phase << " direction=" << direction
     << " loss=" << loss;
  if (phase == "rl")
    os << " rw_irony=" << rw_irony << " rw_senti=" << rw_senti << " rw=" << rw;
  return os.str();
}

std::optional<EpochRecord> EpochRecord::from_line(const std::string& line) {
  EpochRecord rec;
  bool saw_epoch = false, saw_phase = false, saw_loss = false;
  std::istringstream is(line);
  std::string field;
  while (is >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) return std::nullopt;
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    try {
      if (key == "epoch") {
        rec.epoch = std::stoi(val);
        saw_epoch = true;
      } else if (key == "phase") {
        rec.phase = val;
        saw_phase = true;
      } else if (key == "direction") {
        rec.direction = val;
      } else if (key == "loss") {
        rec.loss = std::stod(val);
        saw_loss = true;
      } else if (key == "rw_irony") {
        rec.rw_irony = std::stod(val);
      } else if (key == "rw_senti") {
        rec.rw_senti = std::stod(val);
      } else if (key == "rw") {
        rec.rw = std::stod(val);
      } else {
        return std::nullopt;
      }
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (!saw_epoch || !saw_phase || !saw_loss) return std::nullopt;
  return rec;
}

// ---- Trainer ---------------------------------------------------------------

Trainer::Trainer(model::DualSeq2Seq& m, ClassifierBundle classifiers, TrainingConfig cfg,
                 std::ostream* log)
    : model_(m),
      cls_(std::move(classifiers)),
      cfg_(std::move(cfg)),
      adam_({.lr = cfg_.lr, .clip_norm = cfg_.clip_norm}),
      log_(log) {
  cfg_.validate();
  // Pretraining-only schedules never touch the reward scorers.
  if (cfg_.rl_epochs > 0 &&
      (!cls_.irony || !cls_.senti_irony.classifier || !cls_.senti_non_irony.classifier))
    throw std::invalid_argument("trainer: classifier bundle incomplete");
}

double Trainer::dae_loss(const std::vector<TokenIdSequence>& batch, Style style,
                         Rng& noise_rng, bool apply_update) {
  if (batch.empty()) throw std::invalid_argument("dae_loss: empty batch");
  model::NoiseSpec spec;
  spec.p_delete = cfg_.noise_delete;
  spec.p_duplicate = cfg_.noise_duplicate;
  spec.p_swap = cfg_.noise_swap;

  const Scalar inv_k = 1.0 / static_cast<Scalar>(batch.size());
  model_.params().zero_grads();
  double total = 0.0;
  for (const TokenIdSequence& clean : batch) {
    TokenIdSequence noised = model::add_noise(clean, spec, noise_rng);
    nn::Graph g;
    nn::Var nll;
    if (cfg_.word_dropout > 0.0) {
      // corrupt the teacher-forced prefix (targets stay clean) so the decoder
      // cannot lean on its own history and must read the encoder
      std::vector<int> dec_input = clean.ids;
      for (int& id : dec_input)
        if (noise_rng.uniform() < cfg_.word_dropout) id = Vocabulary::kUnk;
      nll = model_.sequence_nll(g, noised.ids, style, clean.ids, style, &dec_input);
    } else {
      nll = model_.sequence_nll(g, noised.ids, style, clean.ids, style);
    }
    total += nll.value()(0, 0);
    g.backward(nn::scale(nll, inv_k));
  }
  if (apply_update) {
    adam_.step(model_.params());
    model_.params().zero_grads();
  }
  return total * inv_k;
}

double Trainer::bt_loss(const std::vector<TokenIdSequence>& batch, Style src_style,
                        bool apply_update) {
  if (batch.empty()) throw std::invalid_argument("bt_loss: empty batch");
  const Style opp = opposite(src_style);
  DecodeConfig dc;
  dc.mode = DecodeConfig::Mode::greedy;
  dc.rep_penalty = 0.0;
  dc.max_len = cfg_.max_len;

  const Scalar inv_k = 1.0 / static_cast<Scalar>(batch.size());
  model_.params().zero_grads();
  double total = 0.0;
  for (const TokenIdSequence& src : batch) {
    // pseudo-parallel pair through the opposite decoder; values only, so the
    // generation path receives no gradient
    Matrix latent = model_.encode(src.ids, src_style);
    model::DecodeResult gen = model_.decode(latent, opp, dc);
    nn::Graph g;
    nn::Var nll = model_.sequence_nll(g, gen.ids, opp, src.ids, src_style);
    total += nll.value()(0, 0);
    g.backward(nn::scale(nll, inv_k));
  }
  if (apply_update) {
    adam_.step(model_.params());
    model_.params().zero_grads();
  }
  return total * inv_k;
}

RewardBundle Trainer::compute_rewards(const std::vector<int>& src_ids,
                                      const std::vector<int>& out_ids, Style src_style) {
  if (!cls_.irony || !cls_.senti_irony.classifier || !cls_.senti_non_irony.classifier)
    throw std::invalid_argument("compute_rewards: classifier bundle incomplete");
  const double p_in = cls_.irony->score(src_ids);
  const double p_out = cls_.irony->score(out_ids);
  double rwi, std_in, std_out;
  if (src_style == Style::non_irony) {
    rwi = irony_reward(p_in, p_out);  // gain of irony probability
    std_in = cls_.senti_non_irony.standardized(src_ids);
    std_out = cls_.senti_irony.standardized(out_ids);
  } else {
    rwi = irony_reward(p_out, p_in);  // mirrored: gain of non-irony probability
    std_in = cls_.senti_irony.standardized(src_ids);
    std_out = cls_.senti_non_irony.standardized(out_ids);
  }
  const double rws = sentiment_reward(std_in, std_out);
  return assemble_rewards(rwi, rws, cfg_.beta, cfg_.clamp_eps,
                          !cfg_.disable_irony_reward, !cfg_.disable_senti_reward);
}

RlStepDiag Trainer::rl_step(const std::vector<TokenIdSequence>& batch, Style src_style,
                            Rng& sample_rng, bool apply_update, double reward_offset) {
  if (batch.empty()) throw std::invalid_argument("rl_step: empty batch");
  const Style tgt_style = opposite(src_style);
  DecodeConfig dc;
  dc.mode = DecodeConfig::Mode::sample;
  dc.temperature = cfg_.temperature;
  dc.rep_penalty = 0.0;
  dc.max_len = cfg_.max_len;

  const size_t k = batch.size();
  std::vector<std::vector<int>> samples(k);
  std::vector<double> rewards(k);
  RlStepDiag diag;
  for (size_t i = 0; i < k; ++i) {
    Matrix latent = model_.encode(batch[i].ids, src_style);
    samples[i] = model_.decode(latent, tgt_style, dc, &sample_rng).ids;
    RewardBundle rb = compute_rewards(batch[i].ids, samples[i], src_style);
    // reward bounds are part of the contract; check them on every step
    // (closed bounds: saturated sigmoids can round scores to exactly 0 or 1)
    if (!(rb.rw_irony >= -1.0 && rb.rw_irony <= 1.0) ||
        !(rb.rw >= cfg_.clamp_eps && rb.rw <= 1.0)) {
      std::ostringstream os;
      os << "rl_step: reward out of bounds (rw_irony=" << rb.rw_irony << " rw=" << rb.rw
         << ") at sample " << i;
      throw std::runtime_error(os.str());
    }
    rewards[i] = rb.rw + reward_offset;
    diag.mean_rw_irony += rb.rw_irony;
    diag.mean_rw_senti += rb.rw_senti;
    diag.mean_rw += rewards[i];
  }
  const double inv_k = 1.0 / static_cast<double>(k);
  diag.mean_rw_irony *= inv_k;
  diag.mean_rw_senti *= inv_k;
  diag.mean_rw *= inv_k;
  diag.samples = static_cast<int>(k);

  double baseline = 0.0;
  if (cfg_.use_baseline && !cfg_.raw_prob_objective) baseline = diag.mean_rw;

  model_.params().zero_grads();
  double loss_total = 0.0;
  for (size_t i = 0; i < k; ++i) {
    nn::Graph g;
    nn::Var nll = model_.sequence_nll(g, batch[i].ids, src_style, samples[i], tgt_style);
    nn::Var term;
    if (cfg_.raw_prob_objective) {
      // literal objective: -(1/K) sum RW_i * p(sample_i)
      nn::Var p = nn::exp_elem(nn::scale(nll, -1.0));
      term = nn::scale(p, -rewards[i] * inv_k);
    } else {
      // score-function form: -(1/K) sum (RW_i - baseline) * log p(sample_i)
      term = nn::scale(nll, (rewards[i] - baseline) * inv_k);
    }
    const double v = term.value()(0, 0);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "rl_step: non-finite loss at sample " << i << " (ids:";
      for (int id : samples[i]) os << ' ' << id;
      os << ")";
      throw std::runtime_error(os.str());
    }
    loss_total += v;
    g.backward(term);
  }
  diag.loss = loss_total;
  if (apply_update) {
    adam_.step(model_.params());
    model_.params().zero_grads();
  }
  return diag;
}

// ---- schedule ----------------------------------------------------------------

std::vector<std::vector<TokenIdSequence>> Trainer::make_batches(
    std::vector<TokenIdSequence> data, Rng& order_rng) const {
  order_rng.shuffle(data);
  std::vector<std::vector<TokenIdSequence>> batches;
  const size_t bs = static_cast<size_t>(cfg_.batch_size);
  for (size_t start = 0; start < data.size(); start += bs) {
    const size_t end = std::min(data.size(), start + bs);
    batches.emplace_back(data.begin() + static_cast<long>(start),
                         data.begin() + static_cast<long>(end));
  }
  return batches;
}

void Trainer::emit(const EpochRecord& rec, RunResult& result) {
  result.records.push_back(rec);
  if (log_) *log_ << rec.to_line() << "\n" << std::flush;
}

void Trainer::save_ckpt(const std::string& dir, const std::string& name) const {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  nn::save_checkpoint((std::filesystem::path(dir) / name).string(), model_.params());
}

RunResult Trainer::run_algorithm1(const std::vector<TokenIdSequence>& non_irony,
                                  const std::vector<TokenIdSequence>& irony,
                                  const std::string& ckpt_dir) {
  if (non_irony.empty() || irony.empty())
    throw std::invalid_argument("run_algorithm1: both corpora must be non-empty");

  const bool with_rl = cfg_.rl_epochs > 0;
  const uint64_t phi_sum = with_rl ? cls_.irony->params().value_checksum() : 0;
  const uint64_t psi_i_sum =
      with_rl ? cls_.senti_irony.classifier->params().value_checksum() : 0;
  const uint64_t psi_n_sum =
      with_rl ? cls_.senti_non_irony.classifier->params().value_checksum() : 0;

  RunResult result;
  int epoch = 0;

  // phase 1: denoising autoencoder pretraining (both styles per epoch)
  save_ckpt(ckpt_dir, "pre_dae.ckpt");
  for (int e = 0; e < cfg_.dae_epochs(); ++e) {
    ++epoch;
    Rng order(derive_seed(cfg_.seed, derive_seed(epoch, "order")));
    Rng noise(derive_seed(cfg_.seed, derive_seed(epoch, "noise")));
    double loss_sum = 0.0;
    long n_sent = 0;
    for (Style s : {Style::non_irony, Style::irony}) {
      const auto& corpus = (s == Style::non_irony) ? non_irony : irony;
      for (const auto& batch : make_batches(corpus, order)) {
        loss_sum += dae_loss(batch, s, noise) * static_cast<double>(batch.size());
        n_sent += static_cast<long>(batch.size());
      }
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.phase = "dae";
    rec.direction = "both";
    rec.loss = loss_sum / static_cast<double>(n_sent);
    emit(rec, result);
    save_ckpt(ckpt_dir, "latest.ckpt");
  }

  // phase 2: back-translation pretraining
  save_ckpt(ckpt_dir, "pre_bt.ckpt");
  for (int e = 0; e < cfg_.bt_epochs(); ++e) {
    ++epoch;
    Rng order(derive_seed(cfg_.seed, derive_seed(epoch, "order")));
    double loss_sum = 0.0;
    long n_sent = 0;
    for (Style s : {Style::non_irony, Style::irony}) {
      const auto& corpus = (s == Style::non_irony) ? non_irony : irony;
      for (const auto& batch : make_batches(corpus, order)) {
        loss_sum += bt_loss(batch, s) * static_cast<double>(batch.size());
        n_sent += static_cast<long>(batch.size());
      }
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.phase = "bt";
    rec.direction = "both";
    rec.loss = loss_sum / static_cast<double>(n_sent);
    emit(rec, result);
    save_ckpt(ckpt_dir, "latest.ckpt");
  }

  // phase 3: alternating policy-gradient epochs with interval back-translation
  save_ckpt(ckpt_dir, "pre_rl.ckpt");
  for (int e = 0; e < cfg_.rl_epochs; ++e) {
    ++epoch;
    Rng order(derive_seed(cfg_.seed, derive_seed(epoch, "order")));
    Rng sample(derive_seed(cfg_.seed, derive_seed(epoch, "sample")));
    double loss_sum = 0.0, rwi_sum = 0.0, rws_sum = 0.0, rw_sum = 0.0;
    long n_sent = 0;
    for (Style s : {Style::non_irony, Style::irony}) {
      const auto& corpus = (s == Style::non_irony) ? non_irony : irony;
      long batch_no = 0;
      for (const auto& batch : make_batches(corpus, order)) {
        ++batch_no;
        RlStepDiag d = rl_step(batch, s, sample);
        const auto bs = static_cast<double>(batch.size());
        loss_sum += d.loss * bs;  // d.loss is the batch-mean objective
        rwi_sum += d.mean_rw_irony * bs;
        rws_sum += d.mean_rw_senti * bs;
        rw_sum += d.mean_rw * bs;
        n_sent += static_cast<long>(batch.size());
        if (!cfg_.disable_bt && batch_no % cfg_.interval_p == 0) bt_loss(batch, s);
      }
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.phase = "rl";
    rec.direction = "both";
    rec.loss = loss_sum / static_cast<double>(n_sent);
    rec.rw_irony = rwi_sum / static_cast<double>(n_sent);
    rec.rw_senti = rws_sum / static_cast<double>(n_sent);
    rec.rw = rw_sum / static_cast<double>(n_sent);
    emit(rec, result);
    save_ckpt(ckpt_dir, "latest.ckpt");

    if (cls_.irony->params().value_checksum() != phi_sum ||
        cls_.senti_irony.classifier->params().value_checksum() != psi_i_sum ||
        cls_.senti_non_irony.classifier->params().value_checksum() != psi_n_sum)
      throw std::logic_error("classifier parameters changed during RL");
  }

  save_ckpt(ckpt_dir, "final.ckpt");
  return result;
}

}  // namespace ironic::train
