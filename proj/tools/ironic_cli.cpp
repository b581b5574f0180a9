// Command-line entry point: one subcommand per pipeline stage, each run
// leaving behind a manifest (argv echo + seed + content hashes) so results
// can be re-derived bit for bit.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ironic/eval/metrics.hpp"
#include "ironic/model/classifier.hpp"
#include "ironic/model/transformer.hpp"
#include "ironic/nn/checkpoint.hpp"
#include "ironic/text/filters.hpp"
#include "ironic/text/normalize.hpp"
#include "ironic/text/pipeline.hpp"
#include "ironic/toy.hpp"
#include "ironic/train/config.hpp"
#include "ironic/train/trainer.hpp"
#include "ironic/types.hpp"
#include "ironic/util/hash.hpp"
#include "ironic/util/rng.hpp"
#include "ironic/util/text_io.hpp"
#include "ironic/vocab.hpp"

namespace fs = std::filesystem;
using namespace ironic;

namespace {

// ---------------------------------------------------------------- manifest

// Reproducibility record written next to every command's outputs. Inputs are
// hashed before the run, outputs after; identical manifests mean identical
// artifacts.
class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& argv)
      : command_(std::move(command)), argv_(argv) {}

  void set_seed(uint64_t s) { seed_ = s; }
  void input(const std::string& path) { inputs_.emplace_back(path, hash_file(path)); }
  void output(const std::string& path) { outputs_.emplace_back(path, hash_file(path)); }
  void extra(const std::string& key, const std::string& value) {
    extras_.emplace_back(key, value);
  }

  void write(const std::string& path) const {
    std::ostringstream os;
    os << "command=" << command_ << "\n";
    for (const auto& a : argv_) os << "arg=" << a << "\n";
    if (seed_) os << "seed=" << *seed_ << "\n";
    for (const auto& [k, v] : extras_) os << k << "=" << v << "\n";
    for (const auto& [p, h] : inputs_) os << "input=" << hex64(h) << "  " << p << "\n";
    for (const auto& [p, h] : outputs_) os << "output=" << hex64(h) << "  " << p << "\n";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write manifest: " + path);
    f << os.str();
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::optional<uint64_t> seed_;
  std::vector<std::pair<std::string, uint64_t>> inputs_;
  std::vector<std::pair<std::string, uint64_t>> outputs_;
  std::vector<std::pair<std::string, std::string>> extras_;
};

// ------------------------------------------------------------- file helpers

std::vector<CleanSentence> read_token_file(const std::string& path) {
  std::vector<CleanSentence> out;
  for (const std::string& line : read_lines(path)) {
    CleanSentence s;
    s.tokens = split_ws(line);
    out.push_back(std::move(s));
  }
  return out;
}

void write_token_file(const std::string& path, const std::vector<CleanSentence>& corpus) {
  std::vector<std::string> lines;
  lines.reserve(corpus.size());
  for (const auto& s : corpus) lines.push_back(join(s.tokens));
  write_lines(path, lines);
}

// `label<TAB>sentence` rows, label 0 or 1.
std::vector<std::pair<int, CleanSentence>> read_labeled_file(const std::string& path) {
  std::vector<std::pair<int, CleanSentence>> out;
  long line_no = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected label<TAB>text");
    const std::string label = trim(line.substr(0, tab));
    if (label != "0" && label != "1")
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": label must be 0 or 1");
    CleanSentence s;
    s.tokens = split_ws(line.substr(tab + 1));
    out.emplace_back(label == "1" ? 1 : 0, std::move(s));
  }
  return out;
}

void write_labeled_file(const std::string& path,
                        const std::vector<std::pair<int, CleanSentence>>& data) {
  std::vector<std::string> lines;
  lines.reserve(data.size());
  for (const auto& [label, s] : data)
    lines.push_back(std::to_string(label) + "\t" + join(s.tokens));
  write_lines(path, lines);
}

std::vector<model::LabeledExample> to_examples(
    const std::vector<std::pair<int, CleanSentence>>& data, const Vocabulary& vocab) {
  std::vector<model::LabeledExample> out;
  out.reserve(data.size());
  for (const auto& [label, s] : data)
    out.push_back({label, vocab.encode(s).ids});
  return out;
}

std::vector<TokenIdSequence> encode_corpus(const std::vector<CleanSentence>& corpus,
                                           const Vocabulary& vocab, Style style) {
  std::vector<TokenIdSequence> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.push_back(vocab.encode(s, style));
  return out;
}

Style parse_direction_src(const std::string& d) {
  if (d == "n2i") return Style::non_irony;
  if (d == "i2n") return Style::irony;
  throw std::invalid_argument("direction must be n2i or i2n, got '" + d + "'");
}

// Config file as base (when given), explicit flags on top.
struct ConfigOverrides {
  std::optional<double> lr, beta, temperature, rep_penalty, clamp_eps, clip_norm;
  std::optional<double> noise_delete, noise_duplicate, noise_swap, word_dropout;
  std::optional<int> batch_size, interval_p, pretrain_epochs, rl_epochs, max_len;
  std::optional<uint64_t> seed;
  bool no_baseline = false;
  bool disable_irony_reward = false;
  bool disable_senti_reward = false;
  bool disable_bt = false;
  bool raw_prob_objective = false;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--lr", lr, "learning rate");
    cmd->add_option("--batch-size", batch_size, "sentences per update (K)");
    cmd->add_option("--beta", beta, "harmonic reward weight");
    cmd->add_option("--interval-p", interval_p, "back-translation update every p-th RL batch");
    cmd->add_option("--pretrain-epochs", pretrain_epochs, "DAE + BT epochs");
    cmd->add_option("--rl-epochs", rl_epochs, "policy-gradient epochs");
    cmd->add_option("--max-len", max_len, "token-id sequence cap");
    cmd->add_option("--seed", seed, "run seed");
    cmd->add_option("--temperature", temperature, "RL sampling temperature");
    cmd->add_option("--rep-penalty", rep_penalty, "decode repetition penalty");
    cmd->add_option("--clamp-eps", clamp_eps, "reward clamp lower bound");
    cmd->add_option("--clip-norm", clip_norm, "gradient clip (0 = off)");
    cmd->add_option("--noise-delete", noise_delete, "DAE deletion probability");
    cmd->add_option("--noise-duplicate", noise_duplicate, "DAE duplication probability");
    cmd->add_option("--noise-swap", noise_swap, "DAE swap probability");
    cmd->add_option("--word-dropout", word_dropout,
                    "teacher-forced prefix corruption during pretraining");
    cmd->add_flag("--no-baseline", no_baseline, "disable the batch-mean reward baseline");
    cmd->add_flag("--disable-irony-reward", disable_irony_reward, "ablation: drop RW_irony");
    cmd->add_flag("--disable-senti-reward", disable_senti_reward, "ablation: drop RW_senti");
    cmd->add_flag("--disable-bt", disable_bt, "ablation: skip interval back-translation");
    cmd->add_flag("--raw-prob-objective", raw_prob_objective,
                  "literal raw-probability RL objective");
  }

  void apply(train::TrainingConfig& cfg) const {
    if (lr) cfg.lr = *lr;
    if (batch_size) cfg.batch_size = *batch_size;
    if (beta) cfg.beta = *beta;
    if (interval_p) cfg.interval_p = *interval_p;
    if (pretrain_epochs) cfg.pretrain_epochs = *pretrain_epochs;
    if (rl_epochs) cfg.rl_epochs = *rl_epochs;
    if (max_len) cfg.max_len = *max_len;
    if (seed) cfg.seed = *seed;
    if (temperature) cfg.temperature = *temperature;
    if (rep_penalty) cfg.rep_penalty = *rep_penalty;
    if (clamp_eps) cfg.clamp_eps = *clamp_eps;
    if (clip_norm) cfg.clip_norm = *clip_norm;
    if (noise_delete) cfg.noise_delete = *noise_delete;
    if (noise_duplicate) cfg.noise_duplicate = *noise_duplicate;
    if (noise_swap) cfg.noise_swap = *noise_swap;
    if (no_baseline) cfg.use_baseline = false;
    if (disable_irony_reward) cfg.disable_irony_reward = true;
    if (disable_senti_reward) cfg.disable_senti_reward = true;
    if (disable_bt) cfg.disable_bt = true;
    if (raw_prob_objective) cfg.raw_prob_objective = true;
  }
};

void add_config_lines(Manifest& man, const train::TrainingConfig& cfg) {
  std::istringstream is(cfg.to_text());
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) man.extra("config." + line.substr(0, line.find(' ')),
                                 trim(line.substr(line.find('=') + 1)));
}

// Writes the epoch log to `path` while the run streams records into it.
struct RunLogging {
  std::ofstream file;
  explicit RunLogging(const std::string& path) : file(path, std::ios::binary) {
    if (!file) throw std::runtime_error("cannot write log: " + path);
  }
};

struct LoadedScorers {
  std::unique_ptr<model::TextClassifier> irony, senti_irony, senti_non;
  train::ClassifierBundle bundle() {
    train::ClassifierBundle b;
    b.irony = irony.get();
    b.senti_irony = {senti_irony.get(), senti_irony->threshold()};
    b.senti_non_irony = {senti_non.get(), senti_non->threshold()};
    return b;
  }
};

LoadedScorers load_scorers(const std::string& irony_path, const std::string& senti_irony_path,
                           const std::string& senti_non_path) {
  LoadedScorers s;
  s.irony = model::load_classifier(irony_path);
  s.senti_irony = model::load_classifier(senti_irony_path);
  s.senti_non = model::load_classifier(senti_non_path);
  return s;
}

// ------------------------------------------------------------- subcommands

struct Args {
  std::vector<std::string> argv;  // echo for manifests (without program name)
};

int cmd_make_toy_data(const Args& args, const std::string& out_dir, int size, uint64_t seed) {
  fs::create_directories(out_dir);
  toy::ToyDataset ds = toy::make_toy_dataset(size, seed);

  const std::string non_path = out_dir + "/non_irony.txt";
  const std::string iro_path = out_dir + "/irony.txt";
  const std::string lab_path = out_dir + "/irony_labeled.tsv";
  const std::string si_path = out_dir + "/senti_irony_labeled.tsv";
  const std::string sn_path = out_dir + "/senti_non_irony_labeled.tsv";
  write_token_file(non_path, ds.non_irony.sentences);
  write_token_file(iro_path, ds.irony.sentences);
  write_labeled_file(lab_path, ds.irony_labeled);
  write_labeled_file(si_path, ds.senti_irony_labeled);
  write_labeled_file(sn_path, ds.senti_non_irony_labeled);

  Manifest man("make-toy-data", args.argv);
  man.set_seed(seed);
  man.extra("size", std::to_string(size));
  for (const auto& p : {non_path, iro_path, lab_path, si_path, sn_path}) man.output(p);
  man.write(out_dir + "/make_toy_data.run");
  std::cout << "wrote " << ds.non_irony.sentences.size() << "+" << ds.irony.sentences.size()
            << " sentences to " << out_dir << "\n";
  return 0;
}

int cmd_preprocess(const Args& args, const std::string& in_path, const std::string& abbrev_path,
                   const std::string& wordlist_path, const std::string& out_dir,
                   double english_fraction, const text::FilterConfig& filter,
                   const std::string& lexicon_path, const std::string& split_ckpt,
                   const std::string& split_vocab, double split_threshold) {
  fs::create_directories(out_dir);
  text::NormalizerOptions nopts;
  nopts.english_fraction = english_fraction;
  text::Normalizer norm(text::AbbreviationDict::load(abbrev_path),
                        text::load_wordlist(wordlist_path), nopts);
  text::PipelineConfig pcfg;
  pcfg.filter = filter;

  text::PipelineResult res = text::run_pipeline(read_lines(in_path), norm, pcfg);

  const std::string clean_path = out_dir + "/clean.txt";
  const std::string reject_path = out_dir + "/rejects.tsv";
  write_token_file(clean_path, res.kept);
  write_lines(reject_path, text::reject_log_lines(res.rejects));

  Manifest man("preprocess", args.argv);
  man.input(in_path);
  man.input(abbrev_path);
  man.input(wordlist_path);
  man.extra("kept", std::to_string(res.kept.size()));
  man.extra("rejected", std::to_string(res.rejects.size()));
  man.output(clean_path);
  man.output(reject_path);

  // Optional style split: an irony scorer routes the kept sentences and the
  // non-ironic side passes the strong-sentiment gate.
  if (!split_ckpt.empty()) {
    auto clf = model::load_classifier(split_ckpt);
    Vocabulary vocab = Vocabulary::load(split_vocab);
    text::SentimentLexicon lex = text::SentimentLexicon::load(lexicon_path);
    const double th = split_threshold > 0 ? split_threshold : clf->threshold();
    std::function<double(const CleanSentence&)> score = [&](const CleanSentence& s) {
      return clf->score(vocab.encode(s).ids);
    };
    text::SplitResult split = text::split_by_style(res.kept, score, th, lex);

    const std::string iro_path = out_dir + "/irony.txt";
    const std::string non_path = out_dir + "/non_irony.txt";
    const std::string gate_path = out_dir + "/gate_rejects.tsv";
    write_token_file(iro_path, split.irony.sentences);
    write_token_file(non_path, split.non_irony.sentences);
    std::vector<std::string> gate_lines;
    for (const auto& [idx, reason] : split.gate_rejects)
      gate_lines.push_back(std::to_string(idx) + "\t" + text::reject_reason_name(reason));
    write_lines(gate_path, gate_lines);

    man.input(split_ckpt);
    man.input(split_vocab);
    man.input(lexicon_path);
    man.extra("split.threshold", std::to_string(th));
    man.output(iro_path);
    man.output(non_path);
    man.output(gate_path);
  }
  man.write(out_dir + "/preprocess.run");
  std::cout << "kept " << res.kept.size() << ", rejected " << res.rejects.size() << "\n";
  return 0;
}

int cmd_build_vocab(const Args& args, const std::vector<std::string>& inputs,
                    const std::string& out_path, long min_count, int cap) {
  std::vector<StyledCorpus> corpora;
  for (const auto& p : inputs) {
    StyledCorpus c;
    c.sentences = read_token_file(p);
    corpora.push_back(std::move(c));
  }
  Vocabulary vocab = Vocabulary::build(corpora, min_count, cap);
  vocab.save(out_path);

  Manifest man("build-vocab", args.argv);
  for (const auto& p : inputs) man.input(p);
  man.extra("min_count", std::to_string(min_count));
  man.extra("cap", std::to_string(cap));
  man.extra("vocab_size", std::to_string(vocab.size()));
  man.output(out_path);
  man.write(out_path + ".run");
  std::cout << "vocab size " << vocab.size() << " -> " << out_path << "\n";
  return 0;
}

int cmd_train_classifier(const Args& args, const std::string& arch, const std::string& data_path,
                         const std::string& vocab_path, const std::string& out_path, int epochs,
                         uint64_t seed, const model::ClassifierTrainOptions& opt, int embed_dim,
                         int hidden_dim, bool calibrate_after) {
  Vocabulary vocab = Vocabulary::load(vocab_path);
  auto examples = to_examples(read_labeled_file(data_path), vocab);

  std::unique_ptr<model::TextClassifier> clf;
  if (arch == "cnn") {
    model::ConvTextClassifier::Config c;
    c.vocab_size = vocab.size();
    c.embed_dim = embed_dim;
    c.seed = seed;
    clf = std::make_unique<model::ConvTextClassifier>(c);
  } else if (arch == "lstm") {
    model::RecurrentTextClassifier::Config c;
    c.vocab_size = vocab.size();
    c.embed_dim = embed_dim;
    c.hidden_dim = hidden_dim;
    c.seed = seed;
    clf = std::make_unique<model::RecurrentTextClassifier>(c);
  } else {
    throw std::invalid_argument("arch must be cnn or lstm, got '" + arch + "'");
  }

  model::ClassifierTrainReport rep = model::train_classifier(*clf, examples, epochs, seed, opt);
  if (calibrate_after) clf->set_threshold(model::calibrate_threshold(*clf, examples));
  nn::save_checkpoint(out_path, clf->params());

  Manifest man("train-classifier", args.argv);
  man.set_seed(seed);
  man.input(data_path);
  man.input(vocab_path);
  man.extra("arch", arch);
  man.extra("val_accuracy", std::to_string(rep.val_accuracy));
  man.extra("threshold", std::to_string(clf->threshold()));
  man.output(out_path);
  man.write(out_path + ".run");
  std::cout << "val_accuracy=" << rep.val_accuracy << " threshold=" << clf->threshold()
            << " -> " << out_path << "\n";
  return 0;
}

int cmd_calibrate(const Args& args, const std::string& ckpt_path, const std::string& data_path,
                  const std::string& vocab_path, std::string out_path) {
  if (out_path.empty()) out_path = ckpt_path;
  Vocabulary vocab = Vocabulary::load(vocab_path);
  auto examples = to_examples(read_labeled_file(data_path), vocab);
  auto clf = model::load_classifier(ckpt_path);
  const double th = model::calibrate_threshold(*clf, examples);
  clf->set_threshold(th);
  nn::save_checkpoint(out_path, clf->params());

  Manifest man("calibrate", args.argv);
  man.input(data_path);
  man.input(vocab_path);
  man.extra("threshold", std::to_string(th));
  man.output(out_path);
  man.write(out_path + ".run");
  std::cout << "threshold=" << th << " -> " << out_path << "\n";
  return 0;
}

// Shared body of `pretrain` and `train-rl`: assemble the config, run the
// schedule, write the log + manifest.
int run_training(const char* command, const Args& args, model::DualSeq2Seq& seq2seq,
                 train::ClassifierBundle bundle, const train::TrainingConfig& cfg,
                 const std::string& non_path, const std::string& irony_path,
                 const std::string& vocab_path, const std::string& out_dir,
                 const std::vector<std::string>& extra_inputs) {
  fs::create_directories(out_dir);
  Vocabulary vocab = Vocabulary::load(vocab_path);
  auto non = encode_corpus(read_token_file(non_path), vocab, Style::non_irony);
  auto irony = encode_corpus(read_token_file(irony_path), vocab, Style::irony);

  const std::string log_path = out_dir + "/train_log.txt";
  RunLogging log(log_path);
  train::Trainer trainer(seq2seq, std::move(bundle), cfg, &log.file);
  train::RunResult result = trainer.run_algorithm1(non, irony, out_dir);
  log.file.close();

  for (const auto& rec : result.records) std::cout << rec.to_line() << "\n";

  const std::string cfg_path = out_dir + "/config_used.txt";
  cfg.save(cfg_path);

  Manifest man(command, args.argv);
  man.set_seed(cfg.seed);
  man.input(non_path);
  man.input(irony_path);
  man.input(vocab_path);
  for (const auto& p : extra_inputs) man.input(p);
  add_config_lines(man, cfg);
  man.output(cfg_path);
  man.output(log_path);
  man.output(out_dir + "/final.ckpt");
  man.write(out_dir + "/" + std::string(command) + ".run");
  return 0;
}

int cmd_transfer(const Args& args, const std::string& direction, const std::string& in_path,
                 const std::string& ckpt_path, const std::string& vocab_path,
                 const std::string& out_path, const std::string& mode, double temperature,
                 double rep_penalty, uint64_t seed) {
  const Style src_style = parse_direction_src(direction);
  const Style dst_style = opposite(src_style);
  Vocabulary vocab = Vocabulary::load(vocab_path);
  model::DualSeq2Seq seq2seq = model::DualSeq2Seq::from_checkpoint(ckpt_path);

  model::DecodeConfig dc;
  if (mode == "greedy")
    dc.mode = model::DecodeConfig::Mode::greedy;
  else if (mode == "sample")
    dc.mode = model::DecodeConfig::Mode::sample;
  else
    throw std::invalid_argument("mode must be greedy or sample, got '" + mode + "'");
  dc.temperature = temperature;
  dc.rep_penalty = rep_penalty;
  dc.max_len = seq2seq.config().max_len;

  Rng rng(seed);
  std::vector<std::string> out_lines;
  for (const CleanSentence& s : read_token_file(in_path)) {
    const TokenIdSequence src = vocab.encode(s, src_style);
    const Matrix latent = seq2seq.encode(src.ids, src_style);
    const model::DecodeResult dec = seq2seq.decode(latent, dst_style, dc, &rng);
    out_lines.push_back(join(vocab.decode({dec.ids, dst_style}).tokens));
  }
  write_lines(out_path, out_lines);

  Manifest man("transfer", args.argv);
  man.set_seed(seed);
  man.input(in_path);
  man.input(ckpt_path);
  man.input(vocab_path);
  man.extra("direction", direction);
  man.extra("mode", mode);
  man.output(out_path);
  man.write(out_path + ".run");
  std::cout << out_lines.size() << " sentences -> " << out_path << "\n";
  return 0;
}

int cmd_evaluate(const Args& args, const std::string& src_path, const std::string& out_path,
                 const std::string& direction, const std::string& vocab_path,
                 const std::string& irony_clf, const std::string& senti_irony_clf,
                 const std::string& senti_non_clf, const std::string& report_path) {
  const Style src_style = parse_direction_src(direction);
  Vocabulary vocab = Vocabulary::load(vocab_path);
  LoadedScorers scorers = load_scorers(irony_clf, senti_irony_clf, senti_non_clf);
  const model::CalibratedSentimentScorer src_scorer =
      src_style == Style::non_irony ? scorers.bundle().senti_non_irony
                                    : scorers.bundle().senti_irony;
  const model::CalibratedSentimentScorer out_scorer =
      src_style == Style::non_irony ? scorers.bundle().senti_irony
                                    : scorers.bundle().senti_non_irony;

  auto src = read_token_file(src_path);
  auto out = read_token_file(out_path);
  if (src.size() != out.size())
    throw std::invalid_argument("evaluate: --src and --out line counts differ");

  std::vector<std::vector<std::string>> src_tokens, out_tokens;
  std::vector<std::pair<double, double>> std_pairs;
  int target_style_hits = 0;
  for (size_t i = 0; i < src.size(); ++i) {
    src_tokens.push_back(src[i].tokens);
    out_tokens.push_back(out[i].tokens);
    const TokenIdSequence sid = vocab.encode(src[i], src_style);
    const TokenIdSequence oid = vocab.encode(out[i], opposite(src_style));
    std_pairs.emplace_back(src_scorer.standardized(sid.ids), out_scorer.standardized(oid.ids));
    const bool ironic = scorers.irony->score(oid.ids) >= scorers.irony->threshold();
    if (ironic == (src_style == Style::non_irony)) ++target_style_hits;
  }

  eval::EvalReport rep = eval::evaluate_pairs(src_tokens, out_tokens, std_pairs);
  const double style_acc =
      src.empty() ? 0.0 : 100.0 * static_cast<double>(target_style_hits) / src.size();

  std::ostringstream records;
  records << rep.to_records() << "style_acc=" << std::fixed << std::setprecision(6)
          << style_acc << "\n";
  std::cout << rep.to_table();
  std::cout << "style acc    " << std::fixed << std::setprecision(2) << style_acc << "\n";
  if (!report_path.empty()) {
    std::ofstream f(report_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write report: " + report_path);
    f << records.str();
    f.close();

    Manifest man("evaluate", args.argv);
    man.input(src_path);
    man.input(out_path);
    man.input(vocab_path);
    man.input(irony_clf);
    man.input(senti_irony_clf);
    man.input(senti_non_clf);
    man.extra("direction", direction);
    man.output(report_path);
    man.write(report_path + ".run");
  }
  return 0;
}

std::string error_code(const std::exception& e) {
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid-argument";
  if (dynamic_cast<const std::runtime_error*>(&e)) return "runtime";
  if (dynamic_cast<const std::logic_error*>(&e)) return "logic";
  return "internal";
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ';');
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised irony style transfer: corpus tools, training, evaluation"};
  app.require_subcommand(1);

  Args args;
  for (int i = 1; i < argc; ++i) args.argv.emplace_back(argv[i]);

  // --- make-toy-data
  auto* toy_cmd = app.add_subcommand("make-toy-data", "synthesize the two-style template corpus");
  std::string toy_out = "toy";
  int toy_size = 500;
  uint64_t toy_seed = 7;
  toy_cmd->add_option("--out-dir", toy_out, "output directory");
  toy_cmd->add_option("--size", toy_size, "sentences per style");
  toy_cmd->add_option("--seed", toy_seed, "generator seed");

  // --- preprocess
  auto* pre_cmd = app.add_subcommand("preprocess", "normalize and filter a raw post file");
  std::string pre_in, pre_abbrev, pre_wordlist, pre_out_dir;
  std::string pre_lexicon, pre_split_ckpt, pre_split_vocab;
  double pre_english = 0.6, pre_split_threshold = 0.0;
  text::FilterConfig pre_filter;
  pre_cmd->add_option("--in", pre_in, "raw posts, one per line")->required();
  pre_cmd->add_option("--abbrev", pre_abbrev, "abbreviation TSV")->required();
  pre_cmd->add_option("--wordlist", pre_wordlist, "english wordlist")->required();
  pre_cmd->add_option("--out-dir", pre_out_dir, "output directory")->required();
  pre_cmd->add_option("--english-fraction", pre_english, "language-filter threshold");
  pre_cmd->add_option("--min-len", pre_filter.min_len, "minimum kept length");
  pre_cmd->add_option("--max-len", pre_filter.max_len, "maximum kept length");
  pre_cmd->add_option("--rare-below", pre_filter.rare_below, "token rare when count < this");
  pre_cmd->add_option("--max-rare", pre_filter.max_rare, "max rare tokens per sentence");
  pre_cmd->add_option("--lexicon", pre_lexicon, "sentiment lexicon TSV (for the style split)");
  pre_cmd->add_option("--split-ckpt", pre_split_ckpt, "irony classifier for the style split");
  pre_cmd->add_option("--split-vocab", pre_split_vocab, "vocabulary for the style split");
  pre_cmd->add_option("--split-threshold", pre_split_threshold,
                      "override the classifier's stored threshold");

  // --- build-vocab
  auto* voc_cmd = app.add_subcommand("build-vocab", "count tokens and write the vocabulary");
  std::vector<std::string> voc_in;
  std::string voc_out;
  long voc_min_count = 3;
  int voc_cap = 10000;
  voc_cmd->add_option("--in", voc_in, "token files (repeatable)")->required();
  voc_cmd->add_option("--out", voc_out, "vocabulary file")->required();
  voc_cmd->add_option("--min-count", voc_min_count, "minimum corpus count");
  voc_cmd->add_option("--cap", voc_cap, "maximum vocabulary size");

  // --- train-classifier
  auto* clf_cmd = app.add_subcommand("train-classifier", "train a binary text scorer");
  std::string clf_arch = "cnn", clf_data, clf_vocab, clf_out;
  int clf_epochs = 5, clf_embed = 128, clf_hidden = 128;
  uint64_t clf_seed = 7;
  bool clf_calibrate = false;
  model::ClassifierTrainOptions clf_opt;
  clf_cmd->add_option("--arch", clf_arch, "cnn | lstm");
  clf_cmd->add_option("--data", clf_data, "label<TAB>text training file")->required();
  clf_cmd->add_option("--vocab", clf_vocab, "vocabulary file")->required();
  clf_cmd->add_option("--out", clf_out, "checkpoint path")->required();
  clf_cmd->add_option("--epochs", clf_epochs, "training epochs");
  clf_cmd->add_option("--seed", clf_seed, "run seed");
  clf_cmd->add_option("--lr", clf_opt.lr, "learning rate");
  clf_cmd->add_option("--batch-size", clf_opt.batch_size, "batch size");
  clf_cmd->add_option("--holdout", clf_opt.holdout_fraction, "validation fraction");
  clf_cmd->add_option("--embed-dim", clf_embed, "embedding width");
  clf_cmd->add_option("--hidden-dim", clf_hidden, "recurrent hidden width (lstm only)");
  clf_cmd->add_flag("--calibrate", clf_calibrate, "calibrate the threshold on the same data");

  // --- calibrate
  auto* cal_cmd = app.add_subcommand("calibrate", "fit a classifier's decision threshold");
  std::string cal_ckpt, cal_data, cal_vocab, cal_out;
  cal_cmd->add_option("--ckpt", cal_ckpt, "classifier checkpoint")->required();
  cal_cmd->add_option("--data", cal_data, "label<TAB>text validation file")->required();
  cal_cmd->add_option("--vocab", cal_vocab, "vocabulary file")->required();
  cal_cmd->add_option("--out", cal_out, "output checkpoint (default: overwrite --ckpt)");

  // --- pretrain
  auto* pt_cmd = app.add_subcommand("pretrain", "denoising + back-translation pretraining");
  std::string pt_non, pt_irony, pt_vocab, pt_out_dir, pt_config;
  int pt_model_dim = 128, pt_heads = 4, pt_ffn = 512, pt_layers = 4, pt_shared = 2;
  ConfigOverrides pt_over;
  pt_cmd->add_option("--non-irony", pt_non, "non-ironic token file")->required();
  pt_cmd->add_option("--irony", pt_irony, "ironic token file")->required();
  pt_cmd->add_option("--vocab", pt_vocab, "vocabulary file")->required();
  pt_cmd->add_option("--out-dir", pt_out_dir, "checkpoint/log directory")->required();
  pt_cmd->add_option("--config", pt_config, "base key = value config file");
  pt_cmd->add_option("--model-dim", pt_model_dim, "model width");
  pt_cmd->add_option("--heads", pt_heads, "attention heads");
  pt_cmd->add_option("--ffn-dim", pt_ffn, "feed-forward width");
  pt_cmd->add_option("--layers", pt_layers, "layers per encoder/decoder");
  pt_cmd->add_option("--shared", pt_shared, "shared layers per side");
  pt_over.add_flags(pt_cmd);

  // --- train-rl
  auto* rl_cmd = app.add_subcommand("train-rl", "policy-gradient fine-tuning");
  std::string rl_non, rl_irony, rl_vocab, rl_out_dir, rl_config, rl_init;
  std::string rl_irony_clf, rl_si_clf, rl_sn_clf;
  ConfigOverrides rl_over;
  rl_cmd->add_option("--non-irony", rl_non, "non-ironic token file")->required();
  rl_cmd->add_option("--irony", rl_irony, "ironic token file")->required();
  rl_cmd->add_option("--vocab", rl_vocab, "vocabulary file")->required();
  rl_cmd->add_option("--init-ckpt", rl_init, "pretrained seq2seq checkpoint")->required();
  rl_cmd->add_option("--irony-clf", rl_irony_clf, "irony classifier checkpoint")->required();
  rl_cmd->add_option("--senti-irony-clf", rl_si_clf, "ironic-side sentiment scorer")->required();
  rl_cmd->add_option("--senti-non-clf", rl_sn_clf, "non-ironic-side sentiment scorer")
      ->required();
  rl_cmd->add_option("--out-dir", rl_out_dir, "checkpoint/log directory")->required();
  rl_cmd->add_option("--config", rl_config, "base key = value config file");
  rl_over.add_flags(rl_cmd);

  // --- transfer
  auto* tr_cmd = app.add_subcommand("transfer", "rewrite sentences into the other style");
  std::string tr_dir, tr_in, tr_ckpt, tr_vocab, tr_out, tr_mode = "greedy";
  double tr_temp = 1.0, tr_rep = 2.0;
  uint64_t tr_seed = 1;
  tr_cmd->add_option("--direction", tr_dir, "n2i | i2n")->required();
  tr_cmd->add_option("--in", tr_in, "source token file")->required();
  tr_cmd->add_option("--ckpt", tr_ckpt, "seq2seq checkpoint")->required();
  tr_cmd->add_option("--vocab", tr_vocab, "vocabulary file")->required();
  tr_cmd->add_option("--out", tr_out, "output file")->required();
  tr_cmd->add_option("--mode", tr_mode, "greedy | sample");
  tr_cmd->add_option("--temperature", tr_temp, "sampling temperature");
  tr_cmd->add_option("--rep-penalty", tr_rep, "repetition penalty");
  tr_cmd->add_option("--seed", tr_seed, "sampling seed");

  // --- evaluate
  auto* ev_cmd = app.add_subcommand("evaluate", "score aligned source/output files");
  std::string ev_src, ev_out, ev_dir, ev_vocab, ev_irony, ev_si, ev_sn, ev_report;
  ev_cmd->add_option("--src", ev_src, "source token file")->required();
  ev_cmd->add_option("--out", ev_out, "transferred token file")->required();
  ev_cmd->add_option("--direction", ev_dir, "n2i | i2n")->required();
  ev_cmd->add_option("--vocab", ev_vocab, "vocabulary file")->required();
  ev_cmd->add_option("--irony-clf", ev_irony, "irony classifier checkpoint")->required();
  ev_cmd->add_option("--senti-irony-clf", ev_si, "ironic-side sentiment scorer")->required();
  ev_cmd->add_option("--senti-non-clf", ev_sn, "non-ironic-side sentiment scorer")->required();
  ev_cmd->add_option("--report", ev_report, "write key=value records here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*toy_cmd) return cmd_make_toy_data(args, toy_out, toy_size, toy_seed);
    if (*pre_cmd)
      return cmd_preprocess(args, pre_in, pre_abbrev, pre_wordlist, pre_out_dir, pre_english,
                            pre_filter, pre_lexicon, pre_split_ckpt, pre_split_vocab,
                            pre_split_threshold);
    if (*voc_cmd) return cmd_build_vocab(args, voc_in, voc_out, voc_min_count, voc_cap);
    if (*clf_cmd)
      return cmd_train_classifier(args, clf_arch, clf_data, clf_vocab, clf_out, clf_epochs,
                                  clf_seed, clf_opt, clf_embed, clf_hidden, clf_calibrate);
    if (*cal_cmd) return cmd_calibrate(args, cal_ckpt, cal_data, cal_vocab, cal_out);
    if (*pt_cmd) {
      train::TrainingConfig cfg;
      if (!pt_config.empty()) cfg = train::TrainingConfig::load(pt_config);
      pt_over.apply(cfg);
      cfg.rl_epochs = 0;  // this command stops after pretraining
      cfg.validate();
      Vocabulary vocab = Vocabulary::load(pt_vocab);
      model::TransformerConfig mc;
      mc.vocab_size = vocab.size();
      mc.model_dim = pt_model_dim;
      mc.n_heads = pt_heads;
      mc.ffn_dim = pt_ffn;
      mc.n_layers = pt_layers;
      mc.n_shared = pt_shared;
      mc.max_len = cfg.max_len;
      mc.seed = cfg.seed;
      model::DualSeq2Seq seq2seq(mc);
      std::vector<std::string> extra;
      if (!pt_config.empty()) extra.push_back(pt_config);
      return run_training("pretrain", args, seq2seq, {}, cfg, pt_non, pt_irony, pt_vocab,
                          pt_out_dir, extra);
    }
    if (*rl_cmd) {
      train::TrainingConfig cfg;
      if (!rl_config.empty()) cfg = train::TrainingConfig::load(rl_config);
      rl_over.apply(cfg);
      cfg.pretrain_epochs = 0;  // resumes from --init-ckpt
      cfg.validate();
      model::DualSeq2Seq seq2seq = model::DualSeq2Seq::from_checkpoint(rl_init);
      LoadedScorers scorers = load_scorers(rl_irony_clf, rl_si_clf, rl_sn_clf);
      std::vector<std::string> extra = {rl_init, rl_irony_clf, rl_si_clf, rl_sn_clf};
      if (!rl_config.empty()) extra.push_back(rl_config);
      return run_training("train-rl", args, seq2seq, scorers.bundle(), cfg, rl_non, rl_irony,
                          rl_vocab, rl_out_dir, extra);
    }
    if (*tr_cmd)
      return cmd_transfer(args, tr_dir, tr_in, tr_ckpt, tr_vocab, tr_out, tr_mode, tr_temp,
                          tr_rep, tr_seed);
    if (*ev_cmd)
      return cmd_evaluate(args, ev_src, ev_out, ev_dir, ev_vocab, ev_irony, ev_si, ev_sn,
                          ev_report);
  } catch (const std::exception& e) {
    std::cerr << "ERROR " << error_code(e) << ": " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}
