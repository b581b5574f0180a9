#include "ironic/train/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ironic/util/text_io.hpp"

namespace ironic::train {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("training config: " + what);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad("key '" + key + "' wants true/false, got '" + v + "'");
}

}  // namespace

void TrainingConfig::validate() const {
  if (!(lr > 0)) bad("lr must be positive");
  if (batch_size < 1) bad("batch_size must be positive");
  if (!(beta > 0)) bad("beta must be positive");
  if (interval_p < 1) bad("interval_p must be positive");
  if (pretrain_epochs < 0) bad("pretrain_epochs must be >= 0");
  if (rl_epochs < 0) bad("rl_epochs must be >= 0");
  if (max_len < 2) bad("max_len must be at least 2");
  if (!(temperature > 0)) bad("temperature must be positive");
  if (rep_penalty < 0) bad("rep_penalty must be >= 0");
  if (!(clamp_eps > 0 && clamp_eps < 1)) bad("clamp_eps must lie in (0,1)");
  if (clip_norm < 0) bad("clip_norm must be >= 0");
  auto p01 = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!p01(noise_delete) || !p01(noise_duplicate) || !p01(noise_swap))
    bad("noise probabilities must lie in [0,1]");
  if (noise_delete + noise_duplicate + noise_swap > 1.0)
    bad("noise probabilities sum above 1");
  if (!(word_dropout >= 0.0 && word_dropout < 1.0))
    bad("word_dropout must lie in [0,1)");
}

TrainingConfig TrainingConfig::load(const std::string& path) {
  TrainingConfig cfg;
  const auto lines = read_lines(path);
  int line_no = 0;
  for (const std::string& raw : lines) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      bad("line " + std::to_string(line_no) + " has no '='");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "lr") cfg.lr = std::stod(val);
      else if (key == "batch_size") cfg.batch_size = std::stoi(val);
      else if (key == "beta") cfg.beta = std::stod(val);
      else if (key == "interval_p") cfg.interval_p = std::stoi(val);
      else if (key == "pretrain_epochs") cfg.pretrain_epochs = std::stoi(val);
      else if (key == "rl_epochs") cfg.rl_epochs = std::stoi(val);
      else if (key == "max_len") cfg.max_len = std::stoi(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "temperature") cfg.temperature = std::stod(val);
      else if (key == "rep_penalty") cfg.rep_penalty = std::stod(val);
      else if (key == "clamp_eps") cfg.clamp_eps = std::stod(val);
      else if (key == "clip_norm") cfg.clip_norm = std::stod(val);
      else if (key == "noise_delete") cfg.noise_delete = std::stod(val);
      else if (key == "noise_duplicate") cfg.noise_duplicate = std::stod(val);
      else if (key == "noise_swap") cfg.noise_swap = std::stod(val);
      else if (key == "word_dropout") cfg.word_dropout = std::stod(val);
      else if (key == "use_baseline") cfg.use_baseline = parse_bool(val, key);
      else if (key == "disable_irony_reward") cfg.disable_irony_reward = parse_bool(val, key);
      else if (key == "disable_senti_reward") cfg.disable_senti_reward = parse_bool(val, key);
      else if (key == "disable_bt") cfg.disable_bt = parse_bool(val, key);
      else if (key == "raw_prob_objective") cfg.raw_prob_objective = parse_bool(val, key);
      else bad("unknown key '" + key + "' on line " + std::to_string(line_no));
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      bad("cannot parse value '" + val + "' for key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

std::string TrainingConfig::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "lr = " << lr << "\n"
     << "batch_size = " << batch_size << "\n"
     << "beta = " << beta << "\n"
     << "interval_p = " << interval_p << "\n"
     << "pretrain_epochs = " << pretrain_epochs << "\n"
     << "rl_epochs = " << rl_epochs << "\n"
     << "max_len = " << max_len << "\n"
     << "seed = " << seed << "\n"
     << "temperature = " << temperature << "\n"
     << "rep_penalty = " << rep_penalty << "\n"
     << "clamp_eps = " << clamp_eps << "\n"
     << "clip_norm = " << clip_norm << "\n"
     << "noise_delete = " << noise_delete << "\n"
     << "noise_duplicate = " << noise_duplicate << "\n"
     << "noise_swap = " << noise_swap << "\n"
     << "word_dropout = " << word_dropout << "\n"
     << "use_baseline = " << (use_baseline ? "true" : "false") << "\n"
     << "disable_irony_reward = " << (disable_irony_reward ? "true" : "false") << "\n"
     << "disable_senti_reward = " << (disable_senti_reward ? "true" : "false") << "\n"
     << "disable_bt = " << (disable_bt ? "true" : "false") << "\n"
     << "raw_prob_objective = " << (raw_prob_objective ? "true" : "false") << "\n";
  return os.str();
}

void TrainingConfig::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) bad("cannot write '" + path + "'");
  out << to_text();
}

}  // namespace ironic::train
