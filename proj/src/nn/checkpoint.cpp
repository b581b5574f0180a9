#include "ironic/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ironic::nn {

namespace {

constexpr char kMagic[8] = {'I', 'R', 'N', 'C', 'K', 'P', 'T', '1'};

void put_u32(std::string& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64(buf, bits);
}

class Reader {
 public:
  Reader(std::string data, std::string path)
      : data_(std::move(data)), path_(std::move(path)) {}

  uint32_t u32() { return static_cast<uint32_t>(uint_n(4)); }
  uint64_t u64() { return uint_n(8); }

  double f64() {
    const uint64_t bits = uint_n(8);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }

  std::string bytes(size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == data_.size(); }

 private:
  uint64_t uint_n(int n) {
    need(static_cast<size_t>(n));
    uint64_t v = 0;
    for (int i = 0; i < n; ++i)
      v |= static_cast<uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += static_cast<size_t>(n);
    return v;
  }

  void need(size_t n) {
    if (pos_ + n > data_.size())
      throw std::runtime_error("checkpoint '" + path_ + "' is truncated");
  }

  std::string data_;
  std::string path_;
  size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const std::string& path, const ParameterSet& params) {
  std::string buf;
  buf.append(kMagic, sizeof(kMagic));
  put_u64(buf, params.size());
  for (const auto& p : params.all()) {
    put_u32(buf, static_cast<uint32_t>(p->name.size()));
    buf.append(p->name);
    put_u64(buf, static_cast<uint64_t>(p->value.rows()));
    put_u64(buf, static_cast<uint64_t>(p->value.cols()));
    for (Index r = 0; r < p->value.rows(); ++r)
      for (Index c = 0; c < p->value.cols(); ++c) put_f64(buf, p->value(r, c));
  }
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("short write to checkpoint '" + path + "'");
  }
  {
    std::ofstream man(path + ".manifest", std::ios::trunc);
    if (!man) throw std::runtime_error("cannot write manifest for '" + path + "'");
    man << "tensors=" << params.size() << "\n";
    for (const auto& p : params.all())
      man << p->name << "\t" << p->value.rows() << "\t" << p->value.cols()
          << (p->trainable ? "" : "\tfrozen") << "\n";
  }
}

std::vector<std::pair<std::string, Matrix>> load_checkpoint_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  Reader rd(ss.str(), path);

  const std::string magic = rd.bytes(sizeof(kMagic));
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("'" + path + "' is not a checkpoint (bad magic)");
  const uint64_t n = rd.u64();

  std::vector<std::pair<std::string, Matrix>> tensors;
  tensors.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    const uint32_t name_len = rd.u32();
    std::string name = rd.bytes(name_len);
    const auto rows = static_cast<Index>(rd.u64());
    const auto cols = static_cast<Index>(rd.u64());
    if (rows < 0 || cols < 0 || rows > (1 << 28) || cols > (1 << 28))
      throw std::runtime_error("checkpoint '" + path + "': implausible shape for '" + name + "'");
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c) m(r, c) = rd.f64();
    tensors.emplace_back(std::move(name), std::move(m));
  }
  if (!rd.done())
    throw std::runtime_error("checkpoint '" + path + "' has trailing bytes");
  return tensors;
}

void load_checkpoint(const std::string& path, ParameterSet& params) {
  auto tensors = load_checkpoint_raw(path);
  if (tensors.size() != params.size()) {
    std::ostringstream os;
    os << "checkpoint '" << path << "' holds " << tensors.size() << " tensors, model expects "
       << params.size();
    throw std::runtime_error(os.str());
  }
  for (auto& [name, m] : tensors) {
    Parameter* p = params.find(name);
    if (!p)
      throw std::runtime_error("checkpoint '" + path + "': unexpected tensor '" + name + "'");
    if (p->value.rows() != m.rows() || p->value.cols() != m.cols()) {
      std::ostringstream os;
      os << "checkpoint '" << path << "': tensor '" << name << "' is " << m.rows() << "x"
         << m.cols() << ", model expects " << p->value.rows() << "x" << p->value.cols();
      throw std::runtime_error(os.str());
    }
    p->value = std::move(m);
  }
}

}  // namespace ironic::nn
