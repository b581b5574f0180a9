#include "ironic/util/hash.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ironic {

std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string data = ss.str();
  return fnv1a64(data);
}

}  // namespace ironic
