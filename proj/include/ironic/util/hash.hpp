#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ironic {

// FNV-1a 64-bit. Used for content hashes in run manifests and for the
// frozen-parameter checks; not cryptographic.
inline uint64_t fnv1a64(std::string_view data, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(uint64_t v);

// Hash of a whole file's bytes; throws std::runtime_error if unreadable.
uint64_t hash_file(const std::string& path);

}  // namespace ironic
