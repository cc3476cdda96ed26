#pragma once

#include <cassert>
#include <cstdint>
#include <string_view>

namespace recog {

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace detail

// Key for an independent random stream, derived from (master seed, purpose
// tag, index). Work units that own their stream key reproduce identically
// no matter how iterations are ordered or spread over workers.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t index) {
  return detail::mix64(detail::mix64(master ^ detail::hash_tag(tag)) ^ index);
}

// Counter-based generator (splitmix64 walk from a derived key).
class RngStream {
 public:
  RngStream(std::uint64_t master, std::string_view tag, std::uint64_t index)
      : state_(derive_seed(master, tag, index)) {}
  explicit RngStream(std::uint64_t key) : state_(detail::mix64(key)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  // Uniform in [0, 1), 53 usable bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, bound), rejection-sampled so there is no modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    assert(bound >= 1);
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace recog
