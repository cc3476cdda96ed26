#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "recog/noise.hpp"

namespace recog {

// Recognition environment: field, pattern length and rate, pattern symbol
// distribution, and the additive noise model. The index drawn in a test is
// always uniform over the database.
class Environment {
 public:
  static constexpr std::uint64_t kDefaultMcCap = std::uint64_t{1} << 22;

  // Database size round(2^(n*rc)); throws ResourceError past the cap.
  Environment(FieldSpec spec, std::size_t n, double rc, Pmf qx,
              NoiseModel noise, std::uint64_t mc_cap = kDefaultMcCap);

  // Same, with the database size given directly.
  static Environment with_pattern_count(FieldSpec spec, std::size_t n,
                                        std::uint64_t mc, Pmf qx,
                                        NoiseModel noise,
                                        std::uint64_t mc_cap = kDefaultMcCap);

  FieldSpec spec() const { return spec_; }
  std::size_t n() const { return n_; }
  double rc_requested() const { return rc_requested_; }
  double rc_realized() const;  // log2(pattern_count) / n
  std::uint64_t pattern_count() const { return mc_; }
  const Pmf& qx() const { return qx_; }
  const NoiseModel& noise() const { return noise_; }

 private:
  Environment(FieldSpec spec, std::size_t n, double rc_requested,
              std::uint64_t mc, Pmf qx, NoiseModel noise);

  FieldSpec spec_;
  std::size_t n_;
  double rc_requested_;
  std::uint64_t mc_;
  Pmf qx_;
  NoiseModel noise_;
};

// The set of patterns to recognize. Stored bit-packed over GF(2) and as raw
// bytes otherwise; both expose the same symbols.
class PatternDatabase {
 public:
  PatternDatabase(FieldSpec spec, std::size_t n, std::uint64_t count,
                  std::uint64_t seed);

  FieldSpec spec() const { return spec_; }
  std::size_t pattern_len() const { return n_; }
  std::uint64_t size() const { return count_; }
  std::uint64_t seed() const { return seed_; }

  bool packed() const { return spec_.order() == 2; }
  std::size_t words_per_pattern() const { return words_per_pattern_; }
  std::span<const std::uint64_t> packed_pattern(std::uint64_t i) const;
  FieldVector pattern(std::uint64_t i) const;

  // mutable access for generators/loaders
  std::span<std::uint64_t> packed_storage() { return packed_; }
  std::span<symbol_t> byte_storage() { return bytes_; }

 private:
  FieldSpec spec_;
  std::size_t n_;
  std::uint64_t count_;
  std::uint64_t seed_;
  std::size_t words_per_pattern_;
  std::vector<std::uint64_t> packed_;
  std::vector<symbol_t> bytes_;
};

// One recognition task: a uniformly drawn index, the noise realization, and
// the observation y = x_j + z.
struct TestInstance {
  std::uint64_t index;
  FieldVector z;
  FieldVector y;
};

// Deterministic given (env, seed): pattern i is sampled from the stream
// keyed (seed, "pattern", i), so generation order does not matter.
PatternDatabase generate_database(const Environment& env, std::uint64_t seed);

TestInstance draw_test(const PatternDatabase& db, const NoiseModel& noise,
                       std::uint64_t seed);

// Flat binary interchange: magic, r, n, count, seed, then row-major symbols
// one byte each, little-endian header fields.
void save_database(const PatternDatabase& db, const std::filesystem::path& path);
PatternDatabase load_database(const std::filesystem::path& path);

}  // namespace recog
