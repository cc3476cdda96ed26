#include "recog/environment.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "recog/errors.hpp"

namespace recog {

namespace {

// Patterns are byte-addressable in the interchange format; keep in-memory
// databases under a sane ceiling regardless of the pattern-count cap.
constexpr std::uint64_t kMaxDatabaseBytes = std::uint64_t{3} << 30;

}  // namespace

Environment::Environment(FieldSpec spec, std::size_t n, double rc_requested,
                         std::uint64_t mc, Pmf qx, NoiseModel noise)
    : spec_(spec),
      n_(n),
      rc_requested_(rc_requested),
      mc_(mc),
      qx_(std::move(qx)),
      noise_(std::move(noise)) {
  if (n_ < 1) throw ConfigError("pattern length must be >= 1");
  if (qx_.spec() != spec_) throw ConfigError("qx field does not match env");
  if (noise_.spec() != spec_) throw ConfigError("noise field does not match env");
  if (mc_ < 2)
    throw ConfigError("database needs at least 2 patterns; n*rc too small");
}

Environment::Environment(FieldSpec spec, std::size_t n, double rc, Pmf qx,
                         NoiseModel noise, std::uint64_t mc_cap)
    : Environment(spec, n, rc,
                  [&] {
                    if (!(rc > 0.0)) throw ConfigError("pattern rate must be > 0");
                    const double bits = rc * static_cast<double>(n);
                    if (bits > 62.0)
                      throw ResourceError(
                          "pattern count 2^" + std::to_string(bits) +
                          " exceeds cap " + std::to_string(mc_cap));
                    const std::uint64_t mc =
                        static_cast<std::uint64_t>(std::llround(std::exp2(bits)));
                    if (mc > mc_cap)
                      throw ResourceError("pattern count " + std::to_string(mc) +
                                          " exceeds cap " + std::to_string(mc_cap));
                    return mc;
                  }(),
                  std::move(qx), std::move(noise)) {}

Environment Environment::with_pattern_count(FieldSpec spec, std::size_t n,
                                            std::uint64_t mc, Pmf qx,
                                            NoiseModel noise,
                                            std::uint64_t mc_cap) {
  if (mc > mc_cap)
    throw ResourceError("pattern count " + std::to_string(mc) +
                        " exceeds cap " + std::to_string(mc_cap));
  const double rc = std::log2(static_cast<double>(mc)) / static_cast<double>(n);
  return Environment(spec, n, rc, mc, std::move(qx), std::move(noise));
}

double Environment::rc_realized() const {
  return std::log2(static_cast<double>(mc_)) / static_cast<double>(n_);
}

PatternDatabase::PatternDatabase(FieldSpec spec, std::size_t n,
                                 std::uint64_t count, std::uint64_t seed)
    : spec_(spec), n_(n), count_(count), seed_(seed) {
  const std::uint64_t bytes = count * static_cast<std::uint64_t>(n);
  if (bytes > kMaxDatabaseBytes)
    throw ResourceError("database of " + std::to_string(count) +
                        " patterns x " + std::to_string(n) +
                        " symbols exceeds the memory budget");
  if (packed()) {
    words_per_pattern_ = (n + 63) / 64;
    packed_.assign(count * words_per_pattern_, 0);
  } else {
    words_per_pattern_ = 0;
    bytes_.assign(bytes, 0);
  }
}

std::span<const std::uint64_t> PatternDatabase::packed_pattern(
    std::uint64_t i) const {
  return std::span<const std::uint64_t>(packed_).subspan(
      i * words_per_pattern_, words_per_pattern_);
}

FieldVector PatternDatabase::pattern(std::uint64_t i) const {
  if (i >= count_) throw std::out_of_range("pattern index out of range");
  std::vector<symbol_t> elems(n_);
  if (packed()) {
    const auto w = packed_pattern(i);
    for (std::size_t t = 0; t < n_; ++t)
      elems[t] = static_cast<symbol_t>((w[t >> 6] >> (t & 63)) & 1u);
  } else {
    std::memcpy(elems.data(), bytes_.data() + i * n_, n_);
  }
  return FieldVector(spec_, std::move(elems));
}

PatternDatabase generate_database(const Environment& env, std::uint64_t seed) {
  PatternDatabase db(env.spec(), env.n(), env.pattern_count(), seed);
  const std::size_t n = env.n();
  const Pmf& qx = env.qx();

  if (db.packed()) {
    const std::size_t wpp = db.words_per_pattern();
    const std::uint64_t tail_mask =
        (n & 63) ? ((std::uint64_t{1} << (n & 63)) - 1) : ~std::uint64_t{0};
    auto storage = db.packed_storage();
    const bool fair_coin = qx.is_uniform();
    for (std::uint64_t i = 0; i < db.size(); ++i) {
      RngStream stream(seed, "pattern", i);
      auto row = storage.subspan(i * wpp, wpp);
      if (fair_coin) {
        for (std::size_t w = 0; w < wpp; ++w) row[w] = stream.next_u64();
        row[wpp - 1] &= tail_mask;
      } else {
        for (std::size_t t = 0; t < n; ++t)
          if (qx.sample(stream))
            row[t >> 6] |= std::uint64_t{1} << (t & 63);
      }
    }
  } else {
    auto storage = db.byte_storage();
    for (std::uint64_t i = 0; i < db.size(); ++i) {
      RngStream stream(seed, "pattern", i);
      for (std::size_t t = 0; t < n; ++t)
        storage[i * n + t] = qx.sample(stream);
    }
  }
  return db;
}

TestInstance draw_test(const PatternDatabase& db, const NoiseModel& noise,
                       std::uint64_t seed) {
  if (db.size() == 0) throw std::invalid_argument("empty pattern database");
  if (noise.spec() != db.spec())
    throw std::invalid_argument("noise field does not match database");
  RngStream index_stream(seed, "index", 0);
  const std::uint64_t j = index_stream.next_below(db.size());
  RngStream noise_stream(seed, "noise", 0);
  FieldVector z = noise.sample(db.pattern_len(), noise_stream);
  FieldVector y = vec_add(db.pattern(j), z);
  return TestInstance{j, std::move(z), std::move(y)};
}

namespace {

constexpr char kMagic[4] = {'R', 'G', 'D', 'B'};

void write_u64(std::ostream& os, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(buf, 8);
}

std::uint64_t read_u64(std::istream& is) {
  char buf[8];
  is.read(buf, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= std::uint64_t{static_cast<unsigned char>(buf[i])} << (8 * i);
  return v;
}

}  // namespace

void save_database(const PatternDatabase& db,
                   const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os.write(kMagic, 4);
  write_u64(os, db.spec().order());
  write_u64(os, db.pattern_len());
  write_u64(os, db.size());
  write_u64(os, db.seed());
  std::vector<char> row(db.pattern_len());
  for (std::uint64_t i = 0; i < db.size(); ++i) {
    const FieldVector p = db.pattern(i);
    for (std::size_t t = 0; t < row.size(); ++t)
      row[t] = static_cast<char>(p[t]);
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

PatternDatabase load_database(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path.string() + " is not a pattern database");
  const std::uint64_t order = read_u64(is);
  const std::uint64_t n = read_u64(is);
  const std::uint64_t count = read_u64(is);
  const std::uint64_t seed = read_u64(is);
  PatternDatabase db(FieldSpec(static_cast<std::uint32_t>(order)),
                     static_cast<std::size_t>(n), count, seed);
  std::vector<char> row(n);
  for (std::uint64_t i = 0; i < count; ++i) {
    is.read(row.data(), static_cast<std::streamsize>(n));
    if (!is) throw std::runtime_error("truncated database file");
    for (std::size_t t = 0; t < n; ++t) {
      const auto s = static_cast<symbol_t>(static_cast<unsigned char>(row[t]));
      if (s >= order) throw std::runtime_error("corrupt symbol in database");
      if (db.packed()) {
        if (s) db.packed_storage()[i * db.words_per_pattern() + (t >> 6)] |=
            std::uint64_t{1} << (t & 63);
      } else {
        db.byte_storage()[i * n + t] = s;
      }
    }
  }
  return db;
}

}  // namespace recog
