#include "recog/recognition.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace recog {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_syndrome(NoiseEstimator e) {
  return e == NoiseEstimator::syndrome_bp ||
         e == NoiseEstimator::syndrome_oracle;
}

}  // namespace

RecognitionSystem::RecognitionSystem(CompressorPair pair_in,
                                     NoiseEstimator estimator_in, Pmf qx_in,
                                     NoiseModel noise_in,
                                     TypicalityParams typicality_in,
                                     BpConfig bp_in)
    : pair(std::move(pair_in)),
      estimator(estimator_in),
      qx(std::move(qx_in)),
      noise(std::move(noise_in)),
      typicality(typicality_in),
      bp(bp_in) {
  if (!(typicality.epsilon > 0.0))
    throw std::invalid_argument("typicality epsilon must be > 0");
  if (qx.spec() != pair.memory.spec() || noise.spec() != pair.memory.spec())
    throw std::invalid_argument("distribution fields do not match compressors");

  if (estimator == NoiseEstimator::truncation) {
    if (pair.tag != ConstructionTag::truncation)
      throw std::invalid_argument("truncation estimator needs truncation pair");
    if (typicality.mode == TypicalityParams::Mode::strict && !noise.is_iid())
      throw std::invalid_argument(
          "strict truncation typicality is defined for i.i.d. noise only");
  } else {
    // the sensory matrix must start with H so that the top block of sigma
    // minus a memory row is a syndrome of the noise
    if (pair.sensory.rows() < pair.memory.rows())
      throw std::invalid_argument("sensory rows below memory rows");
    const auto h_entries = pair.memory.entries();
    const auto g_entries = pair.sensory.entries();
    if (g_entries.size() < h_entries.size() ||
        !std::equal(h_entries.begin(), h_entries.end(), g_entries.begin()))
      throw std::invalid_argument(
          "sensory matrix does not extend the memory matrix");
  }
}

CompressedMemory::CompressedMemory(FieldSpec spec, std::size_t row_len,
                                   std::uint64_t count)
    : spec_(spec), row_len_(row_len), count_(count) {
  if (packed()) {
    words_per_row_ = (row_len + 63) / 64;
    packed_.assign(count * words_per_row_, 0);
  } else {
    words_per_row_ = 0;
    bytes_.assign(count * row_len, 0);
  }
}

std::span<const std::uint64_t> CompressedMemory::packed_row(
    std::uint64_t i) const {
  return std::span<const std::uint64_t>(packed_).subspan(i * words_per_row_,
                                                         words_per_row_);
}

FieldVector CompressedMemory::entry(std::uint64_t i) const {
  if (i >= count_) throw std::out_of_range("memory index out of range");
  std::vector<symbol_t> elems(row_len_);
  if (packed()) {
    const auto w = packed_row(i);
    for (std::size_t t = 0; t < row_len_; ++t)
      elems[t] = static_cast<symbol_t>((w[t >> 6] >> (t & 63)) & 1u);
  } else {
    std::memcpy(elems.data(), bytes_.data() + i * row_len_, row_len_);
  }
  return FieldVector(spec_, std::move(elems));
}

CompressedMemory build_memory(const RecognitionSystem& sys,
                              const PatternDatabase& db) {
  const SparseMatrix& h = sys.pair.memory;
  if (db.spec() != h.spec())
    throw std::invalid_argument("database field does not match compressor");
  if (db.pattern_len() != h.cols())
    throw std::invalid_argument("pattern length does not match compressor");

  CompressedMemory memory(db.spec(), h.rows(), db.size());

  if (db.packed()) {
    auto storage = memory.packed_storage();
    const std::size_t wpr = memory.words_per_row();
    if (sys.pair.tag == ConstructionTag::truncation) {
      // H = [I 0]: each row is the pattern prefix
      const std::size_t tail = h.rows() & 63;
      const std::uint64_t mask =
          tail ? ((std::uint64_t{1} << tail) - 1) : ~std::uint64_t{0};
      for (std::uint64_t i = 0; i < db.size(); ++i) {
        const auto src = db.packed_pattern(i);
        auto dst = storage.subspan(i * wpr, wpr);
        for (std::size_t w = 0; w < wpr; ++w) dst[w] = src[w];
        dst[wpr - 1] &= mask;
      }
    } else {
      for (std::uint64_t i = 0; i < db.size(); ++i) {
        const auto src = db.packed_pattern(i);
        auto dst = storage.subspan(i * wpr, wpr);
        for (const MatrixEntry& e : h.entries()) {
          const std::uint64_t bit = (src[e.col >> 6] >> (e.col & 63)) & 1u;
          dst[e.row >> 6] ^= bit << (e.row & 63);
        }
      }
    }
  } else {
    auto storage = memory.byte_storage();
    for (std::uint64_t i = 0; i < db.size(); ++i) {
      const FieldVector row = h.multiply(db.pattern(i));
      std::memcpy(storage.data() + i * h.rows(), row.elems().data(), h.rows());
    }
  }
  return memory;
}

std::optional<FieldVector> estimate_noise_truncation(
    const FieldVector& memory_row, const FieldVector& sigma,
    const RecognitionSystem& sys) {
  if (sys.estimator != NoiseEstimator::truncation)
    throw std::invalid_argument("system is not a truncation recognizer");
  const std::size_t n_min = sys.pair.n_min();
  const FieldVector s_pre = memory_row.prefix(n_min);
  const FieldVector sigma_pre = sigma.prefix(n_min);

  if (sys.typicality.mode == TypicalityParams::Mode::strict &&
      !in_joint_typical_set(s_pre, sigma_pre, sys.qx, sys.noise.iid_pmf(),
                            sys.typicality))
    return std::nullopt;

  std::vector<symbol_t> z(sys.pair.n(), 0);
  for (std::size_t t = 0; t < n_min; ++t)
    z[t] = gf_sub(sigma_pre[t], s_pre[t], sigma.spec());
  return FieldVector(sigma.spec(), std::move(z));
}

std::optional<FieldVector> estimate_noise_syndrome(
    const FieldVector& memory_row, const FieldVector& sigma,
    const RecognitionSystem& sys, BpDecoder* shared_decoder,
    int* iterations_out) {
  if (!is_syndrome(sys.estimator))
    throw std::invalid_argument("system is not a syndrome recognizer");
  const std::size_t m_rows = sys.pair.memory.rows();
  FieldVector target = vec_sub(sigma.prefix(m_rows), memory_row);

  DecodeOutcome outcome;
  if (sys.estimator == NoiseEstimator::syndrome_bp) {
    if (shared_decoder) {
      outcome = shared_decoder->decode(target);
    } else {
      outcome = bp_syndrome_decode(sys.pair.memory, target,
                                   sys.noise.marginal(), sys.bp);
    }
  } else {
    outcome = ml_syndrome_decode(sys.pair.memory, target, sys.noise);
  }
  if (iterations_out) *iterations_out = outcome.iterations;
  if (outcome.failed()) return std::nullopt;
  if (sys.typicality.mode == TypicalityParams::Mode::strict &&
      !in_noise_typical_set(*outcome.estimate, sys.noise, sys.typicality))
    return std::nullopt;
  return std::move(outcome.estimate);
}

namespace {

struct ArgmaxTracker {
  std::optional<std::uint64_t> best_index;
  double best_score = kNaN;
  bool tie = false;

  void offer(std::uint64_t index, double score) {
    if (std::isnan(score)) return;
    if (!best_index || score > best_score) {
      best_index = index;
      best_score = score;
      tie = false;
    } else if (score == best_score) {
      tie = true;
    }
  }
};

// Truncation recognizer over bit-packed GF(2) memory with i.i.d. noise:
// every quantity needed per index is a function of two prefix weights, so
// candidates cost a couple of popcounts each. Produces bit-identical
// verdicts to the generic loop (both evaluate histogram forms).
Verdict recognize_packed_truncation(const RecognitionSystem& sys,
                                    const CompressedMemory& memory,
                                    const FieldVector& sigma) {
  const std::size_t n_min = sys.pair.n_min();
  const Pmf& qz = sys.noise.iid_pmf();
  const Pmf qy = convolve(sys.qx, qz);
  const std::vector<double> lqx = log2_probs(sys.qx);
  const std::vector<double> lqy = log2_probs(qy);
  const std::vector<double> lqz = log2_probs(qz);
  const double hx = entropy(sys.qx);
  const double hy = entropy(qy);
  const double hz = entropy(qz);
  const double eps = sys.typicality.epsilon;
  const bool strict = sys.typicality.mode == TypicalityParams::Mode::strict;
  const double n = static_cast<double>(n_min);

  const PackedBits sigma_bits = PackedBits::from_vector(sigma);
  const auto sigma_words = sigma_bits.words();

  // the observation-side condition does not depend on the candidate
  bool sigma_typical = true;
  if (strict) {
    const std::uint64_t wy = packed_prefix_popcount(sigma_words, n_min);
    const std::uint64_t cy[2] = {n_min - wy, wy};
    const double ly = counts_log_prob(cy, lqy);
    sigma_typical = std::abs(-ly / n - hy) < eps;
  }

  Verdict verdict;
  verdict.scores.assign(memory.size(), kNaN);
  ArgmaxTracker tracker;

  for (std::uint64_t i = 0; i < memory.size(); ++i) {
    const auto row = memory.packed_row(i);
    const std::uint64_t wd =
        packed_prefix_xor_popcount(row, sigma_words, n_min);
    if (strict) {
      if (!sigma_typical) continue;
      const std::uint64_t wx = packed_prefix_popcount(row, n_min);
      const std::uint64_t cx[2] = {n_min - wx, wx};
      const double lx = counts_log_prob(cx, lqx);
      if (!(std::abs(-lx / n - hx) < eps)) continue;
      const std::uint64_t cd0[2] = {n_min - wd, wd};
      const double lxy = lx + counts_log_prob(cd0, lqz);
      if (!(std::abs(-lxy / n - (hx + hz)) < eps)) continue;
    }
    const std::uint64_t cd[2] = {n_min - wd, wd};
    const double score = counts_log_prob(cd, lqz);
    verdict.scores[i] = score;
    tracker.offer(i, score);
  }
  verdict.best_index = tracker.best_index;
  verdict.best_score = tracker.best_score;
  verdict.tie = tracker.tie;
  return verdict;
}

}  // namespace

Verdict recognize(const RecognitionSystem& sys, const CompressedMemory& memory,
                  const FieldVector& sigma) {
  if (memory.row_len() != sys.pair.memory.rows())
    throw std::invalid_argument("memory row length does not match compressor");
  if (sigma.size() != sys.pair.sensory.rows())
    throw std::invalid_argument("sigma length does not match sensory rows");

  if (sys.estimator == NoiseEstimator::truncation && memory.packed() &&
      sys.noise.is_iid())
    return recognize_packed_truncation(sys, memory, sigma);

  Verdict verdict;
  verdict.scores.assign(memory.size(), kNaN);
  ArgmaxTracker tracker;

  const bool truncation = sys.estimator == NoiseEstimator::truncation;
  const std::size_t n_min = sys.pair.n_min();

  std::optional<BpDecoder> decoder;
  if (sys.estimator == NoiseEstimator::syndrome_bp)
    decoder.emplace(sys.pair.memory, sys.noise.marginal(), sys.bp);

  std::vector<double> lqz;
  if (sys.noise.is_iid()) lqz = log2_probs(sys.noise.iid_pmf());

  for (std::uint64_t i = 0; i < memory.size(); ++i) {
    const FieldVector row = memory.entry(i);
    std::optional<FieldVector> estimate;
    if (truncation) {
      estimate = estimate_noise_truncation(row, sigma, sys);
    } else {
      int iters = 0;
      estimate = estimate_noise_syndrome(row, sigma, sys,
                                         decoder ? &*decoder : nullptr, &iters);
      verdict.decode_iterations += static_cast<std::uint64_t>(iters);
    }
    if (!estimate) continue;

    // truncation scores the informative prefix; the zero padding would only
    // add a constant factor shared by every candidate
    double score;
    if (sys.noise.is_iid()) {
      const FieldVector scored =
          truncation ? estimate->prefix(n_min) : *estimate;
      score = counts_log_prob(symbol_counts(scored), lqz);
    } else {
      const FieldVector scored =
          truncation ? estimate->prefix(n_min) : *estimate;
      score = sys.noise.log_likelihood(scored);
    }
    verdict.scores[i] = score;
    tracker.offer(i, score);
  }
  verdict.best_index = tracker.best_index;
  verdict.best_score = tracker.best_score;
  verdict.tie = tracker.tie;
  return verdict;
}

std::uint64_t Verdict::accepted_count() const {
  std::uint64_t c = 0;
  for (double s : scores)
    if (!std::isnan(s)) ++c;
  return c;
}

ErrorEvent classify_error(const Verdict& verdict,
                          const TestInstance& instance) {
  const std::uint64_t j = instance.index;
  if (j >= verdict.scores.size())
    throw std::invalid_argument("instance index outside verdict");
  if (std::isnan(verdict.scores[j])) return ErrorEvent::missed_typicality;
  if (verdict.best_index && *verdict.best_index == j && !verdict.tie)
    return ErrorEvent::none;
  if (verdict.tie && verdict.scores[j] == verdict.best_score)
    return ErrorEvent::tie;
  return ErrorEvent::false_accept;
}

}  // namespace recog
