#pragma once

#include <optional>

#include "recog/compressors.hpp"
#include "recog/decoders.hpp"
#include "recog/environment.hpp"

namespace recog {

enum class NoiseEstimator { truncation, syndrome_bp, syndrome_oracle };

// The full recognizer: compressor pair, per-index noise estimation
// strategy, typicality policy, and the distributions needed to score and
// gate candidates. Immutable; safe to share across trial workers.
struct RecognitionSystem {
  CompressorPair pair;
  NoiseEstimator estimator;
  Pmf qx;
  NoiseModel noise;
  TypicalityParams typicality{};
  BpConfig bp{};

  RecognitionSystem(CompressorPair pair, NoiseEstimator estimator, Pmf qx,
                    NoiseModel noise, TypicalityParams typicality = {},
                    BpConfig bp = {});
};

// Compressed memory: one row H x_i per pattern. Bit-packed over GF(2).
class CompressedMemory {
 public:
  CompressedMemory(FieldSpec spec, std::size_t row_len, std::uint64_t count);

  FieldSpec spec() const { return spec_; }
  std::size_t row_len() const { return row_len_; }
  std::uint64_t size() const { return count_; }
  bool packed() const { return spec_.order() == 2; }
  std::size_t words_per_row() const { return words_per_row_; }
  std::span<const std::uint64_t> packed_row(std::uint64_t i) const;
  FieldVector entry(std::uint64_t i) const;

  std::span<std::uint64_t> packed_storage() { return packed_; }
  std::span<symbol_t> byte_storage() { return bytes_; }

 private:
  FieldSpec spec_;
  std::size_t row_len_;
  std::uint64_t count_;
  std::size_t words_per_row_;
  std::vector<std::uint64_t> packed_;
  std::vector<symbol_t> bytes_;
};

CompressedMemory build_memory(const RecognitionSystem& sys,
                              const PatternDatabase& db);

// Per-index noise estimation. A missing value is the failure symbol.
//
// Truncation: difference of the two prefixes, zero-padded to pattern
// length; rejected in strict mode when the pair is not jointly typical.
// Syndrome: decode of sigma's top block minus the memory row; rejected
// when the decoder fails or the estimate falls outside the noise typical
// set in strict mode.
std::optional<FieldVector> estimate_noise_truncation(
    const FieldVector& memory_row, const FieldVector& sigma,
    const RecognitionSystem& sys);
std::optional<FieldVector> estimate_noise_syndrome(
    const FieldVector& memory_row, const FieldVector& sigma,
    const RecognitionSystem& sys, BpDecoder* shared_decoder = nullptr,
    int* iterations_out = nullptr);

enum class ErrorEvent { none, missed_typicality, false_accept, tie };

// Outcome of one recognition call. scores[i] is the log2 noise likelihood
// of candidate i, NaN for rejected candidates. best_index is the smallest
// index attaining the best finite score; absent when every index failed.
struct Verdict {
  std::optional<std::uint64_t> best_index;
  std::vector<double> scores;
  double best_score = 0.0;
  bool tie = false;
  std::uint64_t decode_iterations = 0;  // summed over indices

  std::uint64_t accepted_count() const;
};

Verdict recognize(const RecognitionSystem& sys, const CompressedMemory& memory,
                  const FieldVector& sigma);

// Error-event classification for a finished trial: a rejected true index
// dominates, then exact ties at the top, then wins by a false index.
ErrorEvent classify_error(const Verdict& verdict, const TestInstance& instance);

}  // namespace recog
