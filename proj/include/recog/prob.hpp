#pragma once

#include <span>
#include <vector>

#include "recog/field.hpp"
#include "recog/rng.hpp"

namespace recog {

class NoiseModel;

// Distribution over GF(r).
class Pmf {
 public:
  // Probabilities must be nonnegative and sum to 1 within 1e-12.
  Pmf(FieldSpec spec, std::vector<double> probs);

  static Pmf uniform(FieldSpec spec);
  static Pmf point_mass(FieldSpec spec, symbol_t at);
  static Pmf bernoulli(double q);  // GF(2), P(1) = q
  // P(0) = 1-q, remaining mass spread evenly: P(k) = q/(r-1) for k != 0.
  static Pmf uniform_error(FieldSpec spec, double q);

  FieldSpec spec() const { return spec_; }
  double operator[](symbol_t k) const { return probs_[k]; }
  std::span<const double> probs() const { return probs_; }
  bool is_uniform() const;
  symbol_t sample(RngStream& rng) const;

  bool operator==(const Pmf&) const = default;

 private:
  FieldSpec spec_;
  std::vector<double> probs_;
};

// Shannon entropy in bits per symbol, with 0 log 0 := 0.
double entropy(const Pmf& p);

// Output distribution of the additive channel: (px * pz)(k) = sum_a
// px(a) pz(k - a) with subtraction in GF(r).
Pmf convolve(const Pmf& px, const Pmf& pz);

// log2 probability of an i.i.d. sequence; -inf when any symbol has zero
// probability. Accumulated in sequence order.
double seq_log_prob(const FieldVector& v, const Pmf& p);

// Same value computed from a symbol histogram: sum_k counts[k] * log2 p(k).
// Sequences with equal histograms get bit-identical results, which the
// recognizer relies on for exact tie detection.
double counts_log_prob(std::span<const std::uint64_t> counts,
                       std::span<const double> log2_probs);
double counts_log_prob(std::span<const std::uint64_t> counts, const Pmf& p);

std::vector<double> log2_probs(const Pmf& p);
std::vector<std::uint64_t> symbol_counts(const FieldVector& v);

struct TypicalityParams {
  double epsilon = 0.1;
  enum class Mode { strict, score_only } mode = Mode::strict;
};

// Membership in the jointly typical set over pairs of length-n sequences:
// the empirical rates of x, y and (x, y) must all sit within epsilon of the
// corresponding entropies, with P(x,y) = prod qx(x_t) qz(y_t - x_t).
bool in_joint_typical_set(const FieldVector& x, const FieldVector& y,
                          const Pmf& qx, const Pmf& qz,
                          const TypicalityParams& params);

// Membership in the noise typical set: |-(1/n) log2 P(z) - entropy rate| <
// epsilon, with P(z) the model's exact likelihood.
bool in_noise_typical_set(const FieldVector& z, const NoiseModel& noise,
                          const TypicalityParams& params);

}  // namespace recog
