#pragma once

#include <variant>

#include "recog/prob.hpp"

namespace recog {

// Two-state hidden-Markov noise: a good and a bad state, each emitting from
// its own symbol distribution, with the chain started in its stationary
// distribution.
struct GilbertElliottParams {
  double p_good_to_bad;
  double p_bad_to_good;
  Pmf q_good;
  Pmf q_bad;
};

// The hidden-Markov entropy rate has no closed form; it is estimated once at
// model construction by averaging exact likelihoods of sampled sequences.
struct GeRateEstimatorConfig {
  int sequences = 500;
  std::size_t length = 5000;
  std::uint64_t seed = 0x6e74726f70790000ull;
};

class NoiseModel {
 public:
  static NoiseModel iid(Pmf pmf);
  static NoiseModel gilbert_elliott(GilbertElliottParams params,
                                    GeRateEstimatorConfig est = {});

  FieldSpec spec() const;
  bool is_iid() const { return std::holds_alternative<Pmf>(model_); }
  const Pmf& iid_pmf() const { return std::get<Pmf>(model_); }
  const GilbertElliottParams& ge_params() const {
    return std::get<GilbertElliottParams>(model_);
  }

  // Per-symbol marginal: the pmf itself, or the stationary state mixture.
  Pmf marginal() const;

  FieldVector sample(std::size_t n, RngStream& rng) const;

  // Exact log2 P(z); the hidden-Markov case uses the scaled forward
  // recursion over the two states.
  double log_likelihood(const FieldVector& z) const;

  double entropy_rate() const { return entropy_rate_; }
  double entropy_rate_std_error() const { return entropy_rate_se_; }

 private:
  explicit NoiseModel(std::variant<Pmf, GilbertElliottParams> model)
      : model_(std::move(model)) {}

  std::variant<Pmf, GilbertElliottParams> model_;
  double entropy_rate_ = 0.0;
  double entropy_rate_se_ = 0.0;
};

inline double noise_log_likelihood(const FieldVector& z,
                                   const NoiseModel& noise) {
  return noise.log_likelihood(z);
}

inline double entropy_rate(const NoiseModel& noise) {
  return noise.entropy_rate();
}

}  // namespace recog
