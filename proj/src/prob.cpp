#include "recog/prob.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "recog/noise.hpp"

namespace recog {

Pmf::Pmf(FieldSpec spec, std::vector<double> probs)
    : spec_(spec), probs_(std::move(probs)) {
  if (probs_.size() != spec_.order())
    throw std::invalid_argument("pmf needs exactly " +
                                std::to_string(spec_.order()) + " entries");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0))
      throw std::invalid_argument("pmf entries must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("pmf sums to " + std::to_string(sum) +
                                ", not 1");
}

Pmf Pmf::uniform(FieldSpec spec) {
  return Pmf(spec, std::vector<double>(spec.order(), 1.0 / spec.order()));
}

Pmf Pmf::point_mass(FieldSpec spec, symbol_t at) {
  if (at >= spec.order())
    throw std::invalid_argument("point mass location out of range");
  std::vector<double> p(spec.order(), 0.0);
  p[at] = 1.0;
  return Pmf(spec, std::move(p));
}

Pmf Pmf::bernoulli(double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("bernoulli parameter must be in [0, 1]");
  return Pmf(FieldSpec(2), {1.0 - q, q});
}

Pmf Pmf::uniform_error(FieldSpec spec, double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("crossover must be in [0, 1]");
  std::vector<double> p(spec.order(), q / (spec.order() - 1));
  p[0] = 1.0 - q;
  return Pmf(spec, std::move(p));
}

bool Pmf::is_uniform() const {
  for (double p : probs_)
    if (p != probs_[0]) return false;
  return true;
}

symbol_t Pmf::sample(RngStream& rng) const {
  const double u = rng.next_double();
  double c = 0.0;
  for (std::uint32_t k = 0; k + 1 < spec_.order(); ++k) {
    c += probs_[k];
    if (u < c) return static_cast<symbol_t>(k);
  }
  return static_cast<symbol_t>(spec_.order() - 1);
}

double entropy(const Pmf& p) {
  double h = 0.0;
  for (double q : p.probs())
    if (q > 0.0) h -= q * std::log2(q);
  return h;
}

Pmf convolve(const Pmf& px, const Pmf& pz) {
  if (px.spec() != pz.spec())
    throw std::invalid_argument("field mismatch in convolution");
  const FieldSpec spec = px.spec();
  const std::uint32_t r = spec.order();
  std::vector<double> out(r, 0.0);
  for (std::uint32_t k = 0; k < r; ++k)
    for (std::uint32_t a = 0; a < r; ++a)
      out[k] += px[static_cast<symbol_t>(a)] *
                pz[gf_sub(static_cast<symbol_t>(k), static_cast<symbol_t>(a),
                          spec)];
  return Pmf(spec, std::move(out));
}

double seq_log_prob(const FieldVector& v, const Pmf& p) {
  if (v.spec() != p.spec())
    throw std::invalid_argument("field mismatch in sequence probability");
  double sum = 0.0;
  for (symbol_t s : v.elems()) sum += std::log2(p[s]);
  return sum;
}

double counts_log_prob(std::span<const std::uint64_t> counts,
                       std::span<const double> log2_probs) {
  double sum = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k] > 0) sum += static_cast<double>(counts[k]) * log2_probs[k];
  return sum;
}

double counts_log_prob(std::span<const std::uint64_t> counts, const Pmf& p) {
  const std::vector<double> logs = log2_probs(p);
  return counts_log_prob(counts, logs);
}

std::vector<double> log2_probs(const Pmf& p) {
  std::vector<double> logs(p.spec().order());
  for (std::uint32_t k = 0; k < p.spec().order(); ++k)
    logs[k] = std::log2(p[static_cast<symbol_t>(k)]);
  return logs;
}

std::vector<std::uint64_t> symbol_counts(const FieldVector& v) {
  std::vector<std::uint64_t> counts(v.spec().order(), 0);
  for (symbol_t s : v.elems()) ++counts[s];
  return counts;
}

bool in_joint_typical_set(const FieldVector& x, const FieldVector& y,
                          const Pmf& qx, const Pmf& qz,
                          const TypicalityParams& params) {
  if (x.size() != y.size())
    throw std::invalid_argument("joint typicality needs equal lengths");
  if (x.size() == 0)
    throw std::invalid_argument("joint typicality needs length > 0");
  const double n = static_cast<double>(x.size());
  const Pmf qy = convolve(qx, qz);

  const double lx = counts_log_prob(symbol_counts(x), qx);
  const double ly = counts_log_prob(symbol_counts(y), qy);
  const double lxy = lx + counts_log_prob(symbol_counts(vec_sub(y, x)), qz);

  const double hx = entropy(qx);
  const double hy = entropy(qy);
  const double hz = entropy(qz);

  return std::abs(-lx / n - hx) < params.epsilon &&
         std::abs(-ly / n - hy) < params.epsilon &&
         std::abs(-lxy / n - (hx + hz)) < params.epsilon;
}

bool in_noise_typical_set(const FieldVector& z, const NoiseModel& noise,
                          const TypicalityParams& params) {
  if (z.size() == 0)
    throw std::invalid_argument("noise typicality needs length > 0");
  const double n = static_cast<double>(z.size());
  const double rate = -noise.log_likelihood(z) / n;
  return std::abs(rate - noise.entropy_rate()) < params.epsilon;
}

}  // namespace recog
