#include "recog/noise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace recog {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double stationary_good(const GilbertElliottParams& g) {
  return g.p_bad_to_good / (g.p_good_to_bad + g.p_bad_to_good);
}

double stationary_bad(const GilbertElliottParams& g) {
  return g.p_good_to_bad / (g.p_good_to_bad + g.p_bad_to_good);
}

double ge_forward_log2(const GilbertElliottParams& g, const FieldVector& z) {
  if (z.size() == 0) return 0.0;
  double ag = stationary_good(g) * g.q_good[z[0]];
  double ab = stationary_bad(g) * g.q_bad[z[0]];
  double scale = ag + ab;
  if (scale == 0.0) return kNegInf;
  double log_p = std::log2(scale);
  ag /= scale;
  ab /= scale;
  for (std::size_t t = 1; t < z.size(); ++t) {
    const double ng =
        (ag * (1.0 - g.p_good_to_bad) + ab * g.p_bad_to_good) * g.q_good[z[t]];
    const double nb =
        (ag * g.p_good_to_bad + ab * (1.0 - g.p_bad_to_good)) * g.q_bad[z[t]];
    scale = ng + nb;
    if (scale == 0.0) return kNegInf;
    log_p += std::log2(scale);
    ag = ng / scale;
    ab = nb / scale;
  }
  return log_p;
}

FieldVector ge_sample(const GilbertElliottParams& g, std::size_t n,
                      RngStream& rng) {
  std::vector<symbol_t> out(n);
  bool good = rng.next_double() < stationary_good(g);
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = (good ? g.q_good : g.q_bad).sample(rng);
    const double flip = good ? g.p_good_to_bad : g.p_bad_to_good;
    if (rng.next_double() < flip) good = !good;
  }
  return FieldVector(g.q_good.spec(), std::move(out));
}

}  // namespace

NoiseModel NoiseModel::iid(Pmf pmf) {
  NoiseModel m{std::variant<Pmf, GilbertElliottParams>(std::move(pmf))};
  m.entropy_rate_ = entropy(m.iid_pmf());
  m.entropy_rate_se_ = 0.0;
  return m;
}

NoiseModel NoiseModel::gilbert_elliott(GilbertElliottParams params,
                                       GeRateEstimatorConfig est) {
  if (!(params.p_good_to_bad > 0.0 && params.p_good_to_bad < 1.0 &&
        params.p_bad_to_good > 0.0 && params.p_bad_to_good < 1.0))
    throw std::invalid_argument("transition probabilities must be in (0, 1)");
  if (params.q_good.spec() != params.q_bad.spec())
    throw std::invalid_argument("state pmfs must share one field");
  if (est.sequences < 1 || est.length < 1)
    throw std::invalid_argument("rate estimator needs sequences, length >= 1");

  NoiseModel m{std::variant<Pmf, GilbertElliottParams>(std::move(params))};
  const GilbertElliottParams& g = m.ge_params();

  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < est.sequences; ++i) {
    RngStream stream(est.seed, "ge-rate", static_cast<std::uint64_t>(i));
    const FieldVector z = ge_sample(g, est.length, stream);
    const double rate = -ge_forward_log2(g, z) / static_cast<double>(est.length);
    sum += rate;
    sum_sq += rate * rate;
  }
  const double n = est.sequences;
  m.entropy_rate_ = sum / n;
  const double var = std::max(0.0, sum_sq / n - m.entropy_rate_ * m.entropy_rate_);
  m.entropy_rate_se_ = std::sqrt(var / n);
  return m;
}

FieldSpec NoiseModel::spec() const {
  return is_iid() ? iid_pmf().spec() : ge_params().q_good.spec();
}

Pmf NoiseModel::marginal() const {
  if (is_iid()) return iid_pmf();
  const GilbertElliottParams& g = ge_params();
  const double pg = stationary_good(g);
  const double pb = stationary_bad(g);
  std::vector<double> p(spec().order());
  for (std::uint32_t k = 0; k < spec().order(); ++k)
    p[k] = pg * g.q_good[static_cast<symbol_t>(k)] +
           pb * g.q_bad[static_cast<symbol_t>(k)];
  return Pmf(spec(), std::move(p));
}

FieldVector NoiseModel::sample(std::size_t n, RngStream& rng) const {
  if (is_iid()) {
    const Pmf& pmf = iid_pmf();
    std::vector<symbol_t> out(n);
    for (std::size_t t = 0; t < n; ++t) out[t] = pmf.sample(rng);
    return FieldVector(spec(), std::move(out));
  }
  return ge_sample(ge_params(), n, rng);
}

double NoiseModel::log_likelihood(const FieldVector& z) const {
  if (z.spec() != spec())
    throw std::invalid_argument("field mismatch in noise likelihood");
  if (is_iid()) return seq_log_prob(z, iid_pmf());
  return ge_forward_log2(ge_params(), z);
}

}  // namespace recog
