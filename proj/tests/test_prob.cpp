#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "recog/noise.hpp"
#include "recog/prob.hpp"

using namespace recog;

namespace {

const FieldSpec kGf2(2);
const FieldSpec kGf3(3);
const FieldSpec kGf5(5);

FieldVector sample_vector(const Pmf& p, std::size_t n, RngStream& rng) {
  std::vector<symbol_t> elems(n);
  for (auto& e : elems) e = p.sample(rng);
  return FieldVector(p.spec(), std::move(elems));
}

}  // namespace

TEST_CASE("pmf validation") {
  CHECK_THROWS_AS(Pmf(kGf2, {0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Pmf(kGf2, {1.2, -0.2}), std::invalid_argument);
  CHECK_THROWS_AS(Pmf(kGf3, {0.5, 0.5}), std::invalid_argument);
  CHECK_NOTHROW(Pmf(kGf3, {0.2, 0.3, 0.5}));
  CHECK(Pmf::uniform(kGf5).is_uniform());
  CHECK_FALSE(Pmf::bernoulli(0.3).is_uniform());
}

TEST_CASE("entropy reference values") {
  CHECK(entropy(Pmf::uniform(kGf2)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(entropy(Pmf::point_mass(kGf5, 3)) == 0.0);
  // high-precision evaluation of the binary entropy at 0.11
  CHECK(entropy(Pmf::bernoulli(0.11)) ==
        doctest::Approx(0.499915958164528).epsilon(1e-12));
  CHECK(entropy(Pmf::uniform(kGf3)) ==
        doctest::Approx(1.584962500721156).epsilon(1e-12));
  for (double q : {0.01, 0.2, 0.47}) {
    const double h = entropy(Pmf::bernoulli(q));
    CHECK(h >= 0.0);
    CHECK(h <= 1.0);
  }
}

TEST_CASE("convolution identities") {
  // uniform input washes out any additive noise
  const Pmf conv_u = convolve(Pmf::uniform(kGf5), Pmf::uniform_error(kGf5, 0.37));
  for (std::uint32_t k = 0; k < 5; ++k)
    CHECK(conv_u[static_cast<symbol_t>(k)] ==
          doctest::Approx(0.2).epsilon(1e-14));

  // crossover composition p + q - 2pq
  const Pmf c = convolve(Pmf::bernoulli(0.1), Pmf::bernoulli(0.2));
  CHECK(c[1] == doctest::Approx(0.26).epsilon(1e-14));

  // point masses shift
  const Pmf shifted = convolve(Pmf::point_mass(kGf3, 1), Pmf::point_mass(kGf3, 2));
  CHECK(shifted[0] == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(convolve(Pmf::uniform(kGf2), Pmf::uniform(kGf3)),
                  std::invalid_argument);
}

TEST_CASE("entropy is invariant under point-mass shifts") {
  const Pmf p(kGf5, {0.4, 0.3, 0.2, 0.05, 0.05});
  for (std::uint32_t s = 0; s < 5; ++s) {
    const Pmf shifted = convolve(p, Pmf::point_mass(kGf5, static_cast<symbol_t>(s)));
    CHECK(entropy(shifted) == doctest::Approx(entropy(p)).epsilon(1e-12));
  }
}

TEST_CASE("binary convolution entropy matches the crossover formula") {
  for (double a : {0.05, 0.11, 0.3}) {
    for (double b : {0.02, 0.2, 0.45}) {
      const double cross = a + b - 2 * a * b;
      CHECK(entropy(convolve(Pmf::bernoulli(a), Pmf::bernoulli(b))) ==
            doctest::Approx(entropy(Pmf::bernoulli(cross))).epsilon(1e-12));
    }
  }
}

TEST_CASE("sequence log probability") {
  const Pmf q = Pmf::bernoulli(0.11);
  CHECK(seq_log_prob(FieldVector::zeros(kGf2, 10), q) ==
        doctest::Approx(-1.6812275880832694).epsilon(1e-12));

  // uniform alphabet: every sequence costs n log2 r
  RngStream rng(3, "seq", 0);
  const Pmf u5 = Pmf::uniform(kGf5);
  const FieldVector v = sample_vector(u5, 64, rng);
  CHECK(seq_log_prob(v, u5) ==
        doctest::Approx(-64 * 1.584962500721156).epsilon(1e-10));

  // zero-probability symbol
  const Pmf pm = Pmf::point_mass(kGf2, 0);
  const FieldVector ones(kGf2, {1, 1, 1});
  CHECK(seq_log_prob(ones, pm) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("sequence log probability is additive under concatenation") {
  RngStream rng(9, "concat", 0);
  const Pmf q = Pmf::bernoulli(0.3);
  const FieldVector a = sample_vector(q, 100, rng);
  const FieldVector b = sample_vector(q, 57, rng);
  std::vector<symbol_t> joined(a.elems().begin(), a.elems().end());
  joined.insert(joined.end(), b.elems().begin(), b.elems().end());
  CHECK(seq_log_prob(FieldVector(kGf2, joined), q) ==
        doctest::Approx(seq_log_prob(a, q) + seq_log_prob(b, q))
            .epsilon(1e-9));
}

TEST_CASE("histogram scoring equals sequence scoring and is order-exact") {
  RngStream rng(13, "counts", 0);
  const Pmf q(kGf3, {0.6, 0.3, 0.1});
  const FieldVector v = sample_vector(q, 200, rng);
  CHECK(counts_log_prob(symbol_counts(v), q) ==
        doctest::Approx(seq_log_prob(v, q)).epsilon(1e-9));

  // any reordering gives the bit-identical score
  std::vector<symbol_t> reversed(v.elems().rbegin(), v.elems().rend());
  const FieldVector w(kGf3, reversed);
  CHECK(counts_log_prob(symbol_counts(v), q) ==
        counts_log_prob(symbol_counts(w), q));
}

TEST_CASE("joint typicality: exact cases") {
  const TypicalityParams tight{0.01, TypicalityParams::Mode::strict};
  const Pmf uniform = Pmf::uniform(kGf2);

  // zero-noise pair is exactly typical
  RngStream rng(21, "jt", 0);
  const FieldVector x = sample_vector(uniform, 200, rng);
  CHECK(in_joint_typical_set(x, x, uniform, Pmf::point_mass(kGf2, 0), tight));

  // all-flips sequence sits far outside the band
  const TypicalityParams loose{0.1, TypicalityParams::Mode::strict};
  const FieldVector zeros = FieldVector::zeros(kGf2, 100);
  const FieldVector ones(kGf2, std::vector<symbol_t>(100, 1));
  CHECK_FALSE(
      in_joint_typical_set(zeros, ones, uniform, Pmf::bernoulli(0.1), loose));

  CHECK_THROWS_AS(in_joint_typical_set(zeros, FieldVector::zeros(kGf2, 99),
                                       uniform, uniform, loose),
                  std::invalid_argument);
}

TEST_CASE("joint typicality accepts true pairs at AEP scale") {
  const TypicalityParams params{0.1, TypicalityParams::Mode::strict};
  const Pmf qx = Pmf::uniform(kGf2);
  const Pmf qz = Pmf::bernoulli(0.11);
  int accepted = 0;
  const int pairs = 1000;
  for (int t = 0; t < pairs; ++t) {
    RngStream rng(77, "jt-mc", static_cast<std::uint64_t>(t));
    const FieldVector x = sample_vector(qx, 2000, rng);
    const FieldVector z = sample_vector(qz, 2000, rng);
    if (in_joint_typical_set(x, vec_add(x, z), qx, qz, params)) ++accepted;
  }
  CHECK(accepted >= 990);
}

TEST_CASE("noise typicality") {
  const NoiseModel bern = NoiseModel::iid(Pmf::bernoulli(0.11));

  // the all-zero word is too probable to be typical
  const TypicalityParams tight{0.05, TypicalityParams::Mode::strict};
  CHECK_FALSE(in_noise_typical_set(FieldVector::zeros(kGf2, 100), bern, tight));

  // sequences drawn from the model concentrate
  const TypicalityParams params{0.1, TypicalityParams::Mode::strict};
  int accepted = 0;
  const int reps = 200;
  for (int t = 0; t < reps; ++t) {
    RngStream rng(91, "nt-mc", static_cast<std::uint64_t>(t));
    if (in_noise_typical_set(bern.sample(5000, rng), bern, params)) ++accepted;
  }
  CHECK(accepted >= 198);

  // uniform noise: every sequence is exactly typical at any epsilon
  const NoiseModel uniform = NoiseModel::iid(Pmf::uniform(kGf3));
  RngStream rng(93, "nt-u", 0);
  const FieldVector z = uniform.sample(500, rng);
  CHECK(in_noise_typical_set(z, uniform, TypicalityParams{1e-9, {}}));
  CHECK(in_noise_typical_set(z, uniform, TypicalityParams{0.5, {}}));
}
