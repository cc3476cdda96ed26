#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "recog/compressors.hpp"
#include "recog/decoders.hpp"

using namespace recog;

namespace {

const FieldSpec kGf2(2);
const FieldSpec kGf3(3);

FieldVector sample_noise(const NoiseModel& model, std::size_t n,
                         std::uint64_t seed) {
  RngStream rng(seed, "dec-noise", 0);
  return model.sample(n, rng);
}

bool satisfies(const SparseMatrix& h, const FieldVector& z,
               const FieldVector& syndrome) {
  return h.multiply(z) == syndrome;
}

}  // namespace

TEST_CASE("zero syndrome decodes to the zero word at iteration zero") {
  const LdpcSample sample = sample_ldpc({48, 3, 6, kGf2, 1});
  const DecodeOutcome out = bp_syndrome_decode(
      sample.matrix, FieldVector::zeros(kGf2, 24), Pmf::bernoulli(0.05));
  REQUIRE_FALSE(out.failed());
  CHECK(out.iterations == 0);
  CHECK(*out.estimate == FieldVector::zeros(kGf2, 48));
}

TEST_CASE("zero-iteration decoding is the prior hard decision or failure") {
  const LdpcSample sample = sample_ldpc({48, 3, 6, kGf2, 2});
  const BpConfig no_iters{0, 0.0, true};
  const Pmf channel = Pmf::bernoulli(0.05);

  const DecodeOutcome zero = bp_syndrome_decode(
      sample.matrix, FieldVector::zeros(kGf2, 24), channel, no_iters);
  REQUIRE_FALSE(zero.failed());
  CHECK(*zero.estimate == FieldVector::zeros(kGf2, 48));

  const NoiseModel noise = NoiseModel::iid(channel);
  const FieldVector z = sample_noise(noise, 48, 3);
  const FieldVector syndrome = sample.matrix.multiply(z);
  if (syndrome != FieldVector::zeros(kGf2, 24)) {
    const DecodeOutcome out =
        bp_syndrome_decode(sample.matrix, syndrome, channel, no_iters);
    CHECK(out.failed());
    CHECK(out.iterations == 0);
  }
}

TEST_CASE("bp matches the exhaustive oracle on unique optima") {
  const LdpcSample sample = sample_ldpc({16, 3, 6, kGf2, 5});
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(0.05));
  int unique = 0, matched = 0;
  for (int t = 0; t < 200; ++t) {
    // weight-1 noise at a rotating position
    std::vector<symbol_t> z(16, 0);
    z[t % 16] = 1;
    const FieldVector zv(kGf2, z);
    const FieldVector syndrome = sample.matrix.multiply(zv);
    const DecodeOutcome ml = ml_syndrome_decode(sample.matrix, syndrome, noise);
    REQUIRE_FALSE(ml.failed());
    CHECK(satisfies(sample.matrix, *ml.estimate, syndrome));
    if (ml.ambiguous) continue;
    ++unique;
    const DecodeOutcome bp =
        bp_syndrome_decode(sample.matrix, syndrome, Pmf::bernoulli(0.05));
    if (!bp.failed()) {
      CHECK(satisfies(sample.matrix, *bp.estimate, syndrome));
      if (*bp.estimate == *ml.estimate) ++matched;
    }
  }
  REQUIRE(unique > 0);
  CHECK(matched == unique);
}

TEST_CASE("bp block failure stays low inside the operating region") {
  const LdpcSample sample = sample_ldpc({1200, 3, 6, kGf2, 6});
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(0.05));
  const Pmf channel = Pmf::bernoulli(0.05);
  BpDecoder decoder(sample.matrix, channel);
  int failures = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    const FieldVector z = sample_noise(noise, 1200, 100 + t);
    const FieldVector syndrome = sample.matrix.multiply(z);
    const DecodeOutcome out = decoder.decode(syndrome);
    if (out.failed())
      ++failures;
    else
      CHECK(satisfies(sample.matrix, *out.estimate, syndrome));
  }
  CHECK(failures <= trials / 50);  // 2%
}

TEST_CASE("bp failure rate is monotone in the crossover") {
  const LdpcSample sample = sample_ldpc({600, 3, 6, kGf2, 8});
  int failures_low = 0, failures_high = 0;
  const int trials = 500;
  for (double q : {0.03, 0.07}) {
    const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(q));
    BpDecoder decoder(sample.matrix, Pmf::bernoulli(q));
    int& failures = q < 0.05 ? failures_low : failures_high;
    for (int t = 0; t < trials; ++t) {
      const FieldVector z = sample_noise(noise, 600, 500 + t);
      if (decoder.decode(sample.matrix.multiply(z)).failed()) ++failures;
    }
  }
  CHECK(failures_low <= failures_high);
}

TEST_CASE("coset translation symmetry") {
  const LdpcSample sample = sample_ldpc({48, 3, 6, kGf2, 11});
  const SparseMatrix& h = sample.matrix;
  const double q = 0.08;
  const double l0 = std::log((1 - q) / q);
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(q));
  BpDecoder decoder(h, Pmf::bernoulli(q));

  for (int t = 0; t < 40; ++t) {
    const FieldVector z = sample_noise(noise, 48, 900 + t);
    const FieldVector syndrome = h.multiply(z);
    const DecodeOutcome direct = decoder.decode(syndrome);

    // translate by a coset member: flip the priors on its support and
    // decode the zero syndrome
    std::vector<double> priors(48, l0);
    for (std::size_t i = 0; i < 48; ++i)
      if (z[i]) priors[i] = -l0;
    const DecodeOutcome shifted =
        decoder.decode(FieldVector::zeros(kGf2, 24), priors);

    CHECK(direct.failed() == shifted.failed());
    if (!direct.failed() && !shifted.failed())
      CHECK(*direct.estimate == vec_add(*shifted.estimate, z));
  }
}

TEST_CASE("oracle on an identity matrix returns the syndrome") {
  const SparseMatrix eye = SparseMatrix::identity_prefix(kGf3, 6, 6);
  const NoiseModel noise = NoiseModel::iid(Pmf::uniform_error(kGf3, 0.2));
  const FieldVector syndrome(kGf3, {2, 0, 1, 1, 0, 2});
  const DecodeOutcome out = ml_syndrome_decode(eye, syndrome, noise);
  REQUIRE_FALSE(out.failed());
  CHECK(*out.estimate == syndrome);
  CHECK_FALSE(out.ambiguous);
}

TEST_CASE("inconsistent syndromes fail cleanly") {
  // two identical rows demanding different values
  const SparseMatrix h(kGf2, 2, 3, {{0, 0, 1}, {1, 0, 1}});
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(0.1));
  const DecodeOutcome out =
      ml_syndrome_decode(h, FieldVector(kGf2, {0, 1}), noise);
  CHECK(out.failed());
  CHECK_FALSE(out.syndrome_satisfied);
}

TEST_CASE("coset system solves and spans") {
  const LdpcSample sample = sample_ldpc({12, 3, 6, kGf2, 13});
  const SparseMatrix& h = sample.matrix;
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(0.1));
  const FieldVector z = sample_noise(noise, 12, 77);
  const FieldVector syndrome = h.multiply(z);

  const CosetSystem sys = coset_system(h, syndrome);
  REQUIRE(sys.consistent);
  CHECK(satisfies(h, sys.particular, syndrome));
  for (const FieldVector& b : sys.basis)
    CHECK(h.multiply(b) == FieldVector::zeros(kGf2, h.rows()));
  CHECK(sys.basis.size() == h.cols() - matrix_rank(h));
}

TEST_CASE("oracle beats random coset members") {
  const LdpcSample sample = sample_ldpc({12, 3, 6, kGf2, 13});
  const SparseMatrix& h = sample.matrix;
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(0.1));
  const FieldVector z = sample_noise(noise, 12, 78);
  const FieldVector syndrome = h.multiply(z);

  const DecodeOutcome out = ml_syndrome_decode(h, syndrome, noise);
  REQUIRE_FALSE(out.failed());
  CHECK(satisfies(h, *out.estimate, syndrome));
  const double best = noise.log_likelihood(*out.estimate);

  const CosetSystem sys = coset_system(h, syndrome);
  RngStream rng(79, "coset", 0);
  for (int t = 0; t < 1000; ++t) {
    FieldVector member = sys.particular;
    for (const FieldVector& b : sys.basis)
      if (rng.next_below(2)) member = vec_add(member, b);
    CHECK(satisfies(h, member, syndrome));
    CHECK(noise.log_likelihood(member) <= best + 1e-9);
  }
}

TEST_CASE("oracle flags ties") {
  // H = [1 1]: syndrome 1 has coset {10, 01}, equal weight
  const SparseMatrix h(kGf2, 1, 2, {{0, 0, 1}, {0, 1, 1}});
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(0.2));
  const DecodeOutcome out =
      ml_syndrome_decode(h, FieldVector(kGf2, {1}), noise);
  REQUIRE_FALSE(out.failed());
  CHECK(out.ambiguous);
  // lexicographically smallest winner
  CHECK(*out.estimate == FieldVector(kGf2, {0, 1}));
}

TEST_CASE("oracle refuses oversized cosets") {
  const SparseMatrix h(kGf2, 1, 40, {{0, 0, 1}});
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(0.1));
  CHECK_THROWS_AS(
      ml_syndrome_decode(h, FieldVector(kGf2, {1}), noise, 1u << 20),
      ResourceError);
}

TEST_CASE("nonbinary bp recovers sparse noise") {
  const LdpcSample sample = sample_ldpc({60, 3, 6, kGf3, 17});
  const Pmf channel = Pmf::uniform_error(kGf3, 0.03);
  const NoiseModel noise = NoiseModel::iid(channel);
  BpDecoder decoder(sample.matrix, channel);
  int exact = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    const FieldVector z = sample_noise(noise, 60, 1200 + t);
    const DecodeOutcome out = decoder.decode(sample.matrix.multiply(z));
    if (!out.failed()) {
      CHECK(satisfies(sample.matrix, *out.estimate, sample.matrix.multiply(z)));
      if (*out.estimate == z) ++exact;
    }
  }
  CHECK(exact >= trials * 7 / 10);
}

TEST_CASE("decoder rejects shape mismatches") {
  const LdpcSample sample = sample_ldpc({48, 3, 6, kGf2, 19});
  BpDecoder decoder(sample.matrix, Pmf::bernoulli(0.1));
  CHECK_THROWS_AS(decoder.decode(FieldVector::zeros(kGf2, 10)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      bp_syndrome_decode(sample.matrix, FieldVector::zeros(kGf3, 24),
                         Pmf::uniform_error(kGf3, 0.1)),
      std::invalid_argument);
}
