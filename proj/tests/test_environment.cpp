#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "recog/environment.hpp"
#include "recog/errors.hpp"

using namespace recog;

namespace {

const FieldSpec kGf2(2);
const FieldSpec kGf3(3);

// exhaustive hidden-state path sum, the reference for the forward recursion
double ge_path_sum_log2(const GilbertElliottParams& g, const FieldVector& z) {
  const double pig = g.p_bad_to_good / (g.p_good_to_bad + g.p_bad_to_good);
  const std::size_t n = z.size();
  double total = 0.0;
  for (std::uint64_t path = 0; path < (std::uint64_t{1} << n); ++path) {
    double p = 1.0;
    bool prev_good = false;
    for (std::size_t t = 0; t < n; ++t) {
      const bool good = ((path >> t) & 1) == 0;
      if (t == 0)
        p *= good ? pig : 1.0 - pig;
      else
        p *= prev_good ? (good ? 1.0 - g.p_good_to_bad : g.p_good_to_bad)
                       : (good ? g.p_bad_to_good : 1.0 - g.p_bad_to_good);
      p *= good ? g.q_good[z[t]] : g.q_bad[z[t]];
      prev_good = good;
    }
    total += p;
  }
  return std::log2(total);
}

Environment make_env(std::size_t n, double rc, const Pmf& qx,
                     const NoiseModel& noise) {
  return Environment(qx.spec(), n, rc, qx, noise);
}

}  // namespace

TEST_CASE("hidden-markov likelihood matches exhaustive path enumeration") {
  const GilbertElliottParams sets[] = {
      {0.1, 0.3, Pmf::bernoulli(0.02), Pmf::bernoulli(0.3)},
      {0.05, 0.05, Pmf::bernoulli(0.11), Pmf::bernoulli(0.45)},
      {0.4, 0.2, Pmf::uniform_error(kGf3, 0.1), Pmf::uniform_error(kGf3, 0.5)},
  };
  for (const auto& params : sets) {
    const NoiseModel model = NoiseModel::gilbert_elliott(params);
    const std::uint32_t order = params.q_good.spec().order();
    for (std::size_t len = 1; len <= 3; ++len) {
      std::vector<symbol_t> z(len, 0);
      for (;;) {
        const FieldVector zv(params.q_good.spec(), z);
        CHECK(model.log_likelihood(zv) ==
              doctest::Approx(ge_path_sum_log2(params, zv)).epsilon(1e-10));
        std::size_t i = 0;
        while (i < len && ++z[i] == order) z[i++] = 0;
        if (i == len) break;
      }
    }
  }
}

TEST_CASE("degenerate chain reduces to the iid likelihood bit-for-bit") {
  const Pmf q = Pmf::bernoulli(0.11);
  const NoiseModel ge = NoiseModel::gilbert_elliott({0.5, 0.5, q, q});
  const NoiseModel iid = NoiseModel::iid(q);
  RngStream rng(4, "degenerate", 0);
  const FieldVector z = iid.sample(1000, rng);
  CHECK(ge.log_likelihood(z) == iid.log_likelihood(z));
  CHECK(ge.log_likelihood(z) == seq_log_prob(z, q));
}

TEST_CASE("noise model validation") {
  const Pmf q = Pmf::bernoulli(0.1);
  CHECK_THROWS_AS(NoiseModel::gilbert_elliott({0.0, 0.5, q, q}),
                  std::invalid_argument);
  CHECK_THROWS_AS(NoiseModel::gilbert_elliott({0.5, 1.0, q, q}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      NoiseModel::gilbert_elliott({0.5, 0.5, q, Pmf::uniform(kGf3)}),
      std::invalid_argument);
}

TEST_CASE("entropy rates") {
  CHECK(NoiseModel::iid(Pmf::bernoulli(0.11)).entropy_rate() ==
        doctest::Approx(0.499915958164528).epsilon(1e-12));
  CHECK(NoiseModel::iid(Pmf::uniform(kGf3)).entropy_rate() ==
        doctest::Approx(1.584962500721156).epsilon(1e-12));

  // identical states: the estimator must land on the iid entropy
  const Pmf q = Pmf::bernoulli(0.11);
  const NoiseModel ge = NoiseModel::gilbert_elliott({0.3, 0.7, q, q});
  const double target = entropy(q);
  const double se = ge.entropy_rate_std_error();
  CHECK(se > 0.0);
  CHECK(std::abs(ge.entropy_rate() - target) <= 2.0 * se);
}

TEST_CASE("ge marginal is the stationary mixture") {
  const NoiseModel ge = NoiseModel::gilbert_elliott(
      {0.1, 0.3, Pmf::bernoulli(0.02), Pmf::bernoulli(0.3)});
  // stationary good fraction 0.75
  CHECK(ge.marginal()[1] == doctest::Approx(0.75 * 0.02 + 0.25 * 0.3)
                                .epsilon(1e-14));
}

TEST_CASE("database size follows the pattern rate") {
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(0.1));
  const Environment env = make_env(8, 0.25, Pmf::uniform(kGf2), noise);
  CHECK(env.pattern_count() == 4);
  const PatternDatabase db = generate_database(env, 42);
  CHECK(db.size() == 4);
  CHECK(db.pattern(0).size() == 8);

  CHECK_THROWS_AS(make_env(100, 0.9, Pmf::uniform(kGf2), noise),
                  ResourceError);
  CHECK_THROWS_AS(make_env(4, 0.01, Pmf::uniform(kGf2), noise), ConfigError);
  CHECK(Environment::with_pattern_count(kGf2, 16, 100, Pmf::uniform(kGf2),
                                        noise)
            .pattern_count() == 100);
}

TEST_CASE("database generation is seed-deterministic") {
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(0.1));
  const Environment env = make_env(64, 0.125, Pmf::uniform(kGf2), noise);
  const PatternDatabase a = generate_database(env, 7);
  const PatternDatabase b = generate_database(env, 7);
  const PatternDatabase c = generate_database(env, 8);
  bool identical = true, all_same = true;
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    identical = identical && a.pattern(i) == b.pattern(i);
    all_same = all_same && a.pattern(i) == c.pattern(i);
  }
  CHECK(identical);
  CHECK_FALSE(all_same);
}

TEST_CASE("pooled symbol frequency converges to qx") {
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(0.1));
  const Environment env = Environment::with_pattern_count(
      kGf2, 1000, 64, Pmf::uniform(kGf2), noise);
  const PatternDatabase db = generate_database(env, 11);
  std::uint64_t ones = 0;
  for (std::uint64_t i = 0; i < db.size(); ++i) {
    const FieldVector p = db.pattern(i);
    for (std::size_t t = 0; t < p.size(); ++t) ones += p[t];
  }
  const double freq = static_cast<double>(ones) / (1000.0 * 64.0);
  CHECK(freq >= 0.49);
  CHECK(freq <= 0.51);
}

TEST_CASE("byte-backed fields sample correctly too") {
  const NoiseModel noise = NoiseModel::iid(Pmf::uniform_error(kGf3, 0.2));
  const Pmf qx(kGf3, {0.5, 0.25, 0.25});
  const Environment env = Environment::with_pattern_count(kGf3, 500, 60, qx, noise);
  const PatternDatabase db = generate_database(env, 13);
  CHECK_FALSE(db.packed());
  std::vector<std::uint64_t> counts(3, 0);
  for (std::uint64_t i = 0; i < db.size(); ++i) {
    const FieldVector p = db.pattern(i);
    for (std::size_t t = 0; t < p.size(); ++t) ++counts[p[t]];
  }
  const double total = 500.0 * 60.0;
  CHECK(counts[0] / total == doctest::Approx(0.5).epsilon(0.03));
  CHECK(counts[1] / total == doctest::Approx(0.25).epsilon(0.06));
}

TEST_CASE("test draws") {
  const Pmf qx = Pmf::uniform(kGf2);
  const NoiseModel zero_noise = NoiseModel::iid(Pmf::point_mass(kGf2, 0));
  const Environment env = Environment::with_pattern_count(kGf2, 40, 8, qx, zero_noise);
  const PatternDatabase db = generate_database(env, 3);

  const TestInstance clean = draw_test(db, zero_noise, 17);
  CHECK(clean.y == db.pattern(clean.index));

  // crossover one flips every symbol
  const NoiseModel certain_flip = NoiseModel::iid(Pmf::bernoulli(1.0));
  const TestInstance flipped = draw_test(db, certain_flip, 17);
  CHECK(flipped.y ==
        vec_add(db.pattern(flipped.index),
                FieldVector(kGf2, std::vector<symbol_t>(40, 1))));

  // the observation identity y - x_j = z holds exactly
  const NoiseModel bern = NoiseModel::iid(Pmf::bernoulli(0.2));
  for (int t = 0; t < 50; ++t) {
    const TestInstance inst = draw_test(db, bern, 100 + t);
    CHECK(vec_sub(inst.y, db.pattern(inst.index)) == inst.z);
  }
}

TEST_CASE("drawn indices are uniform") {
  const Pmf qx = Pmf::uniform(kGf2);
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(0.1));
  const Environment env = Environment::with_pattern_count(kGf2, 16, 8, qx, noise);
  const PatternDatabase db = generate_database(env, 5);
  std::vector<int> hits(8, 0);
  const int draws = 10000;
  for (int t = 0; t < draws; ++t)
    ++hits[draw_test(db, noise, static_cast<std::uint64_t>(t)).index];
  for (int h : hits) {
    CHECK(h >= 0.10 * draws);
    CHECK(h <= 0.15 * draws);
  }
}

TEST_CASE("iid noise satisfies the AEP sanity bound") {
  const NoiseModel bern = NoiseModel::iid(Pmf::bernoulli(0.11));
  double sum = 0.0;
  const int reps = 200;
  for (int t = 0; t < reps; ++t) {
    RngStream rng(55, "aep", static_cast<std::uint64_t>(t));
    sum += -bern.log_likelihood(bern.sample(2000, rng)) / 2000.0;
  }
  CHECK(std::abs(sum / reps - bern.entropy_rate()) <= 0.02);
}

TEST_CASE("database round-trips through the binary format") {
  const NoiseModel noise2 = NoiseModel::iid(Pmf::bernoulli(0.1));
  const Environment env2 = Environment::with_pattern_count(
      kGf2, 77, 10, Pmf::uniform(kGf2), noise2);
  const PatternDatabase db2 = generate_database(env2, 23);

  const NoiseModel noise3 = NoiseModel::iid(Pmf::uniform_error(kGf3, 0.2));
  const Environment env3 = Environment::with_pattern_count(
      kGf3, 33, 6, Pmf::uniform(kGf3), noise3);
  const PatternDatabase db3 = generate_database(env3, 29);

  for (const PatternDatabase* db : {&db2, &db3}) {
    const auto path = std::filesystem::temp_directory_path() /
                      ("recog_db_test_" + std::to_string(db->spec().order()));
    save_database(*db, path);
    const PatternDatabase loaded = load_database(path);
    CHECK(loaded.spec() == db->spec());
    CHECK(loaded.size() == db->size());
    CHECK(loaded.pattern_len() == db->pattern_len());
    CHECK(loaded.seed() == db->seed());
    bool same = true;
    for (std::uint64_t i = 0; i < db->size(); ++i)
      same = same && loaded.pattern(i) == db->pattern(i);
    CHECK(same);
    std::filesystem::remove(path);
  }
}
