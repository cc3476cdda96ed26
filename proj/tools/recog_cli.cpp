// Command-line front end: single experiments, sweeps, bound tables, matrix
// generation, and the built-in oracle self-tests.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "recog/compressors.hpp"
#include "recog/decoders.hpp"
#include "recog/harness.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::string> mode;
  bool print_config = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "config file (key = value)")
      ->required();
  cmd->add_option("--seed", flags.seed, "master seed override");
  cmd->add_option("--trials", flags.trials, "trial count override");
  cmd->add_option("--out", flags.out, "CSV output path override");
  cmd->add_option("--threads", flags.threads, "worker count override");
  cmd->add_option("--mode", flags.mode, "typicality mode override")
      ->check(CLI::IsMember({"strict", "score"}));
  cmd->add_flag("--print-config", flags.print_config,
                "echo the resolved configuration and exit");
}

recog::ExperimentConfig resolve_config(const CommonFlags& flags) {
  recog::ExperimentConfig cfg =
      recog::parse_config_file(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.trials) cfg.trials = *flags.trials;
  if (flags.out) cfg.out = *flags.out;
  if (flags.threads) cfg.threads = *flags.threads;
  if (flags.mode) cfg.mode = *flags.mode;
  return cfg;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << body;
  if (!os) throw std::runtime_error("write failed for " + path);
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stod(tok));
  return out;
}

int cmd_run(const CommonFlags& flags) {
  const recog::ExperimentConfig cfg = resolve_config(flags);
  if (flags.print_config) {
    std::cout << recog::render_config(cfg);
    return 0;
  }
  const recog::ExperimentResult res = recog::run_experiment(cfg);
  std::cout << recog::summarize(res) << '\n';
  const std::string csv = recog::csv_header() + "\n" + recog::csv_row(res) + "\n";
  if (!cfg.out.empty()) {
    write_text(cfg.out, csv);
    std::cout << "wrote " << cfg.out << '\n';
  } else {
    std::cout << csv;
  }
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& axis,
              const std::string& values) {
  const recog::ExperimentConfig cfg = resolve_config(flags);
  if (flags.print_config) {
    std::cout << recog::render_config(cfg);
    return 0;
  }
  const std::string csv =
      recog::sweep(cfg, recog::parse_sweep_axis(axis), parse_values(values));
  if (!cfg.out.empty()) {
    write_text(cfg.out, csv);
    std::cout << "wrote " << cfg.out << '\n';
  } else {
    std::cout << csv;
  }
  return 0;
}

int cmd_bounds(std::uint32_t r, const std::string& rates_list,
               const std::string& q_list) {
  const recog::FieldSpec spec(r);
  const recog::Pmf qx = recog::Pmf::uniform(spec);
  std::cout << "rate,q,bound_thm1,bound_ldpc,bound_thm3,bound_worst_case\n";
  char buf[160];
  for (double rate : parse_values(rates_list)) {
    for (double q : parse_values(q_list)) {
      const recog::Pmf qz = recog::Pmf::uniform_error(spec, q);
      const double thm1 = recog::truncation_bound(rate, rate, qx, qz);
      const double ldpc =
          r == 2 ? recog::ldpc_bound(rate, rate, q).value
                 : std::numeric_limits<double>::quiet_NaN();
      const double thm3 =
          recog::syndrome_bound(rate, rate, recog::entropy(qz)).value;
      const double wc = recog::worst_case_noise_bound(spec, q, rate).value;
      std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", rate,
                    q, thm1, ldpc, thm3, wc);
      std::cout << buf;
    }
  }
  return 0;
}

int cmd_gen_matrix(std::uint32_t r, std::size_t n, int dv, int dc,
                   std::uint64_t seed, const std::string& out) {
  const recog::LdpcSample sample =
      recog::sample_ldpc({n, dv, dc, recog::FieldSpec(r), seed});
  std::cerr << "rows " << sample.matrix.rows() << ", cols "
            << sample.matrix.cols() << ", residual 4-cycles "
            << sample.residual_four_cycles << '\n';
  if (out.empty()) {
    recog::write_alist(sample.matrix, std::cout);
  } else {
    recog::write_alist(sample.matrix, std::filesystem::path(out));
    std::cout << "wrote " << out << '\n';
  }
  return 0;
}

int selftest_field() {
  using namespace recog;
  for (std::uint32_t r : {2u, 3u, 5u, 7u, 11u, 13u}) {
    const FieldSpec spec(r);
    for (std::uint32_t a = 0; a < r; ++a) {
      const auto sa = static_cast<symbol_t>(a);
      if (gf_add(sa, 0, spec) != sa) return 1;
      if (gf_mul(sa, 1, spec) != sa) return 1;
      if (a != 0 && gf_mul(sa, gf_inv(sa, spec), spec) != 1) return 1;
      for (std::uint32_t b = 0; b < r; ++b) {
        const auto sb = static_cast<symbol_t>(b);
        if (gf_add(sa, sb, spec) != gf_add(sb, sa, spec)) return 1;
        if (gf_mul(sa, sb, spec) != gf_mul(sb, sa, spec)) return 1;
        if (gf_sub(gf_add(sa, sb, spec), sb, spec) != sa) return 1;
        for (std::uint32_t c = 0; c < r; ++c) {
          const auto sc = static_cast<symbol_t>(c);
          if (gf_add(gf_add(sa, sb, spec), sc, spec) !=
              gf_add(sa, gf_add(sb, sc, spec), spec))
            return 1;
          if (gf_mul(gf_mul(sa, sb, spec), sc, spec) !=
              gf_mul(sa, gf_mul(sb, sc, spec), spec))
            return 1;
          if (gf_mul(sa, gf_add(sb, sc, spec), spec) !=
              gf_add(gf_mul(sa, sb, spec), gf_mul(sa, sc, spec), spec))
            return 1;
        }
      }
    }
  }
  return 0;
}

int selftest_sparse_dense() {
  using namespace recog;
  RngStream rng(7, "selftest", 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t order = trial % 2 == 0 ? 2u : 5u;
    const FieldSpec spec(order);
    const auto rows = static_cast<std::uint32_t>(2 + rng.next_below(12));
    const auto cols = static_cast<std::uint32_t>(2 + rng.next_below(16));
    std::vector<MatrixEntry> entries;
    std::vector<std::vector<symbol_t>> dense(
        rows, std::vector<symbol_t>(cols, 0));
    for (std::uint32_t rr = 0; rr < rows; ++rr)
      for (std::uint32_t cc = 0; cc < cols; ++cc)
        if (rng.next_below(3) == 0) {
          const auto v =
              static_cast<symbol_t>(1 + rng.next_below(order - 1 ? order - 1 : 1));
          dense[rr][cc] = v;
          entries.push_back({rr, cc, v});
        }
    const SparseMatrix m(spec, rows, cols, entries);
    std::vector<symbol_t> vin(cols);
    for (auto& s : vin) s = static_cast<symbol_t>(rng.next_below(order));
    const FieldVector v(spec, vin);
    const FieldVector got = m.multiply(v);
    for (std::uint32_t rr = 0; rr < rows; ++rr) {
      std::uint32_t acc = 0;
      for (std::uint32_t cc = 0; cc < cols; ++cc)
        acc = (acc + std::uint32_t{dense[rr][cc]} * vin[cc]) % order;
      if (got[rr] != acc) return 1;
    }
  }
  return 0;
}

int selftest_ge() {
  using namespace recog;
  const FieldSpec spec(2);
  const GilbertElliottParams params{0.1, 0.3, Pmf::bernoulli(0.02),
                                    Pmf::bernoulli(0.3)};
  const NoiseModel model = NoiseModel::gilbert_elliott(params);
  for (std::size_t len = 1; len <= 8; ++len) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
      std::vector<symbol_t> z(len);
      for (std::size_t t = 0; t < len; ++t)
        z[t] = static_cast<symbol_t>((bits >> t) & 1);
      const FieldVector zv(spec, z);
      // exhaustive hidden-state path sum
      double total = 0.0;
      for (std::uint64_t path = 0; path < (std::uint64_t{1} << len); ++path) {
        double p = 1.0;
        bool prev_good = false;
        for (std::size_t t = 0; t < len; ++t) {
          const bool good = ((path >> t) & 1) == 0;
          if (t == 0)
            p *= good ? 0.3 / 0.4 : 0.1 / 0.4;
          else
            p *= prev_good ? (good ? 0.9 : 0.1) : (good ? 0.3 : 0.7);
          p *= good ? params.q_good[z[t]] : params.q_bad[z[t]];
          prev_good = good;
        }
        total += p;
      }
      if (std::abs(model.log_likelihood(zv) - std::log2(total)) > 1e-9)
        return 1;
    }
  }
  return 0;
}

int selftest_bp_vs_ml() {
  using namespace recog;
  const FieldSpec spec(2);
  const LdpcSample sample = sample_ldpc({12, 3, 6, spec, 99});
  const NoiseModel noise = NoiseModel::iid(Pmf::bernoulli(0.05));
  int matched = 0, unique_count = 0;
  for (int t = 0; t < 60; ++t) {
    RngStream rng(5000, "selftest-bp", static_cast<std::uint64_t>(t));
    const FieldVector z = noise.sample(12, rng);
    const FieldVector syndrome = sample.matrix.multiply(z);
    const DecodeOutcome ml = ml_syndrome_decode(sample.matrix, syndrome, noise);
    if (ml.ambiguous) continue;
    ++unique_count;
    const DecodeOutcome bp =
        bp_syndrome_decode(sample.matrix, syndrome, Pmf::bernoulli(0.05));
    if (!bp.failed() && *bp.estimate == *ml.estimate) ++matched;
  }
  return unique_count > 0 && matched * 10 >= unique_count * 9 ? 0 : 1;
}

int selftest_wilson() {
  using namespace recog;
  int covered = 0;
  const double p_true = 0.3;
  for (int rep = 0; rep < 400; ++rep) {
    RngStream rng(31, "selftest-wilson", static_cast<std::uint64_t>(rep));
    std::uint64_t hits = 0;
    const int n = 200;
    for (int i = 0; i < n; ++i)
      if (rng.next_double() < p_true) ++hits;
    const auto [lo, hi] = wilson_interval(hits, n);
    if (lo <= p_true && p_true <= hi) ++covered;
  }
  // 95% nominal; allow slack for 400 replicates
  return covered >= 360 ? 0 : 1;
}

int cmd_selftest() {
  struct Suite {
    const char* name;
    int (*fn)();
  };
  const Suite suites[] = {
      {"field axioms", selftest_field},
      {"sparse vs dense multiply", selftest_sparse_dense},
      {"hidden-markov likelihood", selftest_ge},
      {"bp vs exhaustive ml", selftest_bp_vs_ml},
      {"wilson coverage", selftest_wilson},
  };
  int failures = 0;
  for (const Suite& s : suites) {
    const int rc = s.fn();
    std::cout << (rc == 0 ? "passed: " : "FAILED: ") << s.name << '\n';
    failures += rc != 0;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear-encoding pattern recognition workbench"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run a single experiment");
  add_common_flags(run, run_flags);

  CommonFlags sweep_flags;
  std::string sweep_axis = "rc";
  std::string sweep_values;
  CLI::App* sweep = app.add_subcommand("sweep", "run one experiment per axis value");
  add_common_flags(sweep, sweep_flags);
  sweep->add_option("--axis", sweep_axis, "rc | n | q | rate")
      ->check(CLI::IsMember({"rc", "n", "q", "rate"}));
  sweep->add_option("--values", sweep_values, "comma-separated axis values")
      ->required();

  std::uint32_t bounds_r = 2;
  std::string bounds_rates = "0.5";
  std::string bounds_q = "0.05,0.11";
  CLI::App* bounds = app.add_subcommand("bounds", "print a bound table");
  bounds->add_option("--r", bounds_r, "field order");
  bounds->add_option("--rates", bounds_rates, "comma-separated rm=rs rates");
  bounds->add_option("--q", bounds_q, "comma-separated crossover values");

  std::uint32_t gm_r = 2;
  std::size_t gm_n = 1200;
  int gm_dv = 3, gm_dc = 6;
  std::uint64_t gm_seed = 1;
  std::string gm_out;
  CLI::App* gen = app.add_subcommand("gen-matrix", "sample a matrix, emit alist");
  gen->add_option("--r", gm_r, "field order");
  gen->add_option("--n", gm_n, "columns")->required();
  gen->add_option("--dv", gm_dv, "column degree");
  gen->add_option("--dc", gm_dc, "row degree");
  gen->add_option("--seed", gm_seed, "ensemble seed");
  gen->add_option("--out", gm_out, "alist output path (stdout when absent)");

  CLI::App* selftest = app.add_subcommand("selftest", "run the oracle suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_axis, sweep_values);
    if (bounds->parsed()) return cmd_bounds(bounds_r, bounds_rates, bounds_q);
    if (gen->parsed())
      return cmd_gen_matrix(gm_r, gm_n, gm_dv, gm_dc, gm_seed, gm_out);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const recog::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const recog::ResourceError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
