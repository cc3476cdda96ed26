#include "recog/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace recog {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an unsigned integer, got '" + value +
                      "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

std::vector<double> parse_number_list(const std::string& key,
                                      const std::string& body) {
  std::vector<double> out;
  for (const std::string& tok : split(body, ';'))
    out.push_back(parse_double(key, trim(tok)));
  return out;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "env.r") cfg.r = static_cast<std::uint32_t>(parse_u64(key, value));
  else if (key == "env.n") cfg.n = static_cast<std::size_t>(parse_u64(key, value));
  else if (key == "env.rc") cfg.rc = parse_double(key, value);
  else if (key == "env.mc") cfg.mc = parse_u64(key, value);
  else if (key == "env.mc_cap") cfg.mc_cap = parse_u64(key, value);
  else if (key == "env.qx") cfg.qx = value;
  else if (key == "env.noise") cfg.noise = value;
  else if (key == "sys.strategy") cfg.strategy = value;
  else if (key == "sys.rm") cfg.rm = parse_double(key, value);
  else if (key == "sys.rs") cfg.rs = parse_double(key, value);
  else if (key == "sys.ldpc_dv") cfg.ldpc_dv = static_cast<int>(parse_u64(key, value));
  else if (key == "sys.ldpc_dc") cfg.ldpc_dc = static_cast<int>(parse_u64(key, value));
  else if (key == "sys.bp_max_iterations") cfg.bp_max_iterations = static_cast<int>(parse_u64(key, value));
  else if (key == "sys.bp_damping") cfg.bp_damping = parse_double(key, value);
  else if (key == "sys.bp_early_exit") cfg.bp_early_exit = parse_bool(key, value);
  else if (key == "sys.epsilon") cfg.epsilon = parse_double(key, value);
  else if (key == "sys.mode") cfg.mode = value;
  else if (key == "sys.fixed_system") cfg.fixed_system = parse_bool(key, value);
  else if (key == "run.trials") cfg.trials = parse_u64(key, value);
  else if (key == "run.seed") cfg.seed = parse_u64(key, value);
  else if (key == "run.threads") cfg.threads = static_cast<int>(parse_u64(key, value));
  else if (key == "run.out") cfg.out = value;
  else if (key == "run.budget") cfg.budget = parse_double(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected key = value");
    apply_config_entry(cfg, trim(line.substr(0, eq)),
                       trim(line.substr(eq + 1)));
  }
  return cfg;
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "env.r = " << cfg.r << '\n';
  os << "env.n = " << cfg.n << '\n';
  if (cfg.rc) os << "env.rc = " << fmt6(*cfg.rc) << '\n';
  if (cfg.mc) os << "env.mc = " << *cfg.mc << '\n';
  os << "env.mc_cap = " << cfg.mc_cap << '\n';
  os << "env.qx = " << cfg.qx << '\n';
  os << "env.noise = " << cfg.noise << '\n';
  os << "sys.strategy = " << cfg.strategy << '\n';
  os << "sys.rm = " << fmt6(cfg.rm) << '\n';
  os << "sys.rs = " << fmt6(cfg.rs) << '\n';
  os << "sys.ldpc_dv = " << cfg.ldpc_dv << '\n';
  os << "sys.ldpc_dc = " << cfg.ldpc_dc << '\n';
  os << "sys.bp_max_iterations = " << cfg.bp_max_iterations << '\n';
  os << "sys.bp_damping = " << fmt6(cfg.bp_damping) << '\n';
  os << "sys.bp_early_exit = " << (cfg.bp_early_exit ? "true" : "false") << '\n';
  os << "sys.epsilon = " << fmt6(cfg.epsilon) << '\n';
  os << "sys.mode = " << cfg.mode << '\n';
  os << "sys.fixed_system = " << (cfg.fixed_system ? "true" : "false") << '\n';
  os << "run.trials = " << cfg.trials << '\n';
  os << "run.seed = " << cfg.seed << '\n';
  os << "run.threads = " << cfg.threads << '\n';
  if (!cfg.out.empty()) os << "run.out = " << cfg.out << '\n';
  os << "run.budget = " << fmt6(cfg.budget) << '\n';
  return os.str();
}

Pmf parse_qx_spec(const std::string& spec_string, FieldSpec spec) {
  if (spec_string == "uniform") return Pmf::uniform(spec);
  const auto colon = spec_string.find(':');
  const std::string head = spec_string.substr(0, colon);
  const std::string body =
      colon == std::string::npos ? "" : spec_string.substr(colon + 1);
  if (head == "bernoulli") {
    if (spec.order() != 2)
      throw ConfigError("env.qx: bernoulli patterns need GF(2)");
    return Pmf::bernoulli(parse_double("env.qx", body));
  }
  if (head == "probs") {
    const std::vector<double> p = parse_number_list("env.qx", body);
    if (p.size() != spec.order())
      throw ConfigError("env.qx: probs needs exactly " +
                        std::to_string(spec.order()) + " entries");
    try {
      return Pmf(spec, p);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("env.qx: ") + e.what());
    }
  }
  throw ConfigError("env.qx: unknown pattern distribution '" + spec_string +
                    "'");
}

NoiseModel parse_noise_spec(const std::string& spec_string, FieldSpec spec) {
  if (spec_string.empty()) throw ConfigError("env.noise: missing noise spec");
  const auto colon = spec_string.find(':');
  const std::string head = spec_string.substr(0, colon);
  const std::string body =
      colon == std::string::npos ? "" : spec_string.substr(colon + 1);
  try {
    if (head == "bernoulli") {
      if (spec.order() != 2)
        throw ConfigError("env.noise: bernoulli noise needs GF(2)");
      return NoiseModel::iid(Pmf::bernoulli(parse_double("env.noise", body)));
    }
    if (head == "uniform-error") {
      return NoiseModel::iid(
          Pmf::uniform_error(spec, parse_double("env.noise", body)));
    }
    if (head == "iid") {
      const std::vector<double> p = parse_number_list("env.noise", body);
      if (p.size() != spec.order())
        throw ConfigError("env.noise: iid needs exactly " +
                          std::to_string(spec.order()) + " entries");
      return NoiseModel::iid(Pmf(spec, p));
    }
    if (head == "ge") {
      const std::vector<double> p = parse_number_list("env.noise", body);
      if (p.size() != 4)
        throw ConfigError(
            "env.noise: ge needs pgb;pbg;qgood;qbad crossover values");
      return NoiseModel::gilbert_elliott(
          GilbertElliottParams{p[0], p[1], Pmf::uniform_error(spec, p[2]),
                               Pmf::uniform_error(spec, p[3])});
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("env.noise: ") + e.what());
  }
  throw ConfigError("env.noise: unknown noise spec '" + spec_string + "'");
}

namespace {

enum class Strategy { truncation, syndrome_bp, syndrome_oracle };

Strategy parse_strategy(const std::string& s) {
  if (s == "truncation") return Strategy::truncation;
  if (s == "syndrome-bp") return Strategy::syndrome_bp;
  if (s == "syndrome-oracle") return Strategy::syndrome_oracle;
  throw ConfigError("sys.strategy: unknown strategy '" + s + "'");
}

TypicalityParams::Mode parse_mode(const std::string& s) {
  if (s == "strict") return TypicalityParams::Mode::strict;
  if (s == "score") return TypicalityParams::Mode::score_only;
  throw ConfigError("sys.mode: expected strict or score, got '" + s + "'");
}

struct Compiled {
  ExperimentConfig cfg;
  FieldSpec spec;
  Environment env;
  Strategy strategy;
  TypicalityParams typicality;
  BpConfig bp;
  std::optional<LdpcEnsembleSpec> ldpc;   // syndrome strategies
  std::optional<CompressorPair> fixed_pair;  // truncation: same every trial
  double bound_truncation = kNaN;
  double bound_ldpc = kNaN;
  double bound_syndrome = kNaN;
};

Compiled compile(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("run.trials: must be >= 1");
  if (cfg.threads < 1) throw ConfigError("run.threads: must be >= 1");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("sys.epsilon: must be > 0");
  if (cfg.n < 1) throw ConfigError("env.n: must be >= 1");
  if (cfg.bp_max_iterations < 0)
    throw ConfigError("sys.bp_max_iterations: must be >= 0");
  if (!(cfg.bp_damping >= 0.0 && cfg.bp_damping < 1.0))
    throw ConfigError("sys.bp_damping: must be in [0, 1)");

  FieldSpec spec = [&] {
    try {
      return FieldSpec(cfg.r);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("env.r: ") + e.what());
    }
  }();

  Pmf qx = parse_qx_spec(cfg.qx, spec);
  NoiseModel noise = parse_noise_spec(cfg.noise, spec);
  if (!cfg.rc && !cfg.mc)
    throw ConfigError("one of env.rc or env.mc is required");

  Environment env =
      cfg.mc ? Environment::with_pattern_count(spec, cfg.n, *cfg.mc, qx, noise,
                                               cfg.mc_cap)
             : Environment(spec, cfg.n, *cfg.rc, qx, noise, cfg.mc_cap);

  const Strategy strategy = parse_strategy(cfg.strategy);
  TypicalityParams typicality{cfg.epsilon, parse_mode(cfg.mode)};
  BpConfig bp{cfg.bp_max_iterations, cfg.bp_damping, cfg.bp_early_exit};
  if (strategy == Strategy::truncation &&
      typicality.mode == TypicalityParams::Mode::strict && !noise.is_iid())
    throw ConfigError(
        "sys.mode: strict truncation typicality needs i.i.d. noise");

  Compiled out{cfg,        spec, std::move(env), strategy, typicality, bp,
               std::nullopt, std::nullopt};

  if (strategy == Strategy::truncation) {
    try {
      out.fixed_pair = truncation_pair(cfg.n, cfg.rm, cfg.rs, spec);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("sys.rm/sys.rs: ") + e.what());
    }
  } else {
    if (cfg.ldpc_dv < 1 || cfg.ldpc_dc < 1)
      throw ConfigError("sys.ldpc_dv/dc: degrees must be >= 1");
    const double code_rate =
        static_cast<double>(cfg.ldpc_dv) / static_cast<double>(cfg.ldpc_dc);
    if (std::abs(code_rate - cfg.rm) > 0.5 / static_cast<double>(cfg.n))
      throw ConfigError("sys.rm: " + fmt6(cfg.rm) +
                        " does not match ldpc rate dv/dc = " + fmt6(code_rate));
    if (cfg.rs < cfg.rm)
      throw ConfigError("sys.rs: syndrome strategies need rs >= rm");
    out.ldpc = LdpcEnsembleSpec{cfg.n, cfg.ldpc_dv, cfg.ldpc_dc, spec, 0};
  }

  // bounds from realized rates
  const double rm_realized =
      strategy == Strategy::truncation
          ? out.fixed_pair->rm
          : static_cast<double>(cfg.n * cfg.ldpc_dv / cfg.ldpc_dc) /
                static_cast<double>(cfg.n);
  const double rs_realized =
      strategy == Strategy::truncation
          ? out.fixed_pair->rs
          : static_cast<double>(std::llround(cfg.rs * cfg.n)) /
                static_cast<double>(cfg.n);
  if (noise.is_iid()) {
    out.bound_truncation =
        truncation_bound(rm_realized, rs_realized, qx, noise.iid_pmf());
    if (spec.order() == 2)
      out.bound_ldpc =
          ldpc_bound(rm_realized, rs_realized, noise.iid_pmf()[1]).value;
  }
  out.bound_syndrome =
      syndrome_bound(rm_realized, rs_realized, noise.entropy_rate()).value;
  return out;
}

// Coarse per-config cost model (elementary operations), only used to refuse
// configurations that would hang the desk.
double estimate_cost(const Compiled& c) {
  const double mc = static_cast<double>(c.env.pattern_count());
  const double n = static_cast<double>(c.env.n());
  const bool packed = c.spec.order() == 2;
  const double sym = packed ? 1.0 / 32.0 : 1.0;

  const double db_cost = mc * n * sym;
  double memory_cost, per_index;
  if (c.strategy == Strategy::truncation) {
    const double n_min = static_cast<double>(c.fixed_pair->n_min());
    memory_cost = mc * static_cast<double>(c.fixed_pair->memory.rows()) * sym;
    per_index = n_min * sym + 8.0;
  } else {
    const double nnz = n * c.cfg.ldpc_dv;
    memory_cost = mc * nnz;
    if (c.strategy == Strategy::syndrome_bp) {
      per_index = nnz * (c.bp.max_iterations + 1.0) * 8.0;
    } else {
      const double rows = n * c.cfg.ldpc_dv / c.cfg.ldpc_dc;
      const double free_dims = n - rows;
      per_index = free_dims > 40.0 ? std::numeric_limits<double>::infinity()
                                   : std::pow(static_cast<double>(c.spec.order()),
                                              free_dims) *
                                         n;
    }
  }
  const double per_system = db_cost + memory_cost;
  const double per_trial = mc * per_index + n * 4.0;
  const double trials = static_cast<double>(c.cfg.trials);
  return c.cfg.fixed_system ? per_system + trials * per_trial
                            : trials * (per_system + per_trial);
}

struct TrialOutcome {
  ErrorEvent event = ErrorEvent::none;
  std::uint64_t false_accepts = 0;
  std::uint64_t false_evals = 0;
  std::uint64_t decode_iterations = 0;
};

struct SharedSystem {
  RecognitionSystem system;
  PatternDatabase db;
  CompressedMemory memory;
};

RecognitionSystem make_system(const Compiled& c, std::uint64_t system_index) {
  CompressorPair pair =
      c.strategy == Strategy::truncation
          ? *c.fixed_pair
          : [&] {
              LdpcEnsembleSpec spec = *c.ldpc;
              spec.seed = derive_seed(c.cfg.seed, "ldpc", system_index);
              LdpcSample sample = sample_ldpc(spec);
              return extend_to_sensory(
                  sample.matrix, c.cfg.rs,
                  derive_seed(c.cfg.seed, "sensory", system_index));
            }();
  const NoiseEstimator estimator =
      c.strategy == Strategy::truncation   ? NoiseEstimator::truncation
      : c.strategy == Strategy::syndrome_bp ? NoiseEstimator::syndrome_bp
                                            : NoiseEstimator::syndrome_oracle;
  return RecognitionSystem(std::move(pair), estimator, c.env.qx(),
                           c.env.noise(), c.typicality, c.bp);
}

TrialOutcome run_trial(const Compiled& c, std::uint64_t t,
                       const SharedSystem* shared) {
  const RecognitionSystem* system;
  const PatternDatabase* db;
  const CompressedMemory* memory;

  std::optional<RecognitionSystem> local_system;
  std::optional<PatternDatabase> local_db;
  std::optional<CompressedMemory> local_memory;
  if (shared) {
    system = &shared->system;
    db = &shared->db;
    memory = &shared->memory;
  } else {
    local_system.emplace(make_system(c, t));
    local_db.emplace(
        generate_database(c.env, derive_seed(c.cfg.seed, "db", t)));
    local_memory.emplace(build_memory(*local_system, *local_db));
    system = &*local_system;
    db = &*local_db;
    memory = &*local_memory;
  }

  const TestInstance instance =
      draw_test(*db, c.env.noise(), derive_seed(c.cfg.seed, "trial", t));
  const FieldVector sigma = compress(system->pair.sensory, instance.y);
  const Verdict verdict = recognize(*system, *memory, sigma);

  TrialOutcome out;
  out.event = classify_error(verdict, instance);
  out.decode_iterations = verdict.decode_iterations;
  out.false_evals = verdict.scores.size() - 1;
  const std::uint64_t accepted = verdict.accepted_count();
  const bool true_accepted = !std::isnan(verdict.scores[instance.index]);
  out.false_accepts = accepted - (true_accepted ? 1 : 0);
  return out;
}

}  // namespace

std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Compiled c = compile(cfg);

  const double cost = estimate_cost(c);
  if (cost > cfg.budget)
    throw ResourceError("estimated cost " + fmt6(cost) +
                        " exceeds budget " + fmt6(cfg.budget) +
                        " (raise run.budget to proceed)");

  std::optional<SharedSystem> shared;
  if (cfg.fixed_system) {
    RecognitionSystem system = make_system(c, 0);
    PatternDatabase db =
        generate_database(c.env, derive_seed(cfg.seed, "db", 0));
    CompressedMemory memory = build_memory(system, db);
    shared.emplace(SharedSystem{std::move(system), std::move(db),
                                std::move(memory)});
  }

  std::vector<TrialOutcome> outcomes(cfg.trials);
  const int workers = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(cfg.threads),
                              cfg.trials));
  if (workers <= 1) {
    for (std::uint64_t t = 0; t < cfg.trials; ++t)
      outcomes[t] = run_trial(c, t, shared ? &*shared : nullptr);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (;;) {
            const std::uint64_t t = next.fetch_add(1);
            if (t >= cfg.trials) break;
            outcomes[t] = run_trial(c, t, shared ? &*shared : nullptr);
          }
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  ExperimentResult res;
  res.trials = cfg.trials;
  std::uint64_t iterations = 0;
  for (const TrialOutcome& o : outcomes) {
    switch (o.event) {
      case ErrorEvent::none: ++res.event_none; break;
      case ErrorEvent::missed_typicality: ++res.event_missed; break;
      case ErrorEvent::false_accept: ++res.event_false_accept; break;
      case ErrorEvent::tie: ++res.event_tie; break;
    }
    res.false_index_accepts += o.false_accepts;
    res.false_index_evals += o.false_evals;
    iterations += o.decode_iterations;
  }
  res.errors = res.event_missed + res.event_false_accept + res.event_tie;
  res.p_hat = static_cast<double>(res.errors) / static_cast<double>(res.trials);
  std::tie(res.ci_lo, res.ci_hi) = wilson_interval(res.errors, res.trials);

  res.rc_requested = c.env.rc_requested();
  res.rc_realized = c.env.rc_realized();
  if (c.strategy == Strategy::truncation) {
    res.rm_realized = c.fixed_pair->rm;
    res.rs_realized = c.fixed_pair->rs;
  } else {
    res.rm_realized =
        static_cast<double>(cfg.n * cfg.ldpc_dv / cfg.ldpc_dc) /
        static_cast<double>(cfg.n);
    res.rs_realized = static_cast<double>(std::llround(cfg.rs * cfg.n)) /
                      static_cast<double>(cfg.n);
  }
  res.bound_truncation = c.bound_truncation;
  res.bound_ldpc = c.bound_ldpc;
  res.bound_syndrome = c.bound_syndrome;
  const std::uint64_t decode_calls = res.false_index_evals + res.trials;
  res.mean_decode_iterations =
      decode_calls > 0
          ? static_cast<double>(iterations) / static_cast<double>(decode_calls)
          : 0.0;
  res.strategy = cfg.strategy;
  res.noise_descriptor = cfg.noise;
  res.mode = cfg.mode;
  res.epsilon = cfg.epsilon;
  res.r = cfg.r;
  res.n = cfg.n;
  res.seed = cfg.seed;
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return res;
}

std::string csv_header() {
  return "r,n,rc_requested,rc_realized,rm,rs,strategy,noise,epsilon,mode,"
         "trials,errors,p_hat,ci_lo,ci_hi,event_missed,event_false_accept,"
         "event_tie,bound_thm1,bound_ldpc,bound_thm3,seed";
}

std::string csv_row(const ExperimentResult& res) {
  std::ostringstream os;
  os << res.r << ',' << res.n << ',' << fmt6(res.rc_requested) << ','
     << fmt6(res.rc_realized) << ',' << fmt6(res.rm_realized) << ','
     << fmt6(res.rs_realized) << ',' << res.strategy << ','
     << res.noise_descriptor << ',' << fmt6(res.epsilon) << ',' << res.mode
     << ',' << res.trials << ',' << res.errors << ',' << fmt6(res.p_hat) << ','
     << fmt6(res.ci_lo) << ',' << fmt6(res.ci_hi) << ',' << res.event_missed
     << ',' << res.event_false_accept << ',' << res.event_tie << ','
     << fmt6(res.bound_truncation) << ',' << fmt6(res.bound_ldpc) << ','
     << fmt6(res.bound_syndrome) << ',' << res.seed;
  return os.str();
}

std::string summarize(const ExperimentResult& res) {
  std::ostringstream os;
  os << "trials " << res.trials << ", errors " << res.errors << ", p_hat "
     << fmt6(res.p_hat) << " [" << fmt6(res.ci_lo) << ", " << fmt6(res.ci_hi)
     << "]\n";
  os << "events: ok " << res.event_none << ", missed " << res.event_missed
     << ", false-accept " << res.event_false_accept << ", tie "
     << res.event_tie << '\n';
  os << "rates: rc " << fmt6(res.rc_realized) << " (requested "
     << fmt6(res.rc_requested) << "), rm " << fmt6(res.rm_realized) << ", rs "
     << fmt6(res.rs_realized) << '\n';
  os << "bounds: truncation " << fmt6(res.bound_truncation) << ", ldpc "
     << fmt6(res.bound_ldpc) << ", linear-code " << fmt6(res.bound_syndrome)
     << '\n';
  os << "false-index accepts " << res.false_index_accepts << " / "
     << res.false_index_evals << " evaluations\n";
  os << "wall " << fmt6(res.wall_seconds) << " s";
  return os.str();
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "rc") return SweepAxis::rc;
  if (name == "n") return SweepAxis::n;
  if (name == "q") return SweepAxis::q;
  if (name == "rate") return SweepAxis::rate;
  throw ConfigError("unknown sweep axis '" + name + "'");
}

namespace {

ExperimentConfig apply_axis(const ExperimentConfig& base, SweepAxis axis,
                            double value) {
  ExperimentConfig cfg = base;
  switch (axis) {
    case SweepAxis::rc:
      cfg.rc = value;
      cfg.mc.reset();
      break;
    case SweepAxis::n:
      cfg.n = static_cast<std::size_t>(std::llround(value));
      break;
    case SweepAxis::q: {
      const auto colon = cfg.noise.find(':');
      const std::string head =
          colon == std::string::npos ? cfg.noise : cfg.noise.substr(0, colon);
      if (head != "bernoulli" && head != "uniform-error")
        throw ConfigError(
            "sweep axis q needs bernoulli or uniform-error noise");
      cfg.noise = head + ":" + fmt6(value);
      break;
    }
    case SweepAxis::rate:
      cfg.rm = value;
      cfg.rs = value;
      break;
  }
  return cfg;
}

}  // namespace

std::string sweep(const ExperimentConfig& base, SweepAxis axis,
                  const std::vector<double>& values) {
  std::ostringstream os;
  os << csv_header() << '\n';
  for (double value : values) {
    ExperimentConfig cfg = base;
    std::string error;
    try {
      cfg = apply_axis(base, axis, value);
      os << csv_row(run_experiment(cfg)) << '\n';
      continue;
    } catch (const std::exception& e) {
      error = e.what();
    }
    std::fprintf(stderr, "sweep point %s failed: %s\n", fmt6(value).c_str(),
                 error.c_str());
    ExperimentResult failed;
    failed.trials = 0;
    failed.p_hat = failed.ci_lo = failed.ci_hi = kNaN;
    failed.rc_requested = failed.rc_realized = kNaN;
    failed.rm_realized = cfg.rm;
    failed.rs_realized = cfg.rs;
    failed.bound_truncation = failed.bound_ldpc = failed.bound_syndrome = kNaN;
    failed.strategy = cfg.strategy;
    failed.noise_descriptor = cfg.noise;
    failed.mode = cfg.mode;
    failed.epsilon = cfg.epsilon;
    failed.r = cfg.r;
    failed.n = cfg.n;
    failed.seed = cfg.seed;
    os << csv_row(failed) << '\n';
  }
  return os.str();
}

}  // namespace recog
