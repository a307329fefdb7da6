#include "seqelim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "seqelim/complexity.hpp"
#include "seqelim/harness.hpp"
#include "seqelim/report.hpp"
#include "seqelim/sideobs.hpp"

namespace seqelim::cli {

namespace {

struct EnvOptions {
  std::string setup;
  std::size_t k = 0;
  std::vector<double> means;

  void attach(CLI::App& app) {
    app.add_option("--setup", setup, "benchmark setup: 1..6 or geo7");
    app.add_option("--k", k, "number of arms for --setup (40 or 120; geo7 implies 7)");
    app.add_option("--means", means, "explicit arm means, comma separated")->delimiter(',');
  }
};

struct Resolved {
  std::string label;
  BanditEnv env;
};

// Wraps validation so library precondition failures surface as config errors.
template <typename F>
auto validated(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::size_t default_k(SetupId id, std::size_t k) {
  if (id == SetupId::geo7) return k == 0 ? 7 : k;
  if (k == 0) throw ConfigError("--k is required for setup " + to_string(id));
  return k;
}

Resolved resolve_env(const EnvOptions& opt) {
  return validated([&] {
    const bool has_setup = !opt.setup.empty();
    const bool has_means = !opt.means.empty();
    if (has_setup == has_means) throw ConfigError("give exactly one of --setup or --means");
    if (has_means) return Resolved{"custom", make_env(opt.means)};
    const SetupId id = parse_setup(opt.setup);
    return Resolved{to_string(id), make_setup(id, default_k(id, opt.k))};
  });
}

std::vector<AlgorithmSpec> resolve_algorithms(const std::vector<std::string>& names) {
  return validated([&] {
    if (names.empty()) return default_algorithms();
    std::vector<AlgorithmSpec> algs;
    for (const auto& n : names) algs.push_back(parse_algorithm(n));
    return algs;
  });
}

struct OutputOptions {
  std::string path;
  std::string format;

  void attach(CLI::App& app) {
    app.add_option("--out", path, "machine-readable output file ('-' for stdout)");
    app.add_option("--format", format, "json or csv (default: from extension, else csv)")
        ->check(CLI::IsMember({"json", "csv"}));
  }

  std::string resolved_format() const {
    if (!format.empty()) return format;
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return "json";
    return "csv";
  }
};

void emit(const OutputOptions& opt, const std::vector<ExperimentReport>& reports, std::ostream& out) {
  if (opt.path.empty()) return;
  std::ostringstream buf;
  if (opt.resolved_format() == "json") {
    if (reports.size() == 1) {
      buf << to_json_string(reports.front()) << '\n';
    } else {
      buf << "[\n";
      for (std::size_t i = 0; i < reports.size(); ++i) {
        buf << to_json_string(reports[i]) << (i + 1 < reports.size() ? ",\n" : "\n");
      }
      buf << "]\n";
    }
  } else {
    for (std::size_t i = 0; i < reports.size(); ++i) write_csv(reports[i], buf, i == 0);
  }
  if (opt.path == "-") {
    out << buf.str();
    return;
  }
  std::ofstream file(opt.path);
  if (!file) throw std::runtime_error("cannot open '" + opt.path + "' for writing");
  file << buf.str();
  if (!file) throw std::runtime_error("failed writing '" + opt.path + "'");
}

struct ExperimentOptions {
  std::vector<std::string> algorithms;
  std::optional<std::uint64_t> budget;
  std::size_t runs = 4000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool clopper_pearson = false;
  std::string baseline = "seqhalv";

  void attach(CLI::App& app) {
    app.add_option("--alg", algorithms,
                   "algorithms: nseqel:P, succrej, seqhalv, ucbe:C, block:SIZE:P "
                   "(default: the nine benchmark configurations)")
        ->delimiter(',');
    app.add_option("--T", budget, "budget (default ceil(H1))");
    app.add_option("--runs", runs, "Monte-Carlo runs")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "root seed")->envname("SEQELIM_SEED");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--clopper-pearson", clopper_pearson, "also compute exact 95% intervals");
    app.add_option("--baseline", baseline, "algorithm label used for the ratio table");
  }

  ExperimentConfig config(const Resolved& env, std::vector<AlgorithmSpec> algs) const {
    ExperimentConfig cfg;
    cfg.setup = env.label;
    cfg.means.assign(env.env.means().begin(), env.env.means().end());
    cfg.budget = budget ? *budget : default_budget(env.env);
    if (cfg.budget < env.env.num_arms()) throw ConfigError("budget T must be at least K");
    cfg.runs = runs;
    cfg.root_seed = seed;
    cfg.threads = threads;
    cfg.clopper_pearson = clopper_pearson;
    cfg.algorithms = std::move(algs);
    return cfg;
  }
};

void print_report(const ExperimentReport& rep, const std::string& baseline, std::ostream& out) {
  write_table(rep, out);
  const bool has_baseline =
      std::any_of(rep.results.begin(), rep.results.end(),
                  [&](const AlgorithmStats& s) { return s.algorithm.label() == baseline; });
  if (has_baseline && rep.results.size() > 1) {
    write_ratio_table(summarize_ratios(rep, baseline), baseline, out);
  }
  out << '\n';
}

void print_bounds(const Resolved& r, std::uint64_t budget, const std::vector<double>& ps,
                  std::ostream& out) {
  const GapVector gaps = compute_gaps(r.env);
  const ComplexityReport rep = complexity_report(gaps, ps);
  const std::size_t k = r.env.num_arms();
  const auto t = static_cast<double>(budget);
  char line[256];
  std::snprintf(line, sizeof line, "%s  K=%zu  T=%llu\n", r.label.c_str(), k,
                static_cast<unsigned long long>(budget));
  out << line;
  std::snprintf(line, sizeof line, "  H1 = %.6g\n  H2 = %.6g\n  logbar K = %.6g\n", rep.h1, rep.h2,
                rep.logbar_k);
  out << line;
  for (double p : ps) {
    std::snprintf(line, sizeof line, "  p = %-5g H(p) = %-12.6g C_p = %.6g\n", p, rep.h_p.at(p),
                  rep.c_p.at(p));
    out << line;
  }
  std::snprintf(line, sizeof line, "  %-14s %14s %14s %14s\n", "algorithm", "alpha", "beta",
                "beta e^-T/a");
  out << line;
  auto row = [&](const std::string& name, const BoundSpec& b) {
    std::snprintf(line, sizeof line, "  %-14s %14.6g %14.6g %14.6g\n", name.c_str(), b.alpha,
                  b.beta, b(t));
    out << line;
  };
  row("succrej", reference_bound(BoundAlgorithm::succ_rej, gaps));
  row("seqhalv", reference_bound(BoundAlgorithm::seq_halv, gaps));
  for (double p : ps) {
    row(AlgorithmSpec{AlgorithmKind::nseqel, p}.label(), reference_bound(BoundAlgorithm::nseqel, gaps, p));
  }
  out << "  (K-1) exp(-2 (T-K) / (C_p H(p))):\n";
  for (double p : ps) {
    std::snprintf(line, sizeof line, "    p = %-5g %.6g\n", p, nseqel_bound(gaps, p)(t));
    out << line;
  }
}

int cmd_run_like(const EnvOptions& env_opt, const ExperimentOptions& exp_opt,
                 const OutputOptions& out_opt, std::ostream& out) {
  const Resolved env = resolve_env(env_opt);
  const ExperimentConfig cfg =
      validated([&] { return exp_opt.config(env, resolve_algorithms(exp_opt.algorithms)); });
  const ExperimentReport rep = run_experiment(cfg);
  print_report(rep, exp_opt.baseline, out);
  emit(out_opt, {rep}, out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed-budget best-arm identification by sequential elimination", "seqelim"};
  app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");
  app.require_subcommand(1);

  // run
  EnvOptions run_env;
  ExperimentOptions run_exp;
  OutputOptions run_out;
  CLI::App* run_cmd = app.add_subcommand("run", "Monte-Carlo experiment on one environment");
  run_env.attach(*run_cmd);
  run_exp.attach(*run_cmd);
  run_out.attach(*run_cmd);

  // bench
  std::vector<std::string> bench_setups;
  std::vector<std::size_t> bench_ks;
  ExperimentOptions bench_exp;
  OutputOptions bench_out;
  CLI::App* bench_cmd = app.add_subcommand("bench", "benchmark setups x algorithms");
  bench_cmd->add_option("--setup", bench_setups, "setups: 1..6, geo7 or all")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--k", bench_ks, "arm counts for setups 1-6 (default 40,120)")
      ->delimiter(',');
  bench_exp.attach(*bench_cmd);
  bench_out.attach(*bench_cmd);

  // bound
  EnvOptions bound_env;
  std::optional<std::uint64_t> bound_budget;
  std::vector<double> bound_ps{0.75, 1.35, 1.7, 2.0};
  CLI::App* bound_cmd = app.add_subcommand("bound", "complexity measures and error bounds");
  bound_env.attach(*bound_cmd);
  bound_cmd->add_option("--T", bound_budget, "budget (default ceil(H1))");
  bound_cmd->add_option("--p", bound_ps, "exponents")->delimiter(',');

  // advise-p
  std::size_t advise_k = 0;
  std::optional<double> advise_f;
  std::optional<double> advise_gamma;
  CLI::App* advise_cmd = app.add_subcommand("advise-p", "suggested exponent interval");
  advise_cmd->add_option("--k", advise_k, "number of arms")->required();
  auto* f_opt = advise_cmd->add_option("--fk", advise_f, "number of competitive arms");
  auto* g_opt = advise_cmd->add_option("--gamma", advise_gamma, "use f_K = K^gamma");
  f_opt->excludes(g_opt);

  // block
  EnvOptions block_env;
  std::string block_shape;
  double block_p = 1.0;
  ExperimentOptions block_exp;
  OutputOptions block_out;
  CLI::App* block_cmd = app.add_subcommand("block", "Sequential Block Elimination experiment");
  block_env.attach(*block_cmd);
  block_cmd->add_option("--blocks", block_shape, "partition, e.g. 10x4 or 3,2,2")->required();
  block_cmd->add_option("--p", block_p, "schedule exponent")->check(CLI::PositiveNumber);
  block_cmd->add_option("--T", block_exp.budget, "budget (default ceil(H1))");
  block_cmd->add_option("--runs", block_exp.runs, "Monte-Carlo runs")->check(CLI::PositiveNumber);
  block_cmd->add_option("--seed", block_exp.seed, "root seed")->envname("SEQELIM_SEED");
  block_cmd->add_option("--threads", block_exp.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  block_out.attach(*block_cmd);

  // oracle
  EnvOptions oracle_env;
  std::string oracle_alg;
  std::optional<std::uint64_t> oracle_budget;
  std::uint64_t oracle_limit = kOracleLeafLimit;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "exact misidentification probability");
  oracle_env.attach(*oracle_cmd);
  oracle_cmd->add_option("--alg", oracle_alg, "algorithm (nseqel:P, succrej, seqhalv, ucbe:C)")
      ->required();
  oracle_cmd->add_option("--T", oracle_budget, "budget (default ceil(H1))");
  oracle_cmd->add_option("--limit", oracle_limit, "maximum enumeration leaves");

  // summary
  std::string summary_in;
  std::string summary_baseline = "seqhalv";
  CLI::App* summary_cmd = app.add_subcommand("summary", "print a saved JSON report");
  summary_cmd->add_option("--in", summary_in, "report file")->required()->check(CLI::ExistingFile);
  summary_cmd->add_option("--baseline", summary_baseline, "algorithm label for ratios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run_like(run_env, run_exp, run_out, out);

    if (*bench_cmd) {
      struct Job {
        SetupId id;
        std::size_t k;
      };
      const std::vector<Job> jobs = validated([&] {
        std::vector<std::string> names = bench_setups;
        if (names.size() == 1 && names.front() == "all") {
          names = {"1", "2", "3", "4", "5", "6"};
        }
        const std::vector<std::size_t> ks =
            bench_ks.empty() ? std::vector<std::size_t>{40, 120} : bench_ks;
        std::vector<Job> out_jobs;
        for (const auto& n : names) {
          const SetupId id = parse_setup(n);
          if (id == SetupId::geo7) {
            out_jobs.push_back({id, 7});
            continue;
          }
          for (std::size_t k : ks) {
            make_setup(id, k);
            out_jobs.push_back({id, k});
          }
        }
        return out_jobs;
      });
      const std::vector<AlgorithmSpec> algs = resolve_algorithms(bench_exp.algorithms);
      std::vector<ExperimentReport> reports;
      for (const Job& job : jobs) {
        const Resolved env{to_string(job.id), make_setup(job.id, job.k)};
        const ExperimentConfig cfg = validated([&] { return bench_exp.config(env, algs); });
        reports.push_back(run_experiment(cfg));
        print_report(reports.back(), bench_exp.baseline, out);
      }
      emit(bench_out, reports, out);
      return kExitOk;
    }

    if (*bound_cmd) {
      const Resolved env = resolve_env(bound_env);
      const std::uint64_t budget = bound_budget ? *bound_budget : default_budget(env.env);
      validated([&] {
        for (double p : bound_ps) {
          if (!(p > 0.0)) throw ConfigError("exponents must be positive");
        }
        return 0;
      });
      print_bounds(env, budget, bound_ps, out);
      return kExitOk;
    }

    if (*advise_cmd) {
      const PAdvice adv = validated([&] {
        if (!advise_f && !advise_gamma) throw ConfigError("give --fk or --gamma");
        const double f =
            advise_f ? *advise_f : std::pow(static_cast<double>(advise_k), *advise_gamma);
        return advise_p(advise_k, f);
      });
      char line[256];
      std::snprintf(line, sizeof line,
                    "row: %s\nrow interval: (%.4f, %.4f%c\nformula interval (clamped to "
                    "[0,2]): (%.2f, %.2f)\nsuggested p: %.4f\n",
                    to_string(adv.row).c_str(), adv.row_interval.lower, adv.row_interval.upper,
                    adv.row_interval.upper_closed ? ']' : ')', adv.formula_interval.lower,
                    adv.formula_interval.upper, adv.suggest());
      out << line;
      return kExitOk;
    }

    if (*block_cmd) {
      const Resolved env = resolve_env(block_env);
      const BlockPartition part = validated([&] {
        return contiguous_partition(parse_block_shape(block_shape));
      });
      if (part.num_arms() != env.env.num_arms()) {
        throw ConfigError("partition covers " + std::to_string(part.num_arms()) +
                          " arms, environment has " + std::to_string(env.env.num_arms()));
      }
      if (part.num_blocks() > 1 &&
          std::any_of(part.blocks.begin(), part.blocks.end() - 1,
                      [&](const auto& b) { return b.size() != part.blocks.front().size(); })) {
        throw ConfigError("block experiments need equal-size blocks (the last may be smaller)");
      }
      AlgorithmSpec alg;
      alg.kind = AlgorithmKind::block;
      alg.block_size = part.blocks.front().size();
      alg.param = block_p;
      const ExperimentConfig cfg = validated([&] { return block_exp.config(env, {alg}); });
      const ExperimentReport rep = run_experiment(cfg);
      write_table(rep, out);
      if (part.num_blocks() >= 2) {
        const BlockSchedule sched = block_schedule_power(part.num_blocks(), cfg.budget, block_p);
        const BlockBound bound = block_bound(part, sched, compute_gaps(env.env), block_p);
        char line[256];
        std::snprintf(line, sizeof line,
                      "  M=%zu V=%zu C=%.6g H(M,p)=%.6g\n  bound V M exp(-2 (T-M) / (C H(M,p))) "
                      "= %.6g\n",
                      part.num_blocks(), part.max_block_size(), sched.normalizer, *bound.h_mp,
                      (*bound.power_form)(static_cast<double>(cfg.budget)));
        out << line;
      }
      emit(block_out, {rep}, out);
      return kExitOk;
    }

    if (*oracle_cmd) {
      const Resolved env = resolve_env(oracle_env);
      const AlgorithmSpec alg = validated([&] { return parse_algorithm(oracle_alg); });
      const std::uint64_t budget = oracle_budget ? *oracle_budget : default_budget(env.env);
      const ExactOracleResult res = exact_misid_probability(env.env, alg, budget, oracle_limit);
      char line[256];
      std::snprintf(line, sizeof line, "%s  %s  T=%llu\n  P(misidentification) = %.12g\n  leaves = %llu\n",
                    env.label.c_str(), alg.label().c_str(), static_cast<unsigned long long>(budget),
                    res.misid_probability, static_cast<unsigned long long>(res.enumeration_size));
      out << line;
      return kExitOk;
    }

    if (*summary_cmd) {
      std::ifstream in(summary_in);
      std::stringstream buf;
      buf << in.rdbuf();
      const auto reports = validated([&] { return reports_from_json(buf.str()); });
      for (const auto& rep : reports) print_report(rep, summary_baseline, out);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace seqelim::cli
