#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqelim/algorithms.hpp"
#include "seqelim/env.hpp"

namespace seqelim {

// ---------------------------------------------------------------------------
// Benchmark environments. Every setup has mu_1 = 0.7 on arm 0.

enum class SetupId { setup1, setup2, setup3, setup4, setup5, setup6, geo7 };

std::string to_string(SetupId id);
/// Accepts "1".."6", "setup1".."setup6" and "geo7".
SetupId parse_setup(const std::string& text);

/// Group size m = ceil(ln(K / 2) + 1) used by setups 2 and 3.
std::size_t group_size(std::size_t num_arms);

/// Mean vector of a setup for any K (>= 2 for setups 1-6, exactly 7 for geo7):
///   setup1  mu_{2:K} = 0.6
///   setup2  mu_{2:m} = 0.7 - 2/K, mu_{m+1:K} = 0.4
///   setup3  mu_{2:m} = 0.7 - 2/K, mu_{m+1:2m} = 0.7 - 4/K, mu_{2m+1:K} = 0.4
///   setup4  gap_i = 0.6 (i - 1) / (K - 1)
///   setup5  gap_i = 0.01 (1 + 4/K)^(i - 2)
///   setup6  mu_2 = 0.7 - 1/(2K), mu_{3:K} = 0.2
///   geo7    gap_i = 0.6^(8 - i), K = 7
std::vector<double> setup_means(SetupId id, std::size_t num_arms);

/// Benchmark environment; K must be 40 or 120 for setups 1-6 and 7 for geo7.
BanditEnv make_setup(SetupId id, std::size_t num_arms);

/// ceil(H1), the benchmark budget.
std::uint64_t default_budget(const BanditEnv& env);

// ---------------------------------------------------------------------------
// Algorithm descriptors.

enum class AlgorithmKind { nseqel, succ_rej, seq_halv, ucb_e, block };

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::succ_rej;
  double param = 0.0;          // p for nseqel and block, c for ucb_e (a = c T / H1)
  std::size_t block_size = 0;  // block: contiguous blocks of this many arms

  std::string name() const;
  std::string params() const;
  /// name, or name:param(s) — the inverse of parse_algorithm.
  std::string label() const;

  bool operator==(const AlgorithmSpec&) const = default;
};

/// "nseqel:P", "succrej", "seqhalv", "ucbe:C" or "block:SIZE:P".
AlgorithmSpec parse_algorithm(const std::string& text);

/// N-Seq-El p in {0.75, 1.35, 1.7, 2}, Succ-Rej, Seq-Halv, UCB-E c in {1, 2, 4}.
std::vector<AlgorithmSpec> default_algorithms();

/// Executes one algorithm on one reward source. `h1` is used only to set the
/// UCB-E parameter.
RunRecord run_algorithm(const AlgorithmSpec& alg, std::uint64_t budget, double h1,
                        RewardSource& rewards);

// ---------------------------------------------------------------------------
// Monte-Carlo experiments.

struct ExperimentConfig {
  std::string setup = "custom";
  std::vector<double> means;
  std::uint64_t budget = 0;
  std::size_t runs = 4000;
  std::uint64_t root_seed = 0;
  std::size_t threads = 1;
  bool clopper_pearson = false;
  std::vector<AlgorithmSpec> algorithms;
};

struct AlgorithmStats {
  AlgorithmSpec algorithm;
  std::size_t completed = 0;      // runs that finished
  std::size_t errors = 0;         // runs that threw
  std::size_t misidentified = 0;
  double frequency = 0.0;         // misidentified / completed
  double ci_half = 0.0;           // 1.96 sqrt(f (1 - f) / completed)
  std::optional<double> cp_lower; // Clopper-Pearson 95%, when requested
  std::optional<double> cp_upper;
  std::string first_error;
};

struct ExperimentReport {
  std::string setup;
  std::size_t num_arms = 0;
  std::uint64_t budget = 0;
  std::size_t runs = 0;
  std::uint64_t root_seed = 0;
  std::vector<double> means;
  std::vector<AlgorithmStats> results;
};

/// Seed of run `run` under `root_seed`. Every algorithm of a run draws from the
/// same per-arm streams (common random numbers).
std::uint64_t run_seed(std::uint64_t root_seed, std::size_t run);

/// Runs every algorithm `runs` times. The report depends only on the config,
/// not on the thread count. Per-run algorithm failures are counted in
/// `errors`; they do not abort the batch.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Normal-approximation 95% half width.
double normal_ci_half(std::size_t successes, std::size_t trials);
/// Exact two-sided Clopper-Pearson interval.
std::pair<double, double> clopper_pearson(std::size_t successes, std::size_t trials,
                                          double confidence = 0.95);

enum class RatioStatus { ok, infinite, undefined };

struct RatioRow {
  std::string algorithm;  // label
  RatioStatus status = RatioStatus::ok;
  double ratio = 0.0;     // freq(baseline) / freq(algorithm)
  double ci_half = 0.0;   // delta method on log ratio, covariance ignored
};

/// Ratio of the baseline's misidentification frequency to every algorithm's.
/// Throws std::invalid_argument if `baseline_label` is not in the report.
std::vector<RatioRow> summarize_ratios(const ExperimentReport& report,
                                       const std::string& baseline_label);

// ---------------------------------------------------------------------------
// Exact misidentification probability for small Bernoulli instances.

struct ExactOracleResult {
  double misid_probability = 0.0;
  std::uint64_t enumeration_size = 0;
};

inline constexpr std::uint64_t kOracleLeafLimit = std::uint64_t{1} << 24;

/// Elimination algorithms (nseqel, succrej) and Sequential Halving are
/// enumerated over per-round binomial outcomes, merging paths with equal
/// sufficient statistics; UCB-E enumerates every 0/1 outcome sequence of its T
/// pulls. Decisions are made by the production algorithm code. Throws
/// std::length_error when the enumeration would exceed `leaf_limit` leaves and
/// std::invalid_argument for unsupported algorithms or non-Bernoulli envs.
ExactOracleResult exact_misid_probability(const BanditEnv& env, const AlgorithmSpec& alg,
                                          std::uint64_t budget,
                                          std::uint64_t leaf_limit = kOracleLeafLimit);

/// Same, for an arbitrary general-elimination schedule.
ExactOracleResult exact_misid_probability(const BanditEnv& env, const EliminationSchedule& sched,
                                          std::uint64_t leaf_limit = kOracleLeafLimit);

}  // namespace seqelim
