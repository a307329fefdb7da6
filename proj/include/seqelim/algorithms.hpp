#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqelim/env.hpp"
#include "seqelim/schedule.hpp"

namespace seqelim {

struct RoundRecord {
  std::vector<ArmIndex> alive;       // sorted ascending
  std::uint64_t pulls_per_arm = 0;   // fresh pulls given to every alive arm (or block)
  std::vector<ArmIndex> eliminated;  // sorted ascending

  bool operator==(const RoundRecord&) const = default;
};

/// Trace of one algorithm execution.
struct RunRecord {
  std::string algorithm;
  std::string params;
  ArmIndex recommended = 0;
  std::vector<RoundRecord> rounds;
  std::uint64_t budget = 0;
  std::uint64_t total_pulls = 0;
  /// Reward samples revealed. Equals total_pulls unless pulls carry side
  /// observations.
  std::uint64_t observations = 0;
  std::vector<std::uint64_t> pull_counts;  // samples observed per arm
  std::optional<std::uint64_t> seed;

  bool operator==(const RunRecord&) const = default;
};

/// True when two records took the same decisions and spent the same pulls,
/// ignoring the algorithm label and parameters.
bool same_outcome(const RunRecord& a, const RunRecord& b);

// Ranking rule shared by every algorithm (and the exact oracle): arms are
// ordered by empirical mean, higher is better; an arm with no samples has mean
// -infinity; among equal means the smaller index ranks higher.

/// The `count` lowest-ranked arms among `alive`, returned sorted ascending.
std::vector<ArmIndex> worst_arms(std::span<const ArmIndex> alive,
                                 const ArmSampleAccumulator& stats, std::size_t count);

/// The `count` highest-ranked arms among `alive`, returned sorted ascending.
std::vector<ArmIndex> best_arms(std::span<const ArmIndex> alive,
                                const ArmSampleAccumulator& stats, std::size_t count);

/// Highest-ranked arm among `alive`.
ArmIndex empirical_best(std::span<const ArmIndex> alive, const ArmSampleAccumulator& stats);

/// General sequential elimination. Each round samples every alive arm up to
/// the round's cumulative target (arm-major, ascending index), then discards
/// the b_r arms with the lowest cumulative means.
RunRecord run_general_elimination(const EliminationSchedule& sched, RewardSource& rewards);
RunRecord run_general_elimination(const BanditEnv& env, const EliminationSchedule& sched,
                                  std::uint64_t seed);

/// Nonlinear sequential elimination: z_r = (K - r + 1)^p, one arm per round.
RunRecord run_nseqel(std::uint64_t budget, double p, RewardSource& rewards);
RunRecord run_nseqel(const BanditEnv& env, std::uint64_t budget, double p, std::uint64_t seed);

/// Successive Rejects, i.e. run_nseqel with p = 1.
RunRecord run_succ_rej(std::uint64_t budget, RewardSource& rewards);
RunRecord run_succ_rej(const BanditEnv& env, std::uint64_t budget, std::uint64_t seed);

/// Sequential Halving. ceil(log2 K) rounds; round r samples each surviving arm
/// floor(T / (|S_r| ceil(log2 K))) fresh times and keeps the ceil(|S_r| / 2)
/// arms with the highest means over that round alone. Throws
/// std::invalid_argument when the first round would get zero pulls per arm.
RunRecord run_seq_halve(std::uint64_t budget, RewardSource& rewards);
RunRecord run_seq_halve(const BanditEnv& env, std::uint64_t budget, std::uint64_t seed);

/// UCB-E with exploration parameter a: one pull per arm, then repeatedly the
/// arm maximising mean + sqrt(a / count) until T pulls are spent. Recommends
/// the highest empirical mean. Ties go to the smaller index.
RunRecord run_ucb_e(std::uint64_t budget, double a, RewardSource& rewards);
RunRecord run_ucb_e(const BanditEnv& env, std::uint64_t budget, double a, std::uint64_t seed);

/// Number of Sequential Halving rounds, ceil(log2 K).
std::size_t halving_rounds(std::size_t num_arms);

std::string format_param(const char* name, double value);

}  // namespace seqelim
