#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqelim/algorithms.hpp"
#include "seqelim/complexity.hpp"
#include "seqelim/env.hpp"

namespace seqelim {

/// Partition of the arms into star-shaped blocks. Pulling a block's center
/// reveals one reward for every arm of the block.
struct BlockPartition {
  std::vector<std::vector<ArmIndex>> blocks;  // each sorted ascending
  std::vector<ArmIndex> centers;

  std::size_t num_blocks() const { return blocks.size(); }
  std::size_t num_arms() const;
  std::size_t max_block_size() const;
};

/// Validates that `blocks` partition {0..K-1} into nonempty sets and that each
/// center belongs to its block. Centers default to each block's smallest arm.
BlockPartition make_partition(std::vector<std::vector<ArmIndex>> blocks, std::size_t num_arms,
                              std::vector<ArmIndex> centers = {});

/// Consecutive blocks with the given sizes: {0..s0-1}, {s0..s0+s1-1}, ...
BlockPartition contiguous_partition(std::span<const std::size_t> sizes);

/// Parses "SxN" (N blocks of S arms) or a comma list of sizes, e.g. "3,2,2".
std::vector<std::size_t> parse_block_shape(const std::string& shape);

/// Block-level schedule: C = sum_r 1/z_r, n_r = ceil((T - M) / (C z_r)).
struct BlockSchedule {
  std::vector<double> z;
  double normalizer = 0.0;
  std::vector<std::uint64_t> targets;
  std::uint64_t budget = 0;

  std::size_t num_blocks() const { return z.size(); }
  std::uint64_t increment(std::size_t r) const {
    return targets[r] - (r == 0 ? 0 : targets[r - 1]);
  }
  /// Block pulls spent: sum_r n_r.
  std::uint64_t total_block_pulls() const;
};

/// Throws std::invalid_argument for empty or non-positive/increasing z or
/// T < M, and BudgetViolation if the result overspends.
BlockSchedule build_block_schedule(std::vector<double> z, std::uint64_t budget);

/// z_r = (M + 1 - r)^p for r < M and z_M = 2^p.
BlockSchedule block_schedule_power(std::size_t num_blocks, std::uint64_t budget, double p);

/// Sequential Block Elimination. Rounds 1..M-1 pull every surviving block up
/// to n_r, score each block by its best cumulative arm mean and drop the
/// lowest-scoring block (ties drop the block whose smallest arm is largest).
/// Round M tops up the last block to n_M and recommends its best arm.
RunRecord run_block_elimination(const BlockPartition& part, const BlockSchedule& sched,
                                RewardSource& rewards);
RunRecord run_block_elimination(const BanditEnv& env, const BlockPartition& part,
                                const BlockSchedule& sched, std::uint64_t seed);

struct BlockBound {
  ExponentialBound general;
  std::optional<ExponentialBound> power_form;  // set when an exponent is given
  std::optional<double> h_mp;
};

/// V M exp(-((T - M) / C) 2 min_r gap^2_{M+1-r} / z_r) with arm gaps ranked
/// globally and gap_1 := gap_2. Given `p` (power schedule), also the
/// closed form V M exp(-2 (T - M) / (C H(M, p))). Requires M >= 2.
BlockBound block_bound(const BlockPartition& part, const BlockSchedule& sched,
                          const GapVector& gaps, std::optional<double> p = {});

}  // namespace seqelim
