#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace seqelim {

using ArmIndex = std::size_t;

/// Reward families. Rewards are always supported on [0, 1].
enum class RewardKind { bernoulli };

/// Stochastic bandit with a fixed mean vector. Arms are kept in the order the
/// caller supplied; the best arm is tracked by index, never by position.
class BanditEnv {
 public:
  BanditEnv(std::vector<double> means, RewardKind kind);

  std::size_t num_arms() const { return means_.size(); }
  std::span<const double> means() const { return means_; }
  double mean(ArmIndex arm) const { return means_.at(arm); }
  ArmIndex best_arm() const { return best_; }
  RewardKind kind() const { return kind_; }

 private:
  std::vector<double> means_;
  RewardKind kind_;
  ArmIndex best_ = 0;
};

/// Validates and builds an environment. Throws std::invalid_argument for
/// K < 2, means outside [0, 1], or a tied maximum ("no unique best arm").
BanditEnv make_env(std::vector<double> means, RewardKind kind = RewardKind::bernoulli);

/// Gaps to the best arm, indexed by original arm, plus the rank permutation
/// (rank 0 is the best arm, ranks sorted by ascending gap, ties by index).
struct GapVector {
  std::vector<double> gaps;
  std::vector<ArmIndex> sorted_index;

  std::size_t size() const { return gaps.size(); }
  /// Gap of the arm at 0-based rank `rank`.
  double at_rank(std::size_t rank) const { return gaps[sorted_index[rank]]; }
  std::vector<double> sorted() const;
};

GapVector compute_gaps(const BanditEnv& env);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed from `seed` and a label. Pure function of its inputs,
/// so streams can be re-derived in any order on any thread.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);

/// A reproducible random stream identified by (seed, stream_id).
///
/// Counter-based SplitMix64: the k-th output is mix64(start + k * golden) with
/// start = derive_seed(seed, stream_id). Streams need no warm-up and carry
/// 8 bytes of state, so one stream per arm per run is cheap. Uniforms use the
/// top 53 bits, so reward sequences are bit-exact on every platform.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
};

/// Draws one reward for `arm`, advancing `rng`.
double sample(const BanditEnv& env, ArmIndex arm, RngStream& rng);

/// Source of rewards consumed by the algorithms. Separating the source from the
/// algorithm lets tests replay recorded rewards and lets the exact oracle feed
/// enumerated outcomes through the production code path.
class RewardSource {
 public:
  virtual ~RewardSource() = default;
  virtual std::size_t num_arms() const = 0;
  virtual double draw(ArmIndex arm) = 0;
};

/// One RngStream per arm (stream_id = arm index) under a shared run seed. The
/// k-th reward of an arm is therefore the same no matter how pulls of
/// different arms are interleaved.
class StreamRewards final : public RewardSource {
 public:
  StreamRewards(const BanditEnv& env, std::uint64_t run_seed);

  std::size_t num_arms() const override { return env_->num_arms(); }
  double draw(ArmIndex arm) override;
  std::uint64_t run_seed() const { return run_seed_; }

 private:
  const BanditEnv* env_;
  std::uint64_t run_seed_;
  std::vector<RngStream> streams_;
};

/// Replays fixed per-arm reward sequences. Throws std::out_of_range when an
/// arm's sequence is exhausted.
class ReplayRewards final : public RewardSource {
 public:
  explicit ReplayRewards(std::vector<std::vector<double>> per_arm);

  std::size_t num_arms() const override { return per_arm_.size(); }
  double draw(ArmIndex arm) override;

 private:
  std::vector<std::vector<double>> per_arm_;
  std::vector<std::size_t> cursor_;
};

/// Wraps another source and records every reward it hands out, per arm.
class RecordingRewards final : public RewardSource {
 public:
  explicit RecordingRewards(RewardSource& inner);

  std::size_t num_arms() const override { return inner_->num_arms(); }
  double draw(ArmIndex arm) override;
  const std::vector<std::vector<double>>& recorded() const { return recorded_; }

 private:
  RewardSource* inner_;
  std::vector<std::vector<double>> recorded_;
};

/// Per-arm pull counts and reward sums.
class ArmSampleAccumulator {
 public:
  enum class Mode { cumulative, per_round_reset };

  ArmSampleAccumulator(std::size_t num_arms, Mode mode);

  void add(ArmIndex arm, double reward);
  /// Clears statistics in per_round_reset mode; no-op in cumulative mode.
  void start_round();

  std::uint64_t count(ArmIndex arm) const { return counts_[arm]; }
  double sum(ArmIndex arm) const { return sums_[arm]; }
  /// Empirical mean; -infinity for an arm with no samples.
  double mean(ArmIndex arm) const;
  Mode mode() const { return mode_; }
  std::size_t num_arms() const { return counts_.size(); }

  /// Overwrites the statistics of one arm (used by the exact oracle).
  void set(ArmIndex arm, std::uint64_t count, double sum);

 private:
  Mode mode_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> sums_;
};

}  // namespace seqelim
