#include "seqelim/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace seqelim {

namespace {

// Strict "ranks higher" order: larger mean first, then smaller index.
struct RanksHigher {
  const ArmSampleAccumulator* stats;
  bool operator()(ArmIndex a, ArmIndex b) const {
    const double ma = stats->mean(a);
    const double mb = stats->mean(b);
    if (ma != mb) return ma > mb;
    return a < b;
  }
};

void check_source(const RewardSource& rewards, std::size_t num_arms) {
  if (rewards.num_arms() != num_arms) {
    throw std::invalid_argument("schedule and environment disagree on K");
  }
}

std::vector<ArmIndex> all_arms(std::size_t k) {
  std::vector<ArmIndex> v(k);
  std::iota(v.begin(), v.end(), ArmIndex{0});
  return v;
}

void pull(RewardSource& rewards, ArmSampleAccumulator& stats, RunRecord& rec, ArmIndex arm,
          std::uint64_t times) {
  for (std::uint64_t t = 0; t < times; ++t) stats.add(arm, rewards.draw(arm));
  rec.pull_counts[arm] += times;
  rec.total_pulls += times;
  rec.observations += times;
}

RunRecord start_record(const char* name, std::string params, std::uint64_t budget,
                       std::size_t num_arms) {
  RunRecord rec;
  rec.algorithm = name;
  rec.params = std::move(params);
  rec.budget = budget;
  rec.pull_counts.assign(num_arms, 0);
  return rec;
}

std::vector<ArmIndex> remove_sorted(const std::vector<ArmIndex>& from,
                                    const std::vector<ArmIndex>& drop) {
  std::vector<ArmIndex> out;
  out.reserve(from.size());
  std::set_difference(from.begin(), from.end(), drop.begin(), drop.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace

bool same_outcome(const RunRecord& a, const RunRecord& b) {
  return a.recommended == b.recommended && a.rounds == b.rounds && a.budget == b.budget &&
         a.total_pulls == b.total_pulls && a.observations == b.observations &&
         a.pull_counts == b.pull_counts && a.seed == b.seed;
}

std::vector<ArmIndex> worst_arms(std::span<const ArmIndex> alive,
                                 const ArmSampleAccumulator& stats, std::size_t count) {
  if (count > alive.size()) throw std::invalid_argument("cannot drop more arms than alive");
  std::vector<ArmIndex> order(alive.begin(), alive.end());
  const RanksHigher higher{&stats};
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count),
                    order.end(), [&](ArmIndex a, ArmIndex b) { return higher(b, a); });
  order.resize(count);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<ArmIndex> best_arms(std::span<const ArmIndex> alive,
                                const ArmSampleAccumulator& stats, std::size_t count) {
  if (count > alive.size()) throw std::invalid_argument("cannot keep more arms than alive");
  std::vector<ArmIndex> order(alive.begin(), alive.end());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count),
                    order.end(), RanksHigher{&stats});
  order.resize(count);
  std::sort(order.begin(), order.end());
  return order;
}

ArmIndex empirical_best(std::span<const ArmIndex> alive, const ArmSampleAccumulator& stats) {
  if (alive.empty()) throw std::invalid_argument("no arms to choose from");
  return *std::min_element(alive.begin(), alive.end(), RanksHigher{&stats});
}

std::string format_param(const char* name, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%g", name, value);
  return buf;
}

RunRecord run_general_elimination(const EliminationSchedule& sched, RewardSource& rewards) {
  const std::size_t k = sched.num_arms();
  check_source(rewards, k);
  RunRecord rec = start_record("elimination", {}, sched.budget(), k);
  ArmSampleAccumulator stats(k, ArmSampleAccumulator::Mode::cumulative);

  std::vector<ArmIndex> alive = all_arms(k);
  for (std::size_t r = 0; r < sched.rounds(); ++r) {
    const std::uint64_t inc = sched.increment(r);
    for (ArmIndex arm : alive) pull(rewards, stats, rec, arm, inc);
    std::vector<ArmIndex> dropped = worst_arms(alive, stats, sched.spec.b[r]);
    std::vector<ArmIndex> next = remove_sorted(alive, dropped);
    rec.rounds.push_back({std::move(alive), inc, std::move(dropped)});
    alive = std::move(next);
  }
  rec.recommended = alive.front();
  return rec;
}

RunRecord run_general_elimination(const BanditEnv& env, const EliminationSchedule& sched,
                                  std::uint64_t seed) {
  StreamRewards rewards(env, seed);
  RunRecord rec = run_general_elimination(sched, rewards);
  rec.seed = seed;
  return rec;
}

RunRecord run_nseqel(std::uint64_t budget, double p, RewardSource& rewards) {
  const EliminationSchedule sched = nseqel_schedule(rewards.num_arms(), budget, p);
  RunRecord rec = run_general_elimination(sched, rewards);
  rec.algorithm = "nseqel";
  rec.params = format_param("p", p);
  return rec;
}

RunRecord run_nseqel(const BanditEnv& env, std::uint64_t budget, double p, std::uint64_t seed) {
  StreamRewards rewards(env, seed);
  RunRecord rec = run_nseqel(budget, p, rewards);
  rec.seed = seed;
  return rec;
}

RunRecord run_succ_rej(std::uint64_t budget, RewardSource& rewards) {
  RunRecord rec = run_nseqel(budget, 1.0, rewards);
  rec.algorithm = "succrej";
  rec.params.clear();
  return rec;
}

RunRecord run_succ_rej(const BanditEnv& env, std::uint64_t budget, std::uint64_t seed) {
  StreamRewards rewards(env, seed);
  RunRecord rec = run_succ_rej(budget, rewards);
  rec.seed = seed;
  return rec;
}

std::size_t halving_rounds(std::size_t num_arms) {
  std::size_t rounds = 0;
  for (std::size_t g = num_arms; g > 1; g = (g + 1) / 2) ++rounds;
  return rounds;
}

RunRecord run_seq_halve(std::uint64_t budget, RewardSource& rewards) {
  const std::size_t k = rewards.num_arms();
  if (k < 2) throw std::invalid_argument("sequential halving needs K >= 2");
  const std::size_t rounds = halving_rounds(k);
  if (budget / (k * rounds) == 0) {
    throw std::invalid_argument("budget too small for one pull per arm in the first halving round");
  }
  RunRecord rec = start_record("seqhalv", {}, budget, k);
  ArmSampleAccumulator stats(k, ArmSampleAccumulator::Mode::per_round_reset);

  std::vector<ArmIndex> alive = all_arms(k);
  for (std::size_t r = 0; r < rounds; ++r) {
    stats.start_round();
    const std::uint64_t inc = budget / (alive.size() * rounds);
    for (ArmIndex arm : alive) pull(rewards, stats, rec, arm, inc);
    std::vector<ArmIndex> kept = best_arms(alive, stats, (alive.size() + 1) / 2);
    std::vector<ArmIndex> dropped = remove_sorted(alive, kept);
    rec.rounds.push_back({std::move(alive), inc, std::move(dropped)});
    alive = std::move(kept);
  }
  rec.recommended = alive.front();
  return rec;
}

RunRecord run_seq_halve(const BanditEnv& env, std::uint64_t budget, std::uint64_t seed) {
  StreamRewards rewards(env, seed);
  RunRecord rec = run_seq_halve(budget, rewards);
  rec.seed = seed;
  return rec;
}

namespace {

// Tournament tree over arm indices; argmax prefers the smaller arm on ties.
class ArgmaxTree {
 public:
  explicit ArgmaxTree(std::size_t n) : leaves_(1) {
    while (leaves_ < n) leaves_ *= 2;
    value_.assign(leaves_, -std::numeric_limits<double>::infinity());
    winner_.assign(2 * leaves_, 0);
    for (std::size_t i = 0; i < leaves_; ++i) winner_[leaves_ + i] = i;
    for (std::size_t node = leaves_ - 1; node >= 1; --node) fix(node);
  }

  void set(std::size_t i, double v) {
    value_[i] = v;
    for (std::size_t node = (leaves_ + i) / 2; node >= 1; node /= 2) fix(node);
  }

  std::size_t argmax() const { return winner_[1]; }

 private:
  void fix(std::size_t node) {
    const std::size_t l = winner_[2 * node];
    const std::size_t r = winner_[2 * node + 1];
    winner_[node] = value_[r] > value_[l] ? r : l;
  }

  std::size_t leaves_;
  std::vector<double> value_;
  std::vector<std::size_t> winner_;
};

}  // namespace

RunRecord run_ucb_e(std::uint64_t budget, double a, RewardSource& rewards) {
  const std::size_t k = rewards.num_arms();
  if (budget < k) throw std::invalid_argument("UCB-E needs T >= K");
  if (!(a > 0.0)) throw std::invalid_argument("UCB-E parameter a must be positive");
  RunRecord rec = start_record("ucbe", format_param("a", a), budget, k);
  ArmSampleAccumulator stats(k, ArmSampleAccumulator::Mode::cumulative);

  ArgmaxTree index(k);
  auto refresh = [&](ArmIndex arm) {
    index.set(arm, stats.mean(arm) + std::sqrt(a / static_cast<double>(stats.count(arm))));
  };
  for (ArmIndex arm = 0; arm < k; ++arm) {
    pull(rewards, stats, rec, arm, 1);
    refresh(arm);
  }
  for (std::uint64_t t = k; t < budget; ++t) {
    const ArmIndex arm = index.argmax();
    pull(rewards, stats, rec, arm, 1);
    refresh(arm);
  }
  const std::vector<ArmIndex> arms = all_arms(k);
  rec.recommended = empirical_best(arms, stats);
  return rec;
}

RunRecord run_ucb_e(const BanditEnv& env, std::uint64_t budget, double a, std::uint64_t seed) {
  StreamRewards rewards(env, seed);
  RunRecord rec = run_ucb_e(budget, a, rewards);
  rec.seed = seed;
  return rec;
}

}  // namespace seqelim
