#include "seqelim/env.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace seqelim {

BanditEnv::BanditEnv(std::vector<double> means, RewardKind kind)
    : means_(std::move(means)), kind_(kind) {
  if (means_.size() < 2) {
    throw std::invalid_argument("bandit needs at least two arms, got " +
                                std::to_string(means_.size()));
  }
  for (std::size_t i = 0; i < means_.size(); ++i) {
    const double m = means_[i];
    if (!(m >= 0.0 && m <= 1.0)) {
      throw std::invalid_argument("mean of arm " + std::to_string(i) +
                                  " is outside [0, 1]");
    }
  }
  const auto top = std::max_element(means_.begin(), means_.end());
  if (std::count(means_.begin(), means_.end(), *top) != 1) {
    throw std::invalid_argument("no unique best arm");
  }
  best_ = static_cast<ArmIndex>(top - means_.begin());
}

BanditEnv make_env(std::vector<double> means, RewardKind kind) {
  return BanditEnv(std::move(means), kind);
}

std::vector<double> GapVector::sorted() const {
  std::vector<double> out(gaps.size());
  for (std::size_t r = 0; r < gaps.size(); ++r) out[r] = at_rank(r);
  return out;
}

GapVector compute_gaps(const BanditEnv& env) {
  GapVector g;
  const double top = env.mean(env.best_arm());
  g.gaps.reserve(env.num_arms());
  for (double m : env.means()) g.gaps.push_back(top - m);
  g.sorted_index.resize(env.num_arms());
  std::iota(g.sorted_index.begin(), g.sorted_index.end(), ArmIndex{0});
  std::stable_sort(g.sorted_index.begin(), g.sorted_index.end(),
                   [&](ArmIndex a, ArmIndex b) { return g.gaps[a] < g.gaps[b]; });
  return g;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
  return mix64(mix64(seed) ^ mix64(label ^ 0x5851F42D4C957F2DULL));
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), state_(derive_seed(seed, stream_id)) {}

RngStream::result_type RngStream::operator()() {
  const std::uint64_t out = mix64(state_);
  state_ += 0x9E3779B97F4A7C15ULL;
  return out;
}

double sample(const BanditEnv& env, ArmIndex arm, RngStream& rng) {
  if (arm >= env.num_arms()) {
    throw std::out_of_range("arm index " + std::to_string(arm) + " out of range");
  }
  switch (env.kind()) {
    case RewardKind::bernoulli:
      return rng.bernoulli(env.mean(arm)) ? 1.0 : 0.0;
  }
  throw std::logic_error("unknown reward kind");
}

StreamRewards::StreamRewards(const BanditEnv& env, std::uint64_t run_seed)
    : env_(&env), run_seed_(run_seed) {
  streams_.reserve(env.num_arms());
  for (std::size_t i = 0; i < env.num_arms(); ++i) streams_.emplace_back(run_seed, i);
}

double StreamRewards::draw(ArmIndex arm) { return sample(*env_, arm, streams_.at(arm)); }

ReplayRewards::ReplayRewards(std::vector<std::vector<double>> per_arm)
    : per_arm_(std::move(per_arm)), cursor_(per_arm_.size(), 0) {}

double ReplayRewards::draw(ArmIndex arm) {
  auto& seq = per_arm_.at(arm);
  auto& pos = cursor_[arm];
  if (pos >= seq.size()) {
    throw std::out_of_range("replay exhausted for arm " + std::to_string(arm));
  }
  return seq[pos++];
}

RecordingRewards::RecordingRewards(RewardSource& inner)
    : inner_(&inner), recorded_(inner.num_arms()) {}

double RecordingRewards::draw(ArmIndex arm) {
  const double x = inner_->draw(arm);
  recorded_.at(arm).push_back(x);
  return x;
}

ArmSampleAccumulator::ArmSampleAccumulator(std::size_t num_arms, Mode mode)
    : mode_(mode), counts_(num_arms, 0), sums_(num_arms, 0.0) {}

void ArmSampleAccumulator::add(ArmIndex arm, double reward) {
  ++counts_[arm];
  sums_[arm] += reward;
}

void ArmSampleAccumulator::start_round() {
  if (mode_ == Mode::per_round_reset) {
    std::fill(counts_.begin(), counts_.end(), 0);
    std::fill(sums_.begin(), sums_.end(), 0.0);
  }
}

double ArmSampleAccumulator::mean(ArmIndex arm) const {
  if (counts_[arm] == 0) return -std::numeric_limits<double>::infinity();
  return sums_[arm] / static_cast<double>(counts_[arm]);
}

void ArmSampleAccumulator::set(ArmIndex arm, std::uint64_t count, double sum) {
  counts_[arm] = count;
  sums_[arm] = sum;
}

}  // namespace seqelim
