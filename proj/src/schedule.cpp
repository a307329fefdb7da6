#include "seqelim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace seqelim {

std::uint64_t snapped_ceil(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("ceil of negative or non-finite value");
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) {
    return static_cast<std::uint64_t>(nearest);
  }
  return static_cast<std::uint64_t>(std::ceil(x));
}

std::uint64_t pull_target(std::uint64_t spendable, double normalizer, double z) {
  return snapped_ceil(static_cast<double>(spendable) / (normalizer * z));
}

EliminationSchedule build_schedule(ScheduleSpec spec) {
  const std::size_t rounds = spec.rounds();
  if (spec.num_arms < 2) throw std::invalid_argument("schedule needs K >= 2");
  if (rounds == 0) throw std::invalid_argument("schedule needs at least one round");
  if (spec.b.size() != rounds) {
    throw std::invalid_argument("z and b must have the same length");
  }
  const std::size_t eliminated = std::accumulate(spec.b.begin(), spec.b.end(), std::size_t{0});
  if (eliminated != spec.num_arms - 1) {
    throw std::invalid_argument("sum(b) = " + std::to_string(eliminated) +
                                " but K - 1 = " + std::to_string(spec.num_arms - 1));
  }
  for (std::size_t bi : spec.b) {
    if (bi == 0) throw std::invalid_argument("every round must eliminate at least one arm");
  }
  if (spec.budget < spec.num_arms) {
    throw std::invalid_argument("budget T must be at least K");
  }
  for (std::size_t r = 0; r < rounds; ++r) {
    if (!(spec.z[r] > 0.0) || !std::isfinite(spec.z[r])) {
      throw std::invalid_argument("z must be positive and finite");
    }
    if (r > 0 && spec.z[r] > spec.z[r - 1]) {
      throw std::invalid_argument("z must be nonincreasing");
    }
  }

  EliminationSchedule s;
  s.normalizer = 1.0 / spec.z[rounds - 1];
  for (std::size_t r = 0; r < rounds; ++r) {
    s.normalizer += static_cast<double>(spec.b[r]) / spec.z[r];
  }

  const std::uint64_t spendable = spec.budget - spec.num_arms;
  s.targets.resize(rounds);
  for (std::size_t r = 0; r < rounds; ++r) {
    s.targets[r] = pull_target(spendable, s.normalizer, spec.z[r]);
  }

  s.alive.resize(rounds + 1);
  s.alive[rounds] = 1;
  for (std::size_t r = rounds; r-- > 0;) s.alive[r] = s.alive[r + 1] + spec.b[r];

  s.spec = std::move(spec);
  verify_budget(s);
  return s;
}

EliminationSchedule nseqel_schedule(std::size_t num_arms, std::uint64_t budget, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw std::invalid_argument("exponent p must be positive");
  }
  if (num_arms < 2) throw std::invalid_argument("schedule needs K >= 2");
  ScheduleSpec spec;
  spec.num_arms = num_arms;
  spec.budget = budget;
  spec.z.reserve(num_arms - 1);
  for (std::size_t r = 1; r < num_arms; ++r) {
    spec.z.push_back(std::pow(static_cast<double>(num_arms - r + 1), p));
  }
  spec.b.assign(num_arms - 1, 1);
  return build_schedule(std::move(spec));
}

std::uint64_t verify_budget(const EliminationSchedule& sched) {
  const std::size_t rounds = sched.rounds();
  std::uint64_t direct = sched.targets[rounds - 1];
  for (std::size_t r = 0; r < rounds; ++r) direct += sched.spec.b[r] * sched.targets[r];

  std::uint64_t telescoped = 0;
  for (std::size_t r = 0; r < rounds; ++r) {
    if (r > 0 && sched.targets[r] < sched.targets[r - 1]) {
      throw BudgetViolation("pull targets decrease between rounds");
    }
    telescoped += sched.alive[r] * sched.increment(r);
  }

  if (direct != telescoped) {
    throw BudgetViolation("direct and telescoped budget totals differ");
  }
  if (direct > sched.budget()) {
    throw BudgetViolation("schedule spends " + std::to_string(direct) +
                          " pulls, budget is " + std::to_string(sched.budget()));
  }
  return direct;
}

}  // namespace seqelim
