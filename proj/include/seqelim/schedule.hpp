#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace seqelim {

/// Input of the general sequential-elimination framework.
struct ScheduleSpec {
  std::vector<double> z;         // per-round budget weights, positive, nonincreasing
  std::vector<std::size_t> b;    // arms eliminated in each round, sum = K - 1
  std::uint64_t budget = 0;      // T
  std::size_t num_arms = 0;      // K

  std::size_t rounds() const { return z.size(); }
};

/// A validated schedule. `targets[r]` is the cumulative number of pulls every
/// arm alive in round r has received by the end of that round; `alive[r]` is
/// the number of arms at the start of round r (alive.size() == rounds + 1, the
/// last entry is 1).
struct EliminationSchedule {
  ScheduleSpec spec;
  double normalizer = 0.0;  // C = 1/z_R + sum_r b_r / z_r
  std::vector<std::uint64_t> targets;
  std::vector<std::size_t> alive;

  std::size_t rounds() const { return spec.rounds(); }
  std::size_t num_arms() const { return spec.num_arms; }
  std::uint64_t budget() const { return spec.budget; }
  /// Pulls per alive arm during round r (targets[r] - targets[r-1]).
  std::uint64_t increment(std::size_t r) const {
    return targets[r] - (r == 0 ? 0 : targets[r - 1]);
  }
};

/// Thrown when a built schedule would spend more than its budget. Reaching it
/// indicates a defect in the builder, not bad input.
struct BudgetViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// ceil(x), except that values within 1e-9 relative of an integer snap to it.
std::uint64_t snapped_ceil(double x);

/// ceil((T - K) / (C z)), snapping values within 1e-9 relative of an integer
/// to that integer so floating-point noise cannot add a spurious pull.
std::uint64_t pull_target(std::uint64_t spendable, double normalizer, double z);

/// Builds and budget-checks a schedule. Throws std::invalid_argument when
/// sum(b) != K - 1, T < K, K < 2, z and b differ in length, or z is not
/// strictly positive and nonincreasing.
///
/// T == K is accepted: every target is zero, nothing is sampled and the run
/// engine falls back to its tie rule, so the recommendation is arbitrary.
EliminationSchedule build_schedule(ScheduleSpec spec);

/// Power-law schedule: R = K - 1, b_r = 1, z_r = (K - r + 1)^p. With p = 1
/// this is the Successive Rejects schedule.
EliminationSchedule nseqel_schedule(std::size_t num_arms, std::uint64_t budget, double p);

/// Total pulls the schedule spends: n_R + sum_r b_r n_r. Cross-checks the
/// telescoped form g_1 n_1 + sum_r g_r (n_r - n_{r-1}) and throws
/// BudgetViolation if the two disagree or exceed T.
std::uint64_t verify_budget(const EliminationSchedule& sched);

}  // namespace seqelim
