#include "seqelim/sideobs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace seqelim {

std::size_t BlockPartition::num_arms() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.size();
  return n;
}

std::size_t BlockPartition::max_block_size() const {
  std::size_t v = 0;
  for (const auto& b : blocks) v = std::max(v, b.size());
  return v;
}

BlockPartition make_partition(std::vector<std::vector<ArmIndex>> blocks, std::size_t num_arms,
                              std::vector<ArmIndex> centers) {
  if (blocks.empty()) throw std::invalid_argument("partition needs at least one block");
  std::vector<bool> seen(num_arms, false);
  for (auto& block : blocks) {
    if (block.empty()) throw std::invalid_argument("empty block");
    std::sort(block.begin(), block.end());
    for (ArmIndex arm : block) {
      if (arm >= num_arms) throw std::invalid_argument("block arm out of range");
      if (seen[arm]) throw std::invalid_argument("arm appears in two blocks");
      seen[arm] = true;
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw std::invalid_argument("blocks do not cover every arm");
  }
  if (centers.empty()) {
    for (const auto& block : blocks) centers.push_back(block.front());
  }
  if (centers.size() != blocks.size()) throw std::invalid_argument("one center per block");
  for (std::size_t m = 0; m < blocks.size(); ++m) {
    if (!std::binary_search(blocks[m].begin(), blocks[m].end(), centers[m])) {
      throw std::invalid_argument("center outside its block");
    }
  }
  return {std::move(blocks), std::move(centers)};
}

BlockPartition contiguous_partition(std::span<const std::size_t> sizes) {
  std::vector<std::vector<ArmIndex>> blocks;
  ArmIndex next = 0;
  for (std::size_t s : sizes) {
    std::vector<ArmIndex> block(s);
    std::iota(block.begin(), block.end(), next);
    next += s;
    blocks.push_back(std::move(block));
  }
  return make_partition(std::move(blocks), next);
}

namespace {

std::size_t parse_size(std::string_view text) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
    throw std::invalid_argument("bad block size '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<std::size_t> parse_block_shape(const std::string& shape) {
  const std::string_view text(shape);
  if (const auto x = text.find('x'); x != std::string_view::npos) {
    const std::size_t size = parse_size(text.substr(0, x));
    const std::size_t count = parse_size(text.substr(x + 1));
    return std::vector<std::size_t>(count, size);
  }
  std::vector<std::size_t> sizes;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    sizes.push_back(parse_size(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return sizes;
}

std::uint64_t BlockSchedule::total_block_pulls() const {
  return std::accumulate(targets.begin(), targets.end(), std::uint64_t{0});
}

BlockSchedule build_block_schedule(std::vector<double> z, std::uint64_t budget) {
  if (z.empty()) throw std::invalid_argument("block schedule needs at least one block");
  for (std::size_t r = 0; r < z.size(); ++r) {
    if (!(z[r] > 0.0) || !std::isfinite(z[r])) throw std::invalid_argument("z must be positive");
    if (r > 0 && z[r] > z[r - 1]) throw std::invalid_argument("z must be nonincreasing");
  }
  if (budget < z.size()) throw std::invalid_argument("budget T must be at least M");

  BlockSchedule s;
  s.budget = budget;
  for (double zr : z) s.normalizer += 1.0 / zr;
  const std::uint64_t spendable = budget - z.size();
  for (double zr : z) s.targets.push_back(pull_target(spendable, s.normalizer, zr));
  s.z = std::move(z);
  if (s.total_block_pulls() > budget) {
    throw BudgetViolation("block schedule overspends its budget");
  }
  return s;
}

BlockSchedule block_schedule_power(std::size_t num_blocks, std::uint64_t budget, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("exponent p must be positive");
  if (num_blocks == 0) throw std::invalid_argument("need at least one block");
  std::vector<double> z;
  for (std::size_t r = 1; r < num_blocks; ++r) {
    z.push_back(std::pow(static_cast<double>(num_blocks + 1 - r), p));
  }
  z.push_back(std::pow(2.0, p));
  return build_block_schedule(std::move(z), budget);
}

namespace {

std::vector<ArmIndex> arms_of(const BlockPartition& part, const std::vector<std::size_t>& ids) {
  std::vector<ArmIndex> arms;
  for (std::size_t m : ids) arms.insert(arms.end(), part.blocks[m].begin(), part.blocks[m].end());
  std::sort(arms.begin(), arms.end());
  return arms;
}

}  // namespace

RunRecord run_block_elimination(const BlockPartition& part, const BlockSchedule& sched,
                                RewardSource& rewards) {
  const std::size_t k = rewards.num_arms();
  const std::size_t m_blocks = part.num_blocks();
  if (part.num_arms() != k) throw std::invalid_argument("partition does not match environment");
  if (sched.num_blocks() != m_blocks) {
    throw std::invalid_argument("schedule and partition disagree on M");
  }

  RunRecord rec;
  rec.algorithm = "block";
  rec.budget = sched.budget;
  rec.pull_counts.assign(k, 0);
  ArmSampleAccumulator stats(k, ArmSampleAccumulator::Mode::cumulative);

  std::vector<std::size_t> alive(m_blocks);
  std::iota(alive.begin(), alive.end(), std::size_t{0});

  auto pull_blocks = [&](std::uint64_t inc) {
    for (std::size_t m : alive) {
      const auto& block = part.blocks[m];
      for (std::uint64_t t = 0; t < inc; ++t) {
        for (ArmIndex arm : block) stats.add(arm, rewards.draw(arm));
      }
      for (ArmIndex arm : block) rec.pull_counts[arm] += inc;
      rec.total_pulls += inc;
      rec.observations += inc * block.size();
    }
  };

  for (std::size_t r = 0; r + 1 < m_blocks; ++r) {
    const std::uint64_t inc = sched.increment(r);
    pull_blocks(inc);

    std::size_t worst = alive.front();
    double worst_score = std::numeric_limits<double>::infinity();
    for (std::size_t m : alive) {
      const double score = stats.mean(empirical_best(part.blocks[m], stats));
      const bool tie_loses =
          score == worst_score && part.blocks[m].front() > part.blocks[worst].front();
      if (score < worst_score || tie_loses) {
        worst_score = score;
        worst = m;
      }
    }
    RoundRecord round{arms_of(part, alive), inc, part.blocks[worst]};
    alive.erase(std::find(alive.begin(), alive.end(), worst));
    rec.rounds.push_back(std::move(round));
  }

  const std::uint64_t inc = sched.increment(m_blocks - 1);
  pull_blocks(inc);
  rec.rounds.push_back({arms_of(part, alive), inc, {}});
  rec.recommended = empirical_best(part.blocks[alive.front()], stats);
  return rec;
}

RunRecord run_block_elimination(const BanditEnv& env, const BlockPartition& part,
                                const BlockSchedule& sched, std::uint64_t seed) {
  StreamRewards rewards(env, seed);
  RunRecord rec = run_block_elimination(part, sched, rewards);
  rec.seed = seed;
  return rec;
}

BlockBound block_bound(const BlockPartition& part, const BlockSchedule& sched,
                          const GapVector& gaps, std::optional<double> p) {
  const std::size_t m_blocks = part.num_blocks();
  if (m_blocks < 2) throw std::invalid_argument("block bound needs at least two blocks");
  if (sched.num_blocks() != m_blocks) {
    throw std::invalid_argument("schedule and partition disagree on M");
  }
  if (part.num_arms() != gaps.size()) {
    throw std::invalid_argument("partition does not match gaps");
  }
  const double second = gaps.at_rank(1);
  if (!(second > 0.0)) throw std::invalid_argument("tied best arms");

  // 1-based rank M + 1 - r for 1-based round r; rank 1 uses the rank-2 gap.
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t r = 1; r <= m_blocks; ++r) {
    const std::size_t rank = m_blocks + 1 - r;
    const double g = rank == 1 ? second : gaps.at_rank(rank - 1);
    worst = std::min(worst, g * g / sched.z[r - 1]);
  }
  const auto vm = static_cast<double>(part.max_block_size() * m_blocks);
  const auto offset = static_cast<double>(m_blocks);

  BlockBound out;
  out.general = {vm, 2.0 * worst / sched.normalizer, offset};
  if (p) {
    out.h_mp = h_p_top(gaps, m_blocks, *p);
    out.power_form = ExponentialBound{vm, 2.0 / (sched.normalizer * *out.h_mp), offset};
  }
  return out;
}

}  // namespace seqelim
