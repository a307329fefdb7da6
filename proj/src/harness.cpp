#include "seqelim/harness.hpp"

#include <algorithm>
#include <boost/math/distributions/beta.hpp>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <thread>

#include "seqelim/complexity.hpp"
#include "seqelim/sideobs.hpp"

namespace seqelim {

std::string to_string(SetupId id) {
  switch (id) {
    case SetupId::setup1: return "setup1";
    case SetupId::setup2: return "setup2";
    case SetupId::setup3: return "setup3";
    case SetupId::setup4: return "setup4";
    case SetupId::setup5: return "setup5";
    case SetupId::setup6: return "setup6";
    case SetupId::geo7: return "geo7";
  }
  return "unknown";
}

SetupId parse_setup(const std::string& text) {
  static const std::map<std::string, SetupId> names = {
      {"1", SetupId::setup1},      {"2", SetupId::setup2},      {"3", SetupId::setup3},
      {"4", SetupId::setup4},      {"5", SetupId::setup5},      {"6", SetupId::setup6},
      {"setup1", SetupId::setup1}, {"setup2", SetupId::setup2}, {"setup3", SetupId::setup3},
      {"setup4", SetupId::setup4}, {"setup5", SetupId::setup5}, {"setup6", SetupId::setup6},
      {"geo7", SetupId::geo7}};
  const auto it = names.find(text);
  if (it == names.end()) throw std::invalid_argument("unknown setup '" + text + "'");
  return it->second;
}

std::size_t group_size(std::size_t num_arms) {
  return static_cast<std::size_t>(
      std::ceil(std::log(static_cast<double>(num_arms) / 2.0) + 1.0));
}

std::vector<double> setup_means(SetupId id, std::size_t num_arms) {
  constexpr double top = 0.7;
  const std::size_t k = num_arms;
  const auto kd = static_cast<double>(k);
  if (id == SetupId::geo7) {
    if (k != 7) throw std::invalid_argument("geo7 has exactly 7 arms");
  } else if (k < 2) {
    throw std::invalid_argument("setup needs K >= 2");
  }

  // means[i - 1] holds mu_i.
  std::vector<double> means(k, top);
  switch (id) {
    case SetupId::setup1:
      for (std::size_t i = 2; i <= k; ++i) means[i - 1] = 0.6;
      break;
    case SetupId::setup2:
    case SetupId::setup3: {
      const std::size_t m = group_size(k);
      const std::size_t groups = id == SetupId::setup2 ? 1 : 2;
      if (groups * m > k) throw std::invalid_argument("K too small for this setup");
      for (std::size_t i = 2; i <= k; ++i) {
        if (i <= m) {
          means[i - 1] = top - 2.0 / kd;
        } else if (groups == 2 && i <= 2 * m) {
          means[i - 1] = top - 4.0 / kd;
        } else {
          means[i - 1] = 0.4;
        }
      }
      break;
    }
    case SetupId::setup4:
      for (std::size_t i = 2; i <= k; ++i) {
        means[i - 1] = top - 0.6 * static_cast<double>(i - 1) / (kd - 1.0);
      }
      break;
    case SetupId::setup5:
      for (std::size_t i = 2; i <= k; ++i) {
        means[i - 1] = top - 0.01 * std::pow(1.0 + 4.0 / kd, static_cast<double>(i - 2));
      }
      break;
    case SetupId::setup6:
      means[1] = top - 1.0 / (2.0 * kd);
      for (std::size_t i = 3; i <= k; ++i) means[i - 1] = 0.2;
      break;
    case SetupId::geo7:
      for (std::size_t i = 2; i <= k; ++i) {
        means[i - 1] = top - std::pow(0.6, static_cast<double>(8 - i));
      }
      break;
  }
  return means;
}

BanditEnv make_setup(SetupId id, std::size_t num_arms) {
  if (id == SetupId::geo7) {
    if (num_arms != 7) throw std::invalid_argument("geo7 requires K = 7");
  } else if (num_arms != 40 && num_arms != 120) {
    throw std::invalid_argument(to_string(id) + " is defined for K in {40, 120}");
  }
  return make_env(setup_means(id, num_arms));
}

std::uint64_t default_budget(const BanditEnv& env) { return snapped_ceil(h1(compute_gaps(env))); }

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double parse_real(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) {
    throw std::invalid_argument("bad " + what + " '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::string AlgorithmSpec::name() const {
  switch (kind) {
    case AlgorithmKind::nseqel: return "nseqel";
    case AlgorithmKind::succ_rej: return "succrej";
    case AlgorithmKind::seq_halv: return "seqhalv";
    case AlgorithmKind::ucb_e: return "ucbe";
    case AlgorithmKind::block: return "block";
  }
  return "unknown";
}

std::string AlgorithmSpec::params() const {
  switch (kind) {
    case AlgorithmKind::nseqel: return "p=" + fmt_g(param);
    case AlgorithmKind::ucb_e: return "c=" + fmt_g(param);
    case AlgorithmKind::block: return "size=" + std::to_string(block_size) + ";p=" + fmt_g(param);
    default: return "";
  }
}

std::string AlgorithmSpec::label() const {
  switch (kind) {
    case AlgorithmKind::nseqel:
    case AlgorithmKind::ucb_e: return name() + ":" + fmt_g(param);
    case AlgorithmKind::block: return name() + ":" + std::to_string(block_size) + ":" + fmt_g(param);
    default: return name();
  }
}

AlgorithmSpec parse_algorithm(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  const std::string& head = parts.front();
  AlgorithmSpec spec;
  auto expect = [&](std::size_t n) {
    if (parts.size() != n) throw std::invalid_argument("bad algorithm spec '" + text + "'");
  };
  if (head == "nseqel") {
    expect(2);
    spec.kind = AlgorithmKind::nseqel;
    spec.param = parse_real(parts[1], "exponent");
  } else if (head == "succrej") {
    expect(1);
    spec.kind = AlgorithmKind::succ_rej;
  } else if (head == "seqhalv") {
    expect(1);
    spec.kind = AlgorithmKind::seq_halv;
  } else if (head == "ucbe") {
    expect(2);
    spec.kind = AlgorithmKind::ucb_e;
    spec.param = parse_real(parts[1], "UCB-E scale");
  } else if (head == "block") {
    expect(3);
    spec.kind = AlgorithmKind::block;
    const double size = parse_real(parts[1], "block size");
    if (!(size >= 1.0) || size != std::floor(size)) {
      throw std::invalid_argument("block size must be a positive integer");
    }
    spec.block_size = static_cast<std::size_t>(size);
    spec.param = parse_real(parts[2], "exponent");
  } else {
    throw std::invalid_argument("unknown algorithm '" + head + "'");
  }
  if (spec.kind != AlgorithmKind::succ_rej && spec.kind != AlgorithmKind::seq_halv &&
      !(spec.param > 0.0)) {
    throw std::invalid_argument("algorithm parameter must be positive in '" + text + "'");
  }
  return spec;
}

std::vector<AlgorithmSpec> default_algorithms() {
  return {{AlgorithmKind::nseqel, 0.75}, {AlgorithmKind::nseqel, 1.35},
          {AlgorithmKind::nseqel, 1.7},  {AlgorithmKind::nseqel, 2.0},
          {AlgorithmKind::succ_rej},     {AlgorithmKind::seq_halv},
          {AlgorithmKind::ucb_e, 1.0},   {AlgorithmKind::ucb_e, 2.0},
          {AlgorithmKind::ucb_e, 4.0}};
}

RunRecord run_algorithm(const AlgorithmSpec& alg, std::uint64_t budget, double h1,
                        RewardSource& rewards) {
  switch (alg.kind) {
    case AlgorithmKind::nseqel: return run_nseqel(budget, alg.param, rewards);
    case AlgorithmKind::succ_rej: return run_succ_rej(budget, rewards);
    case AlgorithmKind::seq_halv: return run_seq_halve(budget, rewards);
    case AlgorithmKind::ucb_e:
      return run_ucb_e(budget, alg.param * static_cast<double>(budget) / h1, rewards);
    case AlgorithmKind::block: {
      if (alg.block_size == 0) throw std::invalid_argument("block size must be positive");
      const std::size_t k = rewards.num_arms();
      std::vector<std::size_t> sizes(k / alg.block_size, alg.block_size);
      if (k % alg.block_size != 0) sizes.push_back(k % alg.block_size);
      const BlockPartition part = contiguous_partition(sizes);
      const BlockSchedule sched = block_schedule_power(part.num_blocks(), budget, alg.param);
      RunRecord rec = run_block_elimination(part, sched, rewards);
      rec.params = alg.params();
      return rec;
    }
  }
  throw std::logic_error("unknown algorithm kind");
}

std::uint64_t run_seed(std::uint64_t root_seed, std::size_t run) {
  return derive_seed(root_seed, 0x52554E0000000000ULL + run);
}

double normal_ci_half(std::size_t successes, std::size_t trials) {
  if (trials == 0) return 0.0;
  const double f = static_cast<double>(successes) / static_cast<double>(trials);
  return 1.96 * std::sqrt(f * (1.0 - f) / static_cast<double>(trials));
}

std::pair<double, double> clopper_pearson(std::size_t successes, std::size_t trials,
                                          double confidence) {
  if (trials == 0) return {0.0, 1.0};
  if (successes > trials) throw std::invalid_argument("successes exceed trials");
  const double alpha = 1.0 - confidence;
  const auto k = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  double lo = 0.0;
  double hi = 1.0;
  if (successes > 0) {
    lo = boost::math::quantile(boost::math::beta_distribution<double>(k, n - k + 1.0), alpha / 2);
  }
  if (successes < trials) {
    hi = boost::math::quantile(boost::math::beta_distribution<double>(k + 1.0, n - k),
                               1.0 - alpha / 2);
  }
  return {lo, hi};
}

namespace {

struct Tally {
  std::size_t completed = 0;
  std::size_t errors = 0;
  std::size_t misidentified = 0;
  std::size_t first_error_run = static_cast<std::size_t>(-1);
  std::string first_error;
};

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.runs == 0) throw std::invalid_argument("need at least one run");
  if (config.algorithms.empty()) throw std::invalid_argument("no algorithms to run");
  const BanditEnv env = make_env(config.means);
  if (config.budget < env.num_arms()) throw std::invalid_argument("budget T must be at least K");
  const double h1_value = h1(compute_gaps(env));
  const std::size_t n_alg = config.algorithms.size();
  const std::size_t threads = std::clamp<std::size_t>(config.threads, 1, config.runs);

  std::vector<std::vector<Tally>> partial(threads, std::vector<Tally>(n_alg));
  auto worker = [&](std::size_t tid) {
    auto& tallies = partial[tid];
    for (std::size_t run = tid; run < config.runs; run += threads) {
      const std::uint64_t seed = run_seed(config.root_seed, run);
      for (std::size_t a = 0; a < n_alg; ++a) {
        Tally& t = tallies[a];
        try {
          StreamRewards rewards(env, seed);
          const RunRecord rec = run_algorithm(config.algorithms[a], config.budget, h1_value, rewards);
          ++t.completed;
          if (rec.recommended != env.best_arm()) ++t.misidentified;
        } catch (const std::exception& e) {
          ++t.errors;
          if (run < t.first_error_run) {
            t.first_error_run = run;
            t.first_error = e.what();
          }
        }
      }
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t tid = 0; tid < threads; ++tid) pool.emplace_back(worker, tid);
  }

  ExperimentReport rep;
  rep.setup = config.setup;
  rep.num_arms = env.num_arms();
  rep.budget = config.budget;
  rep.runs = config.runs;
  rep.root_seed = config.root_seed;
  rep.means = config.means;
  for (std::size_t a = 0; a < n_alg; ++a) {
    Tally total;
    for (const auto& p : partial) {
      const Tally& t = p[a];
      total.completed += t.completed;
      total.errors += t.errors;
      total.misidentified += t.misidentified;
      if (t.first_error_run < total.first_error_run) {
        total.first_error_run = t.first_error_run;
        total.first_error = t.first_error;
      }
    }
    AlgorithmStats s;
    s.algorithm = config.algorithms[a];
    s.completed = total.completed;
    s.errors = total.errors;
    s.misidentified = total.misidentified;
    s.first_error = total.first_error;
    if (s.completed > 0) {
      s.frequency = static_cast<double>(s.misidentified) / static_cast<double>(s.completed);
      s.ci_half = normal_ci_half(s.misidentified, s.completed);
      if (config.clopper_pearson) {
        const auto [lo, hi] = clopper_pearson(s.misidentified, s.completed);
        s.cp_lower = lo;
        s.cp_upper = hi;
      }
    }
    rep.results.push_back(std::move(s));
  }
  return rep;
}

std::vector<RatioRow> summarize_ratios(const ExperimentReport& report,
                                       const std::string& baseline_label) {
  const auto base = std::find_if(report.results.begin(), report.results.end(),
                                 [&](const AlgorithmStats& s) {
                                   return s.algorithm.label() == baseline_label;
                                 });
  if (base == report.results.end()) {
    throw std::invalid_argument("baseline '" + baseline_label + "' not in report");
  }
  auto log_var = [](const AlgorithmStats& s) {
    return (1.0 - s.frequency) / (static_cast<double>(s.completed) * s.frequency);
  };

  std::vector<RatioRow> rows;
  for (const AlgorithmStats& s : report.results) {
    RatioRow row;
    row.algorithm = s.algorithm.label();
    if (base->completed == 0 || base->frequency == 0.0 || s.completed == 0) {
      row.status = RatioStatus::undefined;
    } else if (s.frequency == 0.0) {
      row.status = RatioStatus::infinite;
    } else {
      row.ratio = base->frequency / s.frequency;
      row.ci_half = &s == &*base ? 0.0 : 1.96 * row.ratio * std::sqrt(log_var(*base) + log_var(s));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Exact oracle.

namespace {

void require_bernoulli(const BanditEnv& env) {
  if (env.kind() != RewardKind::bernoulli) {
    throw std::invalid_argument("exact oracle supports Bernoulli rewards only");
  }
}

std::vector<double> binomial_pmf(std::uint64_t n, double p) {
  std::vector<double> pmf(n + 1, 0.0);
  if (p <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf[n] = 1.0;
    return pmf;
  }
  // log-space binomial coefficients keep large n stable.
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double log_c = std::lgamma(static_cast<double>(n) + 1.0) -
                         std::lgamma(static_cast<double>(k) + 1.0) -
                         std::lgamma(static_cast<double>(n - k) + 1.0);
    pmf[k] = std::exp(log_c + static_cast<double>(k) * std::log(p) +
                      static_cast<double>(n - k) * std::log1p(-p));
  }
  return pmf;
}

class LeafCounter {
 public:
  explicit LeafCounter(std::uint64_t limit) : limit_(limit) {}
  void add(std::uint64_t per_arm, std::size_t arms) {
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < arms; ++i) {
      if (combos > limit_ / per_arm) throw_limit();
      combos *= per_arm;
    }
    if (combos > limit_ - total_) throw_limit();
    total_ += combos;
  }
  std::uint64_t total() const { return total_; }

 private:
  [[noreturn]] void throw_limit() const {
    throw std::length_error("exact enumeration exceeds the leaf limit");
  }
  std::uint64_t limit_;
  std::uint64_t total_ = 0;
};

// Alive arms have nonnegative running sums; eliminated arms hold -1.
using SumState = std::vector<std::int64_t>;

template <typename Visit>
void for_each_outcome(std::size_t arms, std::uint64_t inc, Visit&& visit) {
  std::vector<std::uint64_t> k(arms, 0);
  while (true) {
    visit(k);
    std::size_t i = 0;
    while (i < arms && k[i] == inc) k[i++] = 0;
    if (i == arms) return;
    ++k[i];
  }
}

ExactOracleResult enumerate_elimination(const BanditEnv& env, const EliminationSchedule& sched,
                                        std::uint64_t limit) {
  const std::size_t n_arms = env.num_arms();
  if (sched.num_arms() != n_arms) throw std::invalid_argument("schedule and env disagree on K");
  LeafCounter leaves(limit);
  std::map<SumState, double> states{{SumState(n_arms, 0), 1.0}};

  for (std::size_t r = 0; r < sched.rounds(); ++r) {
    const std::uint64_t inc = sched.increment(r);
    const std::uint64_t target = sched.targets[r];
    std::vector<std::vector<double>> pmf;
    for (ArmIndex a = 0; a < n_arms; ++a) pmf.push_back(binomial_pmf(inc, env.mean(a)));

    std::map<SumState, double> next;
    for (const auto& [state, prob] : states) {
      std::vector<ArmIndex> alive;
      for (ArmIndex a = 0; a < n_arms; ++a) {
        if (state[a] >= 0) alive.push_back(a);
      }
      leaves.add(inc + 1, alive.size());
      ArmSampleAccumulator stats(n_arms, ArmSampleAccumulator::Mode::cumulative);
      for_each_outcome(alive.size(), inc, [&](const std::vector<std::uint64_t>& k) {
        double w = prob;
        SumState out = state;
        for (std::size_t j = 0; j < alive.size(); ++j) {
          w *= pmf[alive[j]][k[j]];
          out[alive[j]] += static_cast<std::int64_t>(k[j]);
          stats.set(alive[j], target, static_cast<double>(out[alive[j]]));
        }
        if (w == 0.0) return;
        for (ArmIndex a : worst_arms(alive, stats, sched.spec.b[r])) out[a] = -1;
        next[out] += w;
      });
    }
    states = std::move(next);
  }

  ExactOracleResult res;
  res.enumeration_size = leaves.total();
  for (const auto& [state, prob] : states) {
    if (state[env.best_arm()] < 0) res.misid_probability += prob;
  }
  return res;
}

ExactOracleResult enumerate_halving(const BanditEnv& env, std::uint64_t budget,
                                    std::uint64_t limit) {
  const std::size_t n_arms = env.num_arms();
  const std::size_t rounds = halving_rounds(n_arms);
  if (budget / (n_arms * rounds) == 0) {
    throw std::invalid_argument("budget too small for one pull per arm in the first halving round");
  }
  LeafCounter leaves(limit);
  std::map<std::vector<ArmIndex>, double> states;
  {
    std::vector<ArmIndex> all(n_arms);
    for (ArmIndex a = 0; a < n_arms; ++a) all[a] = a;
    states[all] = 1.0;
  }
  for (std::size_t r = 0; r < rounds; ++r) {
    std::map<std::vector<ArmIndex>, double> next;
    for (const auto& [alive, prob] : states) {
      const std::uint64_t inc = budget / (alive.size() * rounds);
      leaves.add(inc + 1, alive.size());
      std::vector<std::vector<double>> pmf;
      for (ArmIndex a : alive) pmf.push_back(binomial_pmf(inc, env.mean(a)));
      ArmSampleAccumulator stats(n_arms, ArmSampleAccumulator::Mode::per_round_reset);
      for_each_outcome(alive.size(), inc, [&](const std::vector<std::uint64_t>& k) {
        double w = prob;
        for (std::size_t j = 0; j < alive.size(); ++j) {
          w *= pmf[j][k[j]];
          stats.set(alive[j], inc, static_cast<double>(k[j]));
        }
        if (w == 0.0) return;
        next[best_arms(alive, stats, (alive.size() + 1) / 2)] += w;
      });
    }
    states = std::move(next);
  }
  ExactOracleResult res;
  res.enumeration_size = leaves.total();
  for (const auto& [alive, prob] : states) {
    if (alive.front() != env.best_arm()) res.misid_probability += prob;
  }
  return res;
}

// Feeds the i-th pull the i-th bit of a fixed pattern and tracks the
// probability of that pattern under the environment.
class PatternRewards final : public RewardSource {
 public:
  PatternRewards(const BanditEnv& env, std::uint64_t pattern) : env_(&env), pattern_(pattern) {}
  std::size_t num_arms() const override { return env_->num_arms(); }
  double draw(ArmIndex arm) override {
    const bool one = (pattern_ >> position_++) & 1U;
    const double mu = env_->mean(arm);
    weight_ *= one ? mu : 1.0 - mu;
    return one ? 1.0 : 0.0;
  }
  double weight() const { return weight_; }

 private:
  const BanditEnv* env_;
  std::uint64_t pattern_;
  unsigned position_ = 0;
  double weight_ = 1.0;
};

ExactOracleResult enumerate_ucb_e(const BanditEnv& env, std::uint64_t budget, double a,
                                  std::uint64_t limit) {
  if (budget >= 63 || (std::uint64_t{1} << budget) > limit) {
    throw std::length_error("exact enumeration exceeds the leaf limit");
  }
  ExactOracleResult res;
  res.enumeration_size = std::uint64_t{1} << budget;
  for (std::uint64_t pattern = 0; pattern < res.enumeration_size; ++pattern) {
    PatternRewards rewards(env, pattern);
    const RunRecord rec = run_ucb_e(budget, a, rewards);
    if (rec.recommended != env.best_arm()) res.misid_probability += rewards.weight();
  }
  return res;
}

}  // namespace

ExactOracleResult exact_misid_probability(const BanditEnv& env, const EliminationSchedule& sched,
                                          std::uint64_t leaf_limit) {
  require_bernoulli(env);
  return enumerate_elimination(env, sched, leaf_limit);
}

ExactOracleResult exact_misid_probability(const BanditEnv& env, const AlgorithmSpec& alg,
                                          std::uint64_t budget, std::uint64_t leaf_limit) {
  require_bernoulli(env);
  switch (alg.kind) {
    case AlgorithmKind::nseqel:
      return enumerate_elimination(env, nseqel_schedule(env.num_arms(), budget, alg.param),
                                   leaf_limit);
    case AlgorithmKind::succ_rej:
      return enumerate_elimination(env, nseqel_schedule(env.num_arms(), budget, 1.0), leaf_limit);
    case AlgorithmKind::seq_halv: return enumerate_halving(env, budget, leaf_limit);
    case AlgorithmKind::ucb_e: {
      const double a = alg.param * static_cast<double>(budget) / h1(compute_gaps(env));
      return enumerate_ucb_e(env, budget, a, leaf_limit);
    }
    case AlgorithmKind::block: break;
  }
  throw std::invalid_argument("exact oracle does not support '" + alg.name() + "'");
}

}  // namespace seqelim
