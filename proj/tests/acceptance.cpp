// Acceptance checks. One PASS/FAIL line per criterion; exit status is nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "seqelim/algorithms.hpp"
#include "seqelim/complexity.hpp"
#include "seqelim/harness.hpp"
#include "seqelim/schedule.hpp"
#include "seqelim/sideobs.hpp"

using namespace seqelim;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

ExperimentReport simulate(const std::vector<double>& means, std::uint64_t budget, std::size_t runs,
                          std::vector<std::string> labels, std::uint64_t seed = kSeed) {
  ExperimentConfig cfg;
  cfg.means = means;
  cfg.budget = budget;
  cfg.runs = runs;
  cfg.root_seed = seed;
  for (const auto& l : labels) cfg.algorithms.push_back(parse_algorithm(l));
  return run_experiment(cfg);
}

const AlgorithmStats& stats_of(const ExperimentReport& rep, const std::string& label) {
  for (const auto& s : rep.results)
    if (s.algorithm.label() == label) return s;
  throw std::logic_error("missing " + label);
}

double sigma(const AlgorithmStats& s) {
  return std::sqrt(s.frequency * (1 - s.frequency) / static_cast<double>(s.completed));
}

// 1 -------------------------------------------------------------------------
Outcome budget_invariant() {
  std::mt19937_64 g(kSeed);
  std::size_t specs = 0, runs = 0, violations = 0;
  for (int i = 0; i < 10000; ++i) {
    ScheduleSpec s;
    s.num_arms = std::uniform_int_distribution<std::size_t>(2, 60)(g);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(1, s.num_arms - 1)(g);
    s.b.assign(r, 1);
    for (std::size_t extra = s.num_arms - 1 - r; extra > 0; --extra)
      ++s.b[std::uniform_int_distribution<std::size_t>(0, r - 1)(g)];
    for (std::size_t j = 0; j < r; ++j) s.z.push_back(std::uniform_real_distribution<double>(0.01, 50)(g));
    std::sort(s.z.rbegin(), s.z.rend());
    s.budget = s.num_arms + std::uniform_int_distribution<std::uint64_t>(0, 3000)(g);
    const auto sched = build_schedule(s);
    ++specs;
    const auto env = make_env(oracle::random_means(g, s.num_arms));
    const RunRecord rec = run_general_elimination(env, sched, g());
    ++runs;
    if (rec.total_pulls > s.budget || verify_budget(sched) > s.budget) ++violations;
  }
  const std::vector<std::string> algs{"nseqel:0.75", "nseqel:1.7", "nseqel:2", "succrej",
                                      "seqhalv", "ucbe:2", "block:3:1.5"};
  for (int i = 0; i < 3000; ++i) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 60)(g);
    const auto env = make_env(oracle::random_means(g, k));
    const std::uint64_t t =
        k * halving_rounds(k) + std::uniform_int_distribution<std::uint64_t>(0, 3000)(g);
    const double h = h1(compute_gaps(env));
    for (const auto& label : algs) {
      StreamRewards src(env, g());
      const RunRecord rec = run_algorithm(parse_algorithm(label), t, h, src);
      ++runs;
      if (rec.total_pulls > t) ++violations;
    }
  }
  return {violations == 0, fmt("%zu specs, %zu runs, %zu violations", specs, runs, violations)};
}

// 2 -------------------------------------------------------------------------
Outcome closed_form() {
  double worst_c = 0.0;
  for (double p : {0.5, 0.75, 1.0, 1.35, 1.7, 2.0}) {
    for (std::size_t k = 2; k <= 1000; ++k) {
      const auto s = nseqel_schedule(k, 2 * k, p);
      worst_c = std::max(worst_c, std::abs(s.normalizer / oracle::c_p(k, p) - 1.0));
      worst_c = std::max(worst_c, std::abs(c_p(k, p) / oracle::c_p(k, p) - 1.0));
    }
  }
  std::mt19937_64 g(kSeed + 2);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 300)(g);
    std::vector<double> m(k, 0.9);
    for (std::size_t j = 1; j < k; ++j) m[j] = 0.9 - std::uniform_real_distribution<double>(1e-3, 0.9)(g);
    std::shuffle(m.begin(), m.end(), g);
    const auto gaps = compute_gaps(make_env(m));
    if (std::abs(h_p(gaps, 1.0) / h2(gaps) - 1.0) > 1e-12) ++mismatches;
  }
  return {worst_c <= 1e-12 && mismatches == 0,
          fmt("max rel err C vs C_p %.2e (tol 1e-12), h_p(.,1) != h2 on %zu/1000", worst_c,
              mismatches)};
}

// 3 -------------------------------------------------------------------------
Outcome succ_rej_equivalence() {
  std::mt19937_64 g(kSeed + 3);
  int identical = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 50)(g);
    const auto env = make_env(oracle::random_means(g, k));
    const std::uint64_t t = k + std::uniform_int_distribution<std::uint64_t>(0, 5000)(g);
    const std::uint64_t seed = g();
    RunRecord a = run_nseqel(env, t, 1.0, seed);
    const RunRecord b = run_succ_rej(env, t, seed);
    a.algorithm = b.algorithm;
    a.params = b.params;
    identical += a == b;
  }
  return {identical == 100, fmt("%d/100 identical records", identical)};
}

// 4 -------------------------------------------------------------------------
Outcome oracle_agreement() {
  const std::vector<double> mu{0.7, 0.6};
  const auto env = make_env(mu);
  double worst_exact = 0.0, worst_z = 0.0;
  std::string detail;
  for (std::uint64_t t : {10, 20, 40}) {
    for (const char* label : {"succrej", "seqhalv"}) {
      const std::string name = label;
      const std::size_t n = name == "seqhalv" ? t / 2 : (t - 1) / 2;
      const double want = oracle::two_arm_error(n, 0.7, 0.6);
      const double got = exact_misid_probability(env, parse_algorithm(label), t).misid_probability;
      worst_exact = std::max(worst_exact, std::abs(got - want));
      const auto rep = simulate(mu, t, 1000000, {label}, kSeed + t);
      const double f = rep.results[0].frequency;
      const double z = std::abs(f - got) / std::sqrt(got * (1 - got) / 1e6);
      worst_z = std::max(worst_z, z);
      if (name == "succrej") detail += fmt(" T=%llu P=%.6f MC=%.6f;", static_cast<unsigned long long>(t), got, f);
    }
  }
  return {worst_exact <= 1e-10 && worst_z <= 4.0,
          fmt("max |oracle-convolution| %.1e (tol 1e-10), max MC z %.2f (tol 4);", worst_exact,
              worst_z) +
              detail};
}

// 5 -------------------------------------------------------------------------
Outcome advice_cells() {
  struct Cell {
    double k, gamma, lo, hi;
  };
  const std::vector<Cell> cells{
      {40, 0.3, 0.5, 2}, {40, 0.5, 0.3, 1.7}, {40, 0.7, 0, 1.5},
      {120, 0.3, 0.53, 2}, {120, 0.5, 0.35, 1.65}, {120, 0.7, 0, 1.47},
      {5e2, 0.3, 0.58, 1.97}, {5e2, 0.5, 0.42, 1.58}, {5e2, 0.7, 0.03, 1.42},
      {5e4, 0.3, 0.69, 1.73}, {5e4, 0.5, 0.56, 1.44}, {5e4, 0.7, 0.27, 1.31},
      {5e6, 0.3, 0.75, 1.59}, {5e6, 0.5, 0.65, 1.35}, {5e6, 0.7, 0.41, 1.25},
      {5e8, 0.3, 0.79, 1.5}, {5e8, 0.5, 0.7, 1.3}, {5e8, 0.7, 0.5, 1.21}};
  int within = 0, rounded = 0;
  double worst = 0.0;
  for (const Cell& c : cells) {
    const auto adv = advise_p(static_cast<std::size_t>(c.k), std::pow(c.k, c.gamma));
    const double dl = std::abs(adv.formula_interval.lower - c.lo);
    const double du = std::abs(adv.formula_interval.upper - c.hi);
    worst = std::max({worst, dl, du});
    within += dl <= 0.01 + 1e-12 && du <= 0.01 + 1e-12;
    rounded += std::round(adv.formula_interval.lower * 100) == std::round(c.lo * 100) &&
               std::round(adv.formula_interval.upper * 100) == std::round(c.hi * 100);
  }
  return {within == 18,
          fmt("%d/18 cells within 0.01 (max deviation %.4f); %d/18 equal after rounding to 2 "
              "decimals",
              within, worst, rounded)};
}

// 6 -------------------------------------------------------------------------
Outcome bound_soundness() {
  int checked = 0, vacuous = 0, violated = 0;
  double min_bound = 1e300;
  for (SetupId id : {SetupId::setup1, SetupId::setup4, SetupId::setup6}) {
    const auto env = make_setup(id, 40);
    const auto gaps = compute_gaps(env);
    const std::uint64_t t = default_budget(env);
    const std::vector<double> ps{0.75, 1.0, 1.35, 1.7, 2.0};
    std::vector<std::string> labels;
    for (double p : ps) labels.push_back(AlgorithmSpec{AlgorithmKind::nseqel, p}.label());
    const auto means = std::vector<double>(env.means().begin(), env.means().end());
    const auto rep = simulate(means, t, 4000, labels);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const double bound = nseqel_bound(gaps, ps[i])(static_cast<double>(t));
      min_bound = std::min(min_bound, bound);
      if (bound >= 1.0) {
        ++vacuous;
        continue;
      }
      ++checked;
      const auto& s = rep.results[i];
      if (s.frequency > bound + 3 * sigma(s)) ++violated;
    }
    // Also at the budget where the p = 1 bound equals 1/2, so the check bites.
    const ExponentialBound b1 = nseqel_bound(gaps, 1.0);
    const auto t_half = static_cast<std::uint64_t>(std::ceil(
        b1.offset + std::log(2 * b1.prefactor) / b1.rate));
    const auto rep_half = simulate(means, t_half, 4000, {"succrej"});
    ++checked;
    const auto& s = rep_half.results[0];
    if (s.frequency > b1(static_cast<double>(t_half)) + 3 * sigma(s)) ++violated;
  }

  // Two blocks of two arms.
  const auto env = make_env({0.6, 0.5, 0.45, 0.4});
  const std::vector<std::size_t> sizes{2, 2};
  const auto part = contiguous_partition(sizes);
  const std::uint64_t t = 300;
  const auto bb = block_bound(part, block_schedule_power(2, t, 1.0), compute_gaps(env), 1.0);
  const double bound2 = bb.general(static_cast<double>(t));
  const auto rep = simulate({0.6, 0.5, 0.45, 0.4}, t, 4000, {"block:2:1"});
  const auto& s = rep.results[0];
  ++checked;
  const bool block_ok = s.frequency <= bound2 + 3 * sigma(s) && bound2 < 1.0;
  if (!block_ok) ++violated;
  return {violated == 0,
          fmt("setups {1,4,6} K=40 T=ceil(H1): all %d closed-form bounds vacuous (min %.3g), checked "
              "%d non-vacuous cases incl. p=1 at bound 1/2; block K=4 T=300 freq %.4f <= bound "
              "%.4f; %d violations",
              vacuous, min_bound, checked, s.frequency, bound2, violated)};
}

// 7 -------------------------------------------------------------------------
Outcome qualitative_ordering() {
  auto run_setup = [](SetupId id, std::vector<std::string> labels) {
    const auto env = make_setup(id, 40);
    return simulate(std::vector<double>(env.means().begin(), env.means().end()),
                    default_budget(env), 4000, labels);
  };
  const auto r1 = run_setup(SetupId::setup1, {"nseqel:0.75", "seqhalv"});
  const double a = stats_of(r1, "seqhalv").frequency / stats_of(r1, "nseqel:0.75").frequency;
  const auto r4 = run_setup(SetupId::setup4, {"nseqel:2", "succrej"});
  const double b = stats_of(r4, "succrej").frequency / stats_of(r4, "nseqel:2").frequency;
  const auto r6 = run_setup(SetupId::setup6, {"nseqel:1.7", "succrej", "seqhalv"});
  const double f17 = stats_of(r6, "nseqel:1.7").frequency;
  const double fsr = stats_of(r6, "succrej").frequency;
  const double fsh = stats_of(r6, "seqhalv").frequency;
  const bool c = f17 <= fsr && f17 <= fsh;
  return {a >= 1.3 && b >= 1.2 && c,
          fmt("(a) setup1 seqhalv/nseqel:0.75 = %.3f (>= 1.3); (b) setup4 succrej/nseqel:2 = "
              "%.3f (>= 1.2); (c) setup6 nseqel:1.7 %.4f vs succrej %.4f, seqhalv %.4f",
              a, b, f17, fsr, fsh)};
}

// 8 -------------------------------------------------------------------------
Outcome k_growth() {
  double ratio[2];
  int i = 0;
  for (std::size_t k : {40, 120}) {
    const auto env = make_setup(SetupId::setup1, k);
    const auto rep = simulate(std::vector<double>(env.means().begin(), env.means().end()),
                              default_budget(env), 4000, {"nseqel:0.75", "seqhalv"});
    ratio[i++] = stats_of(rep, "seqhalv").frequency / stats_of(rep, "nseqel:0.75").frequency;
  }
  return {ratio[1] > ratio[0],
          fmt("setup1 seqhalv/nseqel:0.75: K=40 %.3f, K=120 %.3f (4000 runs each)", ratio[0],
              ratio[1])};
}

// 9 -------------------------------------------------------------------------
Outcome geo7() {
  const auto env = make_setup(SetupId::geo7, 7);
  const std::vector<std::string> labels{"nseqel:0.75", "nseqel:1.35", "nseqel:1.7", "nseqel:2",
                                        "succrej", "seqhalv", "ucbe:2"};
  const auto rep = simulate(std::vector<double>(env.means().begin(), env.means().end()),
                            default_budget(env), 4000, labels);
  const auto& best = stats_of(rep, "nseqel:1.7");
  bool ok = true;
  int strictly_lowest = 1;
  std::string detail = fmt("T=%llu nseqel:1.7 %.4f;", static_cast<unsigned long long>(rep.budget),
                           best.frequency);
  for (const auto& s : rep.results) {
    if (&s == &best) continue;
    const double tol = 2 * std::sqrt(sigma(best) * sigma(best) + sigma(s) * sigma(s));
    if (best.frequency > s.frequency + tol) ok = false;
    if (best.frequency > s.frequency && s.algorithm.kind != AlgorithmKind::ucb_e) strictly_lowest = 0;
    detail += fmt(" %s %.4f;", s.algorithm.label().c_str(), s.frequency);
  }
  detail += strictly_lowest ? " lowest of the elimination set" : " within 2 sigma of the lowest";
  return {ok, detail};
}

// 10 ------------------------------------------------------------------------
Outcome block_reduction() {
  std::mt19937_64 g(kSeed + 10);
  int cases = 0, bad = 0;
  const std::vector<std::size_t> ones{1, 1, 1};
  const auto part = contiguous_partition(ones);
  for (std::uint64_t t = 3; t <= 400; ++t) {
    for (double p : {0.5, 0.75, 1.0, 1.35, 1.7, 2.0}) {
      const auto env = make_env(oracle::random_means(g, 3));
      const auto sched = block_schedule_power(3, t, p);
      const auto power = nseqel_schedule(3, t, p);
      const RunRecord rec = run_block_elimination(env, part, sched, g());
      ++cases;
      std::uint64_t cumulative = 0;
      bool ok = rec.total_pulls <= t;
      for (std::size_t r = 0; r < 2; ++r) {
        cumulative += rec.rounds[r].pulls_per_arm;
        ok = ok && cumulative == power.targets[r];
        for (ArmIndex a : rec.rounds[r].eliminated) ok = ok && rec.pull_counts[a] == power.targets[r];
      }
      ok = ok && rec.pull_counts[rec.recommended] == power.targets[1];
      bad += !ok;
    }
  }
  return {bad == 0, fmt("%d (T, p) cases, %d mismatches with power-schedule n_r", cases, bad)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "budget invariant", budget_invariant},
      {2, "closed-form consistency", closed_form},
      {3, "Succ-Rej equivalence", succ_rej_equivalence},
      {4, "exact oracle agreement", oracle_agreement},
      {5, "p-advice table", advice_cells},
      {6, "bound soundness", bound_soundness},
      {7, "qualitative ordering K=40", qualitative_ordering},
      {8, "K-growth trend", k_growth},
      {9, "geo7", geo7},
      {10, "block singleton reduction", block_reduction},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%-4s criterion %2d  %-26s %7.1fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                secs, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
