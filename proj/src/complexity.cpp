#include "seqelim/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqelim {

namespace {

double suboptimal_gap(const GapVector& gaps, std::size_t rank) {
  const double g = gaps.at_rank(rank);
  if (!(g > 0.0)) {
    throw std::invalid_argument("suboptimal arm with zero gap (tied best arm)");
  }
  return g;
}

void require_arms(const GapVector& gaps) {
  if (gaps.size() < 2) throw std::invalid_argument("need at least two arms");
}

}  // namespace

double h1(const GapVector& gaps) {
  require_arms(gaps);
  double total = 0.0;
  for (std::size_t r = 1; r < gaps.size(); ++r) {
    const double g = suboptimal_gap(gaps, r);
    total += 1.0 / (g * g);
  }
  return total;
}

double h_p_top(const GapVector& gaps, std::size_t top, double p) {
  require_arms(gaps);
  if (top < 2 || top > gaps.size()) throw std::invalid_argument("top rank out of range");
  double best = 0.0;
  for (std::size_t r = 1; r < top; ++r) {
    const double g = suboptimal_gap(gaps, r);
    best = std::max(best, std::pow(static_cast<double>(r + 1), p) / (g * g));
  }
  return best;
}

double h_p(const GapVector& gaps, double p) { return h_p_top(gaps, gaps.size(), p); }

double h2(const GapVector& gaps) { return h_p(gaps, 1.0); }

double c_p(std::size_t num_arms, double p) {
  if (num_arms < 2) throw std::invalid_argument("C_p needs K >= 2");
  double total = std::pow(2.0, -p);
  for (std::size_t r = 2; r <= num_arms; ++r) total += std::pow(static_cast<double>(r), -p);
  return total;
}

double logbar(std::size_t num_arms) {
  double total = 0.5;
  for (std::size_t i = 2; i <= num_arms; ++i) total += 1.0 / static_cast<double>(i);
  return total;
}

ComplexityReport complexity_report(const GapVector& gaps, std::span<const double> exponents) {
  ComplexityReport rep;
  rep.h1 = h1(gaps);
  rep.h2 = h2(gaps);
  rep.logbar_k = logbar(gaps.size());
  for (double p : exponents) {
    rep.h_p[p] = h_p(gaps, p);
    rep.c_p[p] = c_p(gaps.size(), p);
  }
  return rep;
}

double ExponentialBound::operator()(double budget) const {
  return prefactor * std::exp(-rate * (budget - offset));
}

std::string to_string(BoundAlgorithm alg) {
  switch (alg) {
    case BoundAlgorithm::succ_rej: return "succrej";
    case BoundAlgorithm::seq_halv: return "seqhalv";
    case BoundAlgorithm::nseqel: return "nseqel";
  }
  return "unknown";
}

BoundAlgorithm parse_bound_algorithm(const std::string& name) {
  if (name == "succrej") return BoundAlgorithm::succ_rej;
  if (name == "seqhalv") return BoundAlgorithm::seq_halv;
  if (name == "nseqel") return BoundAlgorithm::nseqel;
  throw std::invalid_argument("unknown algorithm tag '" + name + "'");
}

double BoundSpec::operator()(double budget) const { return beta * std::exp(-budget / alpha); }

BoundSpec reference_bound(BoundAlgorithm alg, const GapVector& gaps, std::optional<double> p) {
  const auto k = static_cast<double>(gaps.size());
  BoundSpec b;
  b.algorithm = alg;
  switch (alg) {
    case BoundAlgorithm::succ_rej: {
      b.alpha = h2(gaps) * logbar(gaps.size());
      b.beta = 0.5 * k * (k - 1.0) * std::exp(k / b.alpha);
      break;
    }
    case BoundAlgorithm::seq_halv: {
      b.alpha = 8.0 * h2(gaps) * std::log2(k);
      b.beta = 3.0 * std::log2(k);
      break;
    }
    case BoundAlgorithm::nseqel: {
      if (!p) throw std::invalid_argument("nseqel bound needs an exponent p");
      b.alpha = h_p(gaps, *p) * c_p(gaps.size(), *p);
      b.beta = (k - 1.0) * std::exp(k / b.alpha);
      break;
    }
  }
  return b;
}

ExponentialBound nseqel_bound(const GapVector& gaps, double p) {
  const auto k = static_cast<double>(gaps.size());
  return {k - 1.0, 2.0 / (c_p(gaps.size(), p) * h_p(gaps, p)), k};
}

ExponentialBound elimination_bound(const EliminationSchedule& sched, const GapVector& gaps) {
  if (gaps.size() != sched.num_arms()) {
    throw std::invalid_argument("schedule and gaps disagree on K");
  }
  double worst = std::numeric_limits<double>::infinity();
  std::size_t max_b = 0;
  for (std::size_t r = 0; r < sched.rounds(); ++r) {
    // 1-based rank g_{r+1} + 1 is 0-based rank g_{r+1}.
    const double g = suboptimal_gap(gaps, sched.alive[r + 1]);
    worst = std::min(worst, 2.0 * g * g / sched.spec.z[r]);
    max_b = std::max(max_b, sched.spec.b[r]);
  }
  return {static_cast<double>(sched.rounds() * max_b), worst / sched.normalizer,
          static_cast<double>(sched.num_arms())};
}

std::string to_string(AdviceRow row) {
  switch (row) {
    case AdviceRow::few_competitive: return "few-competitive";
    case AdviceRow::intermediate: return "intermediate";
    case AdviceRow::many_competitive: return "many-competitive";
  }
  return "unknown";
}

PAdvice advise_p(std::size_t num_arms, double competitive) {
  if (num_arms < 3) throw std::invalid_argument("advise_p needs K >= 3");
  const auto k = static_cast<double>(num_arms);
  if (!(competitive >= 1.0 && competitive <= k - 1.0)) {
    throw std::invalid_argument("number of competitive arms must lie in [1, K-1]");
  }
  const double log_k = std::log(k);
  const double loglog_k = std::log(log_k);

  PAdvice adv;
  const double lower = 1.0 - loglog_k / std::log(k / competitive);
  const double upper = competitive > 1.0 ? 1.0 + loglog_k / std::log(competitive)
                                         : std::numeric_limits<double>::infinity();
  adv.formula_interval = {std::max(0.0, lower), std::min(2.0, upper), upper >= 2.0};

  if (competitive <= log_k) {
    adv.row = AdviceRow::few_competitive;
    adv.row_interval = {1.0, 2.0, true};
  } else if (competitive >= k / log_k) {
    adv.row = AdviceRow::many_competitive;
    adv.row_interval = {0.0, 1.0, false};
  } else {
    adv.row = AdviceRow::intermediate;
    adv.row_interval = {lower, upper, false};
  }
  return adv;
}

std::string to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::arithmetic: return "arithmetic";
    case RegimeTag::large_group: return "large-group";
    case RegimeTag::small_group: return "small-group";
    case RegimeTag::custom: return "custom";
  }
  return "unknown";
}

RegimeSpec classify_regime(const GapVector& gaps, double epsilon) {
  require_arms(gaps);
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
  const std::size_t k = gaps.size();
  const double d2 = suboptimal_gap(gaps, 1);

  RegimeSpec spec;
  spec.epsilon = epsilon;

  bool arithmetic = true;
  for (std::size_t r = 2; r < k && arithmetic; ++r) {
    const double expected = static_cast<double>(r) * d2;
    arithmetic = std::abs(gaps.at_rank(r) - expected) <= 1e-9 * expected;
  }

  const double limit = (1.0 + epsilon) * (1.0 + 1e-12);
  for (std::size_t r = 1; r < k; ++r) {
    if (gaps.at_rank(r) / d2 <= limit) ++spec.competitive;
  }

  if (arithmetic) {
    spec.tag = RegimeTag::arithmetic;
    spec.delta0 = d2;
    return spec;
  }
  const double log_k = std::log(static_cast<double>(k));
  const auto f = static_cast<double>(spec.competitive);
  if (f >= static_cast<double>(k) / log_k) {
    spec.tag = RegimeTag::large_group;
  } else if (f <= log_k) {
    spec.tag = RegimeTag::small_group;
  } else {
    spec.tag = RegimeTag::custom;
  }
  return spec;
}

}  // namespace seqelim
