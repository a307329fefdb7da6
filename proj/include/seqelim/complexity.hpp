#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "seqelim/env.hpp"
#include "seqelim/schedule.hpp"

namespace seqelim {

/// All hardness measures use gaps sorted ascending, i.e. rank 1 is the best
/// arm and rank i the i-th best. Throws std::invalid_argument if any
/// suboptimal gap is zero.
double h1(const GapVector& gaps);
double h2(const GapVector& gaps);
/// max over ranks i = 2..K of i^p / gap_i^2.
double h_p(const GapVector& gaps, double p);
/// h_p restricted to the top `top` ranks (2..top).
double h_p_top(const GapVector& gaps, std::size_t top, double p);

/// 2^-p + sum_{r=2..K} r^-p, summed in index order.
double c_p(std::size_t num_arms, double p);
/// 0.5 + sum_{i=2..K} 1/i.
double logbar(std::size_t num_arms);

struct ComplexityReport {
  double h1 = 0.0;
  double h2 = 0.0;
  std::map<double, double> h_p;
  std::map<double, double> c_p;
  double logbar_k = 0.0;
};

ComplexityReport complexity_report(const GapVector& gaps, std::span<const double> exponents);

/// prefactor * exp(-rate * (T - offset)).
struct ExponentialBound {
  double prefactor = 0.0;
  double rate = 0.0;
  double offset = 0.0;

  double operator()(double budget) const;
};

enum class BoundAlgorithm { succ_rej, seq_halv, nseqel };

std::string to_string(BoundAlgorithm alg);
BoundAlgorithm parse_bound_algorithm(const std::string& name);

/// Misidentification bound of the form beta * exp(-T / alpha).
struct BoundSpec {
  BoundAlgorithm algorithm = BoundAlgorithm::succ_rej;
  double alpha = 0.0;
  double beta = 0.0;

  double operator()(double budget) const;
};

/// Rate/prefactor pair per algorithm. `p` is required for nseqel.
BoundSpec reference_bound(BoundAlgorithm alg, const GapVector& gaps, std::optional<double> p = {});

/// (K - 1) exp(-2 (T - K) / (C_p H(p))).
ExponentialBound nseqel_bound(const GapVector& gaps, double p);

/// R max_r b_r exp(-((T - K) / C) min_r 2 gap^2_{g_{r+1}+1} / z_r), with gap
/// ranks taken from the sorted gaps.
ExponentialBound elimination_bound(const EliminationSchedule& sched, const GapVector& gaps);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool upper_closed = false;

  bool contains(double x) const {
    return x > lower && (upper_closed ? x <= upper : x < upper);
  }
  double midpoint() const { return 0.5 * (lower + upper); }
};

enum class AdviceRow { few_competitive, intermediate, many_competitive };

std::string to_string(AdviceRow row);

/// Suggested exponent range for K arms of which `competitive` are close to
/// the second best (natural logs).
///
/// `row_interval` is the literal interval for the row f_K falls in:
///   f_K <= log K              -> (1, 2]
///   log K < f_K < K / log K   -> (1 - loglog K / log(K / f_K), 1 + loglog K / log f_K)
///   f_K >= K / log K          -> (0, 1)
/// `formula_interval` is the middle-row expression evaluated for any f_K and
/// clamped to [0, 2]. It contains the row interval and is the tabulated form.
struct PAdvice {
  AdviceRow row = AdviceRow::intermediate;
  Interval row_interval;
  Interval formula_interval;

  double suggest() const { return row_interval.midpoint(); }
};

/// Throws std::invalid_argument unless K >= 3 and 1 <= competitive <= K - 1.
PAdvice advise_p(std::size_t num_arms, double competitive);

enum class RegimeTag { arithmetic, large_group, small_group, custom };

std::string to_string(RegimeTag tag);

struct RegimeSpec {
  RegimeTag tag = RegimeTag::custom;
  std::size_t competitive = 0;  // f_K
  double epsilon = 0.0;
  double delta0 = 0.0;          // common difference, arithmetic regime only
};

/// Arithmetic when gap_i = (i - 1) gap_2 for every rank within 1e-9 relative.
/// Otherwise counts f_K = #{i >= 2 : gap_i / gap_2 <= 1 + epsilon} and tags
/// large_group when f_K >= K / log K, small_group when f_K <= log K.
RegimeSpec classify_regime(const GapVector& gaps, double epsilon = 0.05);

}  // namespace seqelim
