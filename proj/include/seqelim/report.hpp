#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "seqelim/harness.hpp"

namespace seqelim {

/// Column order of the CSV export. Stable; downstream plotting relies on it.
inline constexpr const char* kCsvHeader = "setup,K,T,runs,alg,params,errors,freq,ci_half,seed";

/// One row per algorithm. `freq` and `ci_half` are printed with 6 decimals.
void write_csv(const ExperimentReport& report, std::ostream& out, bool header = true);

std::string to_json_string(const ExperimentReport& report);
/// Inverse of to_json_string. Frequencies and CIs are recomputed from the
/// stored counts and checked against the stored values.
ExperimentReport report_from_json(const std::string& text);
/// Accepts one report object or an array of them (as written by `bench`).
std::vector<ExperimentReport> reports_from_json(const std::string& text);

/// Fixed-width human-readable table.
void write_table(const ExperimentReport& report, std::ostream& out);
void write_ratio_table(const std::vector<RatioRow>& rows, const std::string& baseline,
                       std::ostream& out);

}  // namespace seqelim
