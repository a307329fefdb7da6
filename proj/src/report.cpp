#include "seqelim/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace seqelim {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void write_csv(const ExperimentReport& report, std::ostream& out, bool header) {
  if (header) out << kCsvHeader << '\n';
  for (const AlgorithmStats& s : report.results) {
    out << report.setup << ',' << report.num_arms << ',' << report.budget << ',' << report.runs
        << ',' << s.algorithm.name() << ',' << s.algorithm.params() << ',' << s.errors << ','
        << fixed6(s.frequency) << ',' << fixed6(s.ci_half) << ',' << report.root_seed << '\n';
  }
}

std::string to_json_string(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["setup"] = report.setup;
  j["K"] = report.num_arms;
  j["T"] = report.budget;
  j["runs"] = report.runs;
  j["seed"] = report.root_seed;
  j["means"] = report.means;
  nlohmann::ordered_json algs = nlohmann::ordered_json::array();
  for (const AlgorithmStats& s : report.results) {
    nlohmann::ordered_json a;
    a["alg"] = s.algorithm.name();
    a["label"] = s.algorithm.label();
    a["params"] = s.algorithm.params();
    a["completed"] = s.completed;
    a["errors"] = s.errors;
    a["misidentified"] = s.misidentified;
    a["freq"] = s.frequency;
    a["ci_half"] = s.ci_half;
    if (s.cp_lower) a["cp_lower"] = *s.cp_lower;
    if (s.cp_upper) a["cp_upper"] = *s.cp_upper;
    if (!s.first_error.empty()) a["first_error"] = s.first_error;
    algs.push_back(std::move(a));
  }
  j["algorithms"] = std::move(algs);
  return j.dump(2);
}

namespace {

ExperimentReport parse_report(const nlohmann::json& j) {
  ExperimentReport rep;
  try {
    rep.setup = j.at("setup").get<std::string>();
    rep.num_arms = j.at("K").get<std::size_t>();
    rep.budget = j.at("T").get<std::uint64_t>();
    rep.runs = j.at("runs").get<std::size_t>();
    rep.root_seed = j.at("seed").get<std::uint64_t>();
    rep.means = j.at("means").get<std::vector<double>>();
    for (const auto& a : j.at("algorithms")) {
      AlgorithmStats s;
      s.algorithm = parse_algorithm(a.at("label").get<std::string>());
      s.completed = a.at("completed").get<std::size_t>();
      s.errors = a.at("errors").get<std::size_t>();
      s.misidentified = a.at("misidentified").get<std::size_t>();
      s.frequency = a.at("freq").get<double>();
      s.ci_half = a.at("ci_half").get<double>();
      if (a.contains("cp_lower")) s.cp_lower = a["cp_lower"].get<double>();
      if (a.contains("cp_upper")) s.cp_upper = a["cp_upper"].get<double>();
      if (a.contains("first_error")) s.first_error = a["first_error"].get<std::string>();
      if (s.completed > 0) {
        const double f = static_cast<double>(s.misidentified) / static_cast<double>(s.completed);
        if (f != s.frequency || normal_ci_half(s.misidentified, s.completed) != s.ci_half) {
          throw std::invalid_argument("report statistics do not match its counts");
        }
      }
      rep.results.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
  return rep;
}

nlohmann::json parse_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

}  // namespace

ExperimentReport report_from_json(const std::string& text) { return parse_report(parse_text(text)); }

std::vector<ExperimentReport> reports_from_json(const std::string& text) {
  const auto j = parse_text(text);
  std::vector<ExperimentReport> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(parse_report(item));
  } else {
    out.push_back(parse_report(j));
  }
  return out;
}

void write_table(const ExperimentReport& report, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "%s  K=%zu  T=%llu  runs=%zu  seed=%llu\n",
                report.setup.c_str(), report.num_arms,
                static_cast<unsigned long long>(report.budget), report.runs,
                static_cast<unsigned long long>(report.root_seed));
  out << line;
  std::snprintf(line, sizeof line, "  %-3s %-16s %10s %10s %10s %7s\n", "#", "algorithm", "misid",
                "freq", "ci95", "errors");
  out << line;
  std::size_t index = 1;
  for (const AlgorithmStats& s : report.results) {
    std::snprintf(line, sizeof line, "  %-3zu %-16s %10zu %10.6f %10.6f %7zu\n", index++,
                  s.algorithm.label().c_str(), s.misidentified, s.frequency, s.ci_half, s.errors);
    out << line;
    if (!s.first_error.empty()) out << "      error: " << s.first_error << '\n';
  }
}

void write_ratio_table(const std::vector<RatioRow>& rows, const std::string& baseline,
                       std::ostream& out) {
  char line[256];
  out << "  ratio freq(" << baseline << ") / freq(alg)\n";
  for (const RatioRow& r : rows) {
    switch (r.status) {
      case RatioStatus::ok:
        std::snprintf(line, sizeof line, "  %-16s %8.3f +- %.3f\n", r.algorithm.c_str(), r.ratio,
                      r.ci_half);
        break;
      case RatioStatus::infinite:
        std::snprintf(line, sizeof line, "  %-16s %8s\n", r.algorithm.c_str(), "inf");
        break;
      case RatioStatus::undefined:
        std::snprintf(line, sizeof line, "  %-16s %8s\n", r.algorithm.c_str(), "undefined");
        break;
    }
    out << line;
  }
}

}  // namespace seqelim
