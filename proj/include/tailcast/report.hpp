#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tailcast {

inline constexpr int kReportSchemaVersion = 1;

/// One cell of an experiment table. `threshold` holds the grid parameter of
/// the row (weight threshold r, or sigma in the signal-to-noise sweep) and is
/// NaN when the cell has none.
struct ReportRow {
  std::string experiment;
  std::string forecaster;
  std::string rule;
  double threshold;
  double value;
  double mc_se;
};

struct ExperimentReport {
  std::string experiment;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  std::vector<ReportRow> rows;
  std::map<std::string, std::string> metadata;

  void add(std::string forecaster, std::string rule, double threshold, double value, double mc_se);
  /// Throws std::out_of_range if no row matches. NaN thresholds match NaN.
  const ReportRow& at(const std::string& forecaster, const std::string& rule,
                      double threshold) const;
  bool contains(const std::string& forecaster, const std::string& rule, double threshold) const;

  /// Long-format CSV: a `# tailcast-report vN ...` line, then
  /// experiment,forecaster,rule,threshold,value,mc_se.
  std::string to_csv() const;
  std::string to_json() const;
};

/// Binomial standard error of a rejection frequency.
double proportion_se(double p, std::size_t reps);

}  // namespace tailcast
