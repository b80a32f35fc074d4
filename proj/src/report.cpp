#include "tailcast/report.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "tailcast/format.hpp"

namespace tailcast {
namespace {

bool same_threshold(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
}

nlohmann::ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

void ExperimentReport::add(std::string forecaster, std::string rule, double threshold, double value,
                           double mc_se) {
  rows.push_back({experiment, std::move(forecaster), std::move(rule), threshold, value, mc_se});
}

const ReportRow& ExperimentReport::at(const std::string& forecaster, const std::string& rule,
                                      double threshold) const {
  for (const auto& r : rows) {
    if (r.forecaster == forecaster && r.rule == rule && same_threshold(r.threshold, threshold)) {
      return r;
    }
  }
  throw std::out_of_range("report has no cell (" + forecaster + ", " + rule + ", " +
                          format_double(threshold) + ")");
}

bool ExperimentReport::contains(const std::string& forecaster, const std::string& rule,
                                double threshold) const {
  for (const auto& r : rows) {
    if (r.forecaster == forecaster && r.rule == rule && same_threshold(r.threshold, threshold)) {
      return true;
    }
  }
  return false;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os << "# tailcast-report v" << kReportSchemaVersion << " experiment=" << experiment
     << " seed=" << seed << " replications=" << replications << '\n';
  for (const auto& [k, v] : metadata) os << "# " << k << '=' << v << '\n';
  os << "experiment,forecaster,rule,threshold,value,mc_se\n";
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.forecaster << ',' << r.rule << ',' << format_double(r.threshold)
       << ',' << format_double(r.value) << ',' << format_double(r.mc_se) << '\n';
  }
  return os.str();
}

std::string ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["replications"] = replications;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata) j["metadata"][k] = v;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json c;
    c["experiment"] = r.experiment;
    c["forecaster"] = r.forecaster;
    c["rule"] = r.rule;
    c["threshold"] = number_or_null(r.threshold);
    c["value"] = number_or_null(r.value);
    c["mc_se"] = number_or_null(r.mc_se);
    cells.push_back(std::move(c));
  }
  j["rows"] = std::move(cells);
  return j.dump(2) + "\n";
}

double proportion_se(double p, std::size_t reps) {
  if (reps == 0) return std::nan("");
  return std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
}

}  // namespace tailcast
