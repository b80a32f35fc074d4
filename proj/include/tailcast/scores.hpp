#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tailcast/distributions.hpp"

namespace tailcast {

enum class ScoreRule {
  logs,
  crps,
  brier,
  discrete_ls,
  dss,
  twcrps,
  cl,
  csl,
  twcrls,
  squared_error,
  absolute_error,
};

std::string to_string(ScoreRule rule);
/// Accepts the names produced by to_string(); throws std::invalid_argument.
ScoreRule parse_score_rule(std::string_view name);

/// Per-case scores of one forecaster under one rule. Values may be +inf
/// (zero density under LogS) but never NaN.
class ScoreSeries {
 public:
  ScoreSeries() = default;
  ScoreSeries(std::vector<double> values, std::string rule_id, std::string forecaster_id);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const std::string& rule_id() const { return rule_id_; }
  const std::string& forecaster_id() const { return forecaster_id_; }

  /// +inf whenever any case is infinite; infinite_count() says how many.
  double mean() const;
  double standard_error() const;
  std::size_t infinite_count() const;

  /// CSV with header `case_index,observation,score`.
  void write_csv(std::ostream& os, std::span<const double> observations) const;
  struct Parsed;
  static Parsed read_csv(std::istream& is, std::string rule_id = "", std::string forecaster_id = "");

 private:
  std::vector<double> values_;
  std::string rule_id_;
  std::string forecaster_id_;
};

struct ScoreSeries::Parsed {
  ScoreSeries scores;
  std::vector<double> observations;
};

double logs(const Distribution& f, double y);
/// Closed form for Gaussian forecasts, adaptive quadrature otherwise.
double crps(const Distribution& f, double y);
double crps_gaussian(double mean, double sd, double y);
double brier(const Distribution& f, double y, double z);
double discrete_ls(const Distribution& f, double y, double z);
/// Dawid-Sebastiani score 2 log sd + (y - mean)^2 / sd^2.
double dss(const Distribution& f, double y);
double dss(double mean, double sd, double y);

struct PointScores {
  double squared_error;
  double absolute_error;
};
PointScores point_scores(double forecast, double y);

/// Integral of weight(z) * (F(z) - 1{y <= z})^2 over [lo, hi]. The
/// integration is split at y and at every cut so that indicator weights and
/// kinked CDFs are handled exactly.
QuadratureValue weighted_brier_integral(const Distribution& f, double y, const RealFn& weight,
                                        double lo, double hi, std::span<const double> cuts);

/// Threshold rule on the observation used for restricted evaluation.
struct OutcomePredicate {
  enum class Op { always, at_least, at_most };
  Op op = Op::always;
  double threshold = 0.0;

  static OutcomePredicate always() { return {}; }
  static OutcomePredicate at_least(double r) { return {Op::at_least, r}; }
  static OutcomePredicate at_most(double r) { return {Op::at_most, r}; }

  bool operator()(double y) const {
    switch (op) {
      case Op::at_least: return y >= threshold;
      case Op::at_most: return y <= threshold;
      case Op::always: break;
    }
    return true;
  }
};

class NoQualifyingCases : public std::runtime_error {
 public:
  NoQualifyingCases() : std::runtime_error("restricted mean: no qualifying cases") {}
};

struct RestrictedMean {
  double mean;
  double standard_error;
  std::size_t count;
};

/// Mean score over the cases whose observation satisfies the predicate.
/// This is the improper restricted evaluation (rMAE, rCRPS, ...).
double restricted_mean(const ScoreSeries& scores, std::span<const double> observations,
                       const OutcomePredicate& predicate);
RestrictedMean restricted_summary(std::span<const double> values,
                                  std::span<const double> observations,
                                  const OutcomePredicate& predicate);

struct PITReport {
  std::vector<double> pit_values;
  double ks_statistic = 0.0;
  std::vector<std::size_t> bin_counts;  // 10 equal-width bins on [0, 1]
};

PITReport pit_check(std::span<const Distribution> forecasts, std::span<const double> observations);
/// Kolmogorov-Smirnov distance of the sample from U(0, 1).
double ks_uniform(std::vector<double> u);

/// Mean and standard error of the mean; +inf mean if any value is infinite.
struct MeanSE {
  double mean;
  double standard_error;
};
MeanSE mean_and_se(std::span<const double> values);

}  // namespace tailcast
