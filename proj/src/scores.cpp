#include "tailcast/scores.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "tailcast/format.hpp"

namespace tailcast {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string to_string(ScoreRule rule) {
  switch (rule) {
    case ScoreRule::logs: return "LogS";
    case ScoreRule::crps: return "CRPS";
    case ScoreRule::brier: return "Brier";
    case ScoreRule::discrete_ls: return "LS";
    case ScoreRule::dss: return "DSS";
    case ScoreRule::twcrps: return "twCRPS";
    case ScoreRule::cl: return "CL";
    case ScoreRule::csl: return "CSL";
    case ScoreRule::twcrls: return "twCRLS";
    case ScoreRule::squared_error: return "SE";
    case ScoreRule::absolute_error: return "AE";
  }
  return "?";
}

ScoreRule parse_score_rule(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto rule : {ScoreRule::logs, ScoreRule::crps, ScoreRule::brier, ScoreRule::discrete_ls,
                    ScoreRule::dss, ScoreRule::twcrps, ScoreRule::cl, ScoreRule::csl,
                    ScoreRule::twcrls, ScoreRule::squared_error, ScoreRule::absolute_error}) {
    std::string canon = to_string(rule);
    std::transform(canon.begin(), canon.end(), canon.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (canon == lower) return rule;
  }
  throw std::invalid_argument("unknown scoring rule: " + std::string(name));
}

ScoreSeries::ScoreSeries(std::vector<double> values, std::string rule_id,
                         std::string forecaster_id)
    : values_(std::move(values)),
      rule_id_(std::move(rule_id)),
      forecaster_id_(std::move(forecaster_id)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (std::isnan(values_[i])) {
      throw std::domain_error("ScoreSeries: NaN score at case " + std::to_string(i));
    }
  }
}

double ScoreSeries::mean() const { return mean_and_se(values_).mean; }

double ScoreSeries::standard_error() const { return mean_and_se(values_).standard_error; }

std::size_t ScoreSeries::infinite_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return std::isinf(v); }));
}

void ScoreSeries::write_csv(std::ostream& os, std::span<const double> observations) const {
  if (observations.size() != values_.size()) {
    throw std::invalid_argument("ScoreSeries::write_csv: observation count mismatch");
  }
  os << "case_index,observation,score\n";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    os << i << ',' << format_double(observations[i]) << ',' << format_double(values_[i]) << '\n';
  }
}

ScoreSeries::Parsed ScoreSeries::read_csv(std::istream& is, std::string rule_id,
                                          std::string forecaster_id) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("score CSV: empty input");
  const auto header = split_csv_line(line);
  auto col = [&](std::string_view name) -> std::ptrdiff_t {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const auto score_col = col("score");
  const auto obs_col = col("observation");
  if (score_col < 0) throw std::runtime_error("score CSV: missing 'score' column");
  std::vector<double> scores;
  std::vector<double> obs;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("score CSV: row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(header.size()));
    }
    const auto s = parse_double(cells[static_cast<std::size_t>(score_col)]);
    if (!s) throw std::runtime_error("score CSV: unparseable score in row " + std::to_string(row));
    scores.push_back(*s);
    if (obs_col >= 0) {
      const auto o = parse_double(cells[static_cast<std::size_t>(obs_col)]);
      if (!o) {
        throw std::runtime_error("score CSV: unparseable observation in row " + std::to_string(row));
      }
      obs.push_back(*o);
    }
  }
  return {ScoreSeries(std::move(scores), std::move(rule_id), std::move(forecaster_id)),
          std::move(obs)};
}

double logs(const Distribution& f, double y) { return -f.log_pdf(y); }

double crps_gaussian(double mean, double sd, double y) {
  const double z = (y - mean) / sd;
  return sd * (z * (2.0 * normal_cdf(z) - 1.0) + 2.0 * normal_pdf(z) - 1.0 / std::sqrt(std::numbers::pi));
}

QuadratureValue weighted_brier_integral(const Distribution& f, double y, const RealFn& weight,
                                        double lo, double hi, std::span<const double> cuts) {
  // Below y the integrand is w F^2; from y on it is w (1 - F)^2.
  const double left_hi = std::min(y, hi);
  const double right_lo = std::max(y, lo);
  QuadratureValue out;
  if (lo < left_hi) {
    const RealFn below = [&](double z) {
      const double w = weight(z);
      if (w == 0.0) return 0.0;
      const double F = f.cdf(z);
      return w * F * F;
    };
    // nothing to integrate left of the support
    const double a = std::max(lo, f.support_lo());
    if (a < left_hi) out = integrate_piecewise(below, a, left_hi, cuts);
  }
  if (right_lo < hi) {
    const RealFn above = [&](double z) {
      const double w = weight(z);
      if (w == 0.0) return 0.0;
      const double S = f.sf(z);
      return w * S * S;
    };
    double b = hi;
    if (std::isfinite(f.support_hi())) b = std::min(hi, std::max(f.support_hi(), right_lo));
    // [right_lo, support_lo) has S = 1 and is integrated exactly.
    double a = right_lo;
    if (f.support_lo() > a && std::isfinite(f.support_lo())) {
      const double edge = std::min(f.support_lo(), b);
      out.value += integrate_piecewise(weight, a, edge, cuts).value;
      a = edge;
    }
    if (a < b) {
      const auto piece = integrate_piecewise(above, a, b, cuts);
      out.value += piece.value;
      out.error += piece.error;
    }
  }
  return out;
}

double crps(const Distribution& f, double y) {
  if (f.family() == Family::gaussian) return crps_gaussian(f.gaussian_mean(), f.gaussian_sd(), y);
  const auto cuts = f.breakpoints();
  const RealFn one = [](double) { return 1.0; };
  return weighted_brier_integral(f, y, one, -kInf, kInf, cuts).value;
}

double brier(const Distribution& f, double y, double z) {
  const double d = f.cdf(z) - (y <= z ? 1.0 : 0.0);
  return d * d;
}

double discrete_ls(const Distribution& f, double y, double z) {
  // -log|F(z) - 1{y > z}|
  const double p = y <= z ? f.cdf(z) : f.sf(z);
  return p > 0.0 ? -std::log(p) : kInf;
}

double dss(double mean, double sd, double y) {
  if (!(sd > 0.0)) throw std::domain_error("dss: predictive standard deviation must be positive");
  const double r = (y - mean) / sd;
  return 2.0 * std::log(sd) + r * r;
}

double dss(const Distribution& f, double y) {
  const Moments m = f.moments();
  return dss(m.mean, std::sqrt(m.variance), y);
}

PointScores point_scores(double forecast, double y) {
  const double e = forecast - y;
  return {e * e, std::abs(e)};
}

MeanSE mean_and_se(std::span<const double> values) {
  if (values.empty()) return {std::nan(""), std::nan("")};
  double sum = 0.0;
  for (double v : values) {
    if (std::isinf(v)) return {kInf, kInf};
    sum += v;
  }
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

RestrictedMean restricted_summary(std::span<const double> values,
                                  std::span<const double> observations,
                                  const OutcomePredicate& predicate) {
  if (values.size() != observations.size()) {
    throw std::invalid_argument("restricted mean: scores and observations are not aligned");
  }
  std::vector<double> kept;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (predicate(observations[i])) kept.push_back(values[i]);
  }
  if (kept.empty()) throw NoQualifyingCases();
  const auto s = mean_and_se(kept);
  return {s.mean, s.standard_error, kept.size()};
}

double restricted_mean(const ScoreSeries& scores, std::span<const double> observations,
                       const OutcomePredicate& predicate) {
  return restricted_summary(scores.values(), observations, predicate).mean;
}

double ks_uniform(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - u[i]);
    d = std::max(d, u[i] - static_cast<double>(i) / n);
  }
  return d;
}

PITReport pit_check(std::span<const Distribution> forecasts,
                    std::span<const double> observations) {
  if (forecasts.size() != observations.size() || forecasts.empty()) {
    throw std::invalid_argument("pit_check: need aligned, nonempty series");
  }
  PITReport report;
  report.pit_values.resize(forecasts.size());
  report.bin_counts.assign(10, 0);
  for (std::size_t i = 0; i < forecasts.size(); ++i) {
    const double u = std::clamp(forecasts[i].cdf(observations[i]), 0.0, 1.0);
    report.pit_values[i] = u;
    report.bin_counts[std::min<std::size_t>(static_cast<std::size_t>(u * 10.0), 9)]++;
  }
  report.ks_statistic = ks_uniform(report.pit_values);
  return report;
}

}  // namespace tailcast
