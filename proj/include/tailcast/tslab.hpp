#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tailcast/distributions.hpp"
#include "tailcast/report.hpp"
#include "tailcast/rng.hpp"
#include "tailcast/scores.hpp"

namespace tailcast {

/// Quarterly observations with labels of the form YYYYQn, consecutive and strictly increasing.
struct QuarterlySeries {
  std::vector<std::string> quarters;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

/// Reads a CSV with a header row containing `quarter` and `column`.
/// Errors (std::runtime_error) name the offending line.
QuarterlySeries read_series(std::istream& is, const std::string& column = "value");
QuarterlySeries load_series(const std::filesystem::path& path, const std::string& column = "value");
void write_series(std::ostream& os, const QuarterlySeries& series);

/// Labels for n consecutive quarters starting at (year, quarter).
std::vector<std::string> quarter_range(int year, int quarter, std::size_t n);

/// beta | sigma^2 ~ N(0, coef_var sigma^2 I), sigma^2 ~ inverse-gamma(shape, scale).
struct ConjugatePrior {
  double coef_var = 100.0;
  double shape = 2.0;
  double scale = 1.0;
};

struct ARDraw {
  Eigen::VectorXd coef;  // b_0, b_1, ..., b_p
  double sigma;
};

struct ARPosterior {
  int p = 0;
  std::vector<ARDraw> draws;
  Eigen::VectorXd coef_mean;  // analytic posterior mean of (b_0, ..., b_p)
  Eigen::MatrixXd coef_scale;  // V_n: coef | sigma^2 ~ N(coef_mean, sigma^2 V_n)
  double shape = 0.0;         // a_n
  double scale = 0.0;         // b_n

  /// Analytic marginal posterior variance of each coefficient, b_n / (a_n - 1) diag(V_n).
  Eigen::VectorXd coef_variance() const;
};

/// Exact draws from the normal-inverse-gamma posterior of y_t on (1, y_{t-1}, ..., y_{t-p}).
/// Throws std::domain_error for p < 1, m < 1, too short series or a rank-deficient design.
ARPosterior fit_ar(std::span<const double> y, int p, std::size_t m, const ConjugatePrior& prior,
                   const RngStream& rng);

/// Equally weighted Gaussian mixture.
struct MixturePredictive {
  std::vector<double> means;
  std::vector<double> sds;

  std::size_t size() const { return means.size(); }
  double mean() const;
  double variance() const;
  Distribution distribution() const;
  /// One draw from each component.
  std::vector<double> sample_one_per_component(RngStream& rng) const;
};

/// `recent` holds at least p values, most recent last. k = 1 is the exact
/// mixture; k > 1 summarizes paths_per_draw simulated paths per draw by a Gaussian.
MixturePredictive predict(const ARPosterior& post, std::span<const double> recent, int k,
                          std::size_t paths_per_draw, const RngStream& rng);

/// -log of the Gaussian density with the sample mean and (n - 1) variance at y.
double quadratic_logs(std::span<const double> sample, double y);
/// Quadratic approximation of LogS or DSS from a sample; refused for CL and CSL.
double quadratic_score(ScoreRule rule, std::span<const double> sample, double y);

struct RollingConfig {
  int p = 2;
  std::size_t m = 5000;
  std::vector<int> horizons = {1};
  std::size_t start_index = 0;
  std::size_t paths_per_draw = 100;
  ConjugatePrior prior;
  double lower_threshold = 0.1;
  double upper_threshold = 0.98;
  double alpha = 0.05;
};

struct RollingResult {
  ExperimentReport report;
  /// Per-origin scores keyed "<forecaster>|<rule>|h=<k>".
  std::map<std::string, std::vector<double>> scores;
  /// Realized targets keyed "h=<k>".
  std::map<std::string, std::vector<double>> targets;
};

/// Recursive-window evaluation of the AR(p) forecaster and a Gaussian
/// climatology (training-window mean and standard deviation).
RollingResult rolling_eval(const QuarterlySeries& series, const RollingConfig& cfg,
                           const RngStream& rng, unsigned threads = 1);

/// Simulated AR(p) series with Gaussian noise, started from zeros after a burn-in.
std::vector<double> simulate_ar(std::span<const double> coef, double sigma, std::size_t n,
                                const RngStream& rng, std::size_t burn_in = 200);

}  // namespace tailcast
