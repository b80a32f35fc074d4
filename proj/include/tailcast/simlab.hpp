#pragma once

#include <string>
#include <vector>

#include "tailcast/distributions.hpp"
#include "tailcast/evaluation_tests.hpp"
#include "tailcast/report.hpp"
#include "tailcast/rng.hpp"
#include "tailcast/weighted_scores.hpp"

namespace tailcast {

// ---------------------------------------------------------------------------
// Signal-to-noise setting: mu ~ N(0, 1 - sigma^2), Y | mu ~ N(mu, sigma^2).

enum class DilemmaForecaster { perfect, unconditional, extremist };
std::string to_string(DilemmaForecaster f);
inline constexpr DilemmaForecaster kDilemmaForecasters[] = {
    DilemmaForecaster::perfect, DilemmaForecaster::unconditional, DilemmaForecaster::extremist};

struct DilemmaCase {
  double mu;
  double y;
  double sigma;

  Distribution forecast(DilemmaForecaster f) const;
  /// Mean (= median) of the predictive distribution.
  double point_forecast(DilemmaForecaster f) const;
};

/// Case i is drawn from rng.substream(i). Throws std::domain_error unless 0 < sigma2 < 1.
std::vector<DilemmaCase> gen_dilemma(double sigma2, std::size_t n, const RngStream& rng);

/// Law of the perfect point forecast mu given Y = y: N((1 - sigma^2) y, sigma^2 (1 - sigma^2)).
Distribution perfect_point_given_observation(double sigma2, double y);

struct TablesConfig {
  double sigma2 = 2.0 / 3.0;
  std::size_t n = 10000;
  double threshold = 1.64;
  double gaussian_weight_scale = 1.0;
};

/// Point-forecast errors (MAE, MSE and restricted rMAE, rMSE), CRPS and LogS
/// with their restricted versions, and twCRPS/CL/CSL under indicator and
/// Gaussian-CDF weights at the threshold.
ExperimentReport run_tables(const TablesConfig& cfg, const RngStream& rng, unsigned threads = 1);

struct SweepConfig {
  std::vector<double> sigma_grid;
  std::size_t n = 10000;
  double threshold = 1.64;
};

/// Mean CRPS/LogS and restricted rCRPS/rLogS per forecaster for each sigma
/// (the row threshold column holds sigma). Trend diagnostics go to metadata.
ExperimentReport sweep_sigma(const SweepConfig& cfg, const RngStream& rng, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Power studies.

/// Direction of a two-sided test outcome, with degenerate cases resolved:
/// constant nonzero score differences count as a rejection in favour of the
/// forecaster with the smaller score.
struct TwoSidedOutcome {
  Preferred preferred = Preferred::none;
  bool degenerate = false;
  bool failed = false;  // nonpositive variance estimate
};
TwoSidedOutcome classify_two_sided(std::span<const double> sf, std::span<const double> sg,
                                   std::size_t k, VarianceEstimator est, double alpha);

/// One-sided rejection of "F and G equal" in favour of G (t_n > z_{1-alpha}).
bool one_sided_rejects(std::span<const double> sf, std::span<const double> sg, std::size_t k,
                       VarianceEstimator est, double alpha);

/// n = max(min_n, round(c / Phi(r))), so that c observations are expected below r.
std::size_t diks_sample_size(double r, double c, std::size_t min_n = 6);

struct DiksConfig {
  std::vector<double> r_grid;
  double c = 5.0;
  double alpha = 0.05;
  std::size_t reps = 10000;
  std::size_t min_n = 6;
  VarianceEstimator estimator = VarianceEstimator::hac;
};

/// N(0,1) data; N(0,1) against the unit-variance t5 under CRPS, LogS and
/// twCRPS/CL/CSL with w = 1{z <= r}; two-sided DM rejection frequencies by
/// direction (favor_normal, favor_t).
ExperimentReport diks_power_study(const DiksConfig& cfg, const RngStream& rng, unsigned threads = 1);

struct NPConfig {
  std::vector<double> r_grid;
  double c = 5.0;
  double alpha = 0.05;
  std::size_t reps = 10000;
  /// Null samples used to estimate the LRT critical value (at least 1000).
  std::size_t calibration_reps = 20000;
  std::size_t min_n = 6;
  VarianceEstimator estimator = VarianceEstimator::hac;
};

/// Power (data from t5) and level (data from N(0,1)) of the likelihood ratio
/// test and of one-sided DM tests under CRPS, twCRPS, LogS, CL, CSL. Rows with
/// rule "LogS-LRT" hold the paired power difference and its standard error.
ExperimentReport np_study(const NPConfig& cfg, const RngStream& rng, unsigned threads = 1);

struct ScenarioConfig {
  std::vector<double> r_grid;
  std::size_t n = 100;
  double alpha = 0.05;
  std::size_t reps = 10000;
  VarianceEstimator estimator = VarianceEstimator::kdep;
  std::size_t k = 1;
};

/// The mixture F = (Phi + H) / 2 of the normal and the heavy-tailed H.
Distribution normal_heavy_mixture();

/// Scenario A: N(0,1) data, F against H. Scenario B: H data, F against Phi.
/// Weighted rules use w = 1{z >= r}. Forecaster labels are "A:favor_F",
/// "A:favor_H", "B:favor_F", "B:favor_Phi". Replications where a score is
/// undefined count as no rejection and are tallied in metadata "failed.*".
ExperimentReport scenario_ab_study(const ScenarioConfig& cfg, const RngStream& rng,
                                   unsigned threads = 1);

}  // namespace tailcast
