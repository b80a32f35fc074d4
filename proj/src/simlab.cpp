#include "tailcast/simlab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tailcast/format.hpp"
#include "tailcast/parallel.hpp"
#include "tailcast/scores.hpp"

namespace tailcast {
namespace {

constexpr double kNA = std::numeric_limits<double>::quiet_NaN();
constexpr double kExtremistShift = 2.5;

std::size_t index_of(DilemmaForecaster f) { return static_cast<std::size_t>(f); }

struct Frequency {
  double value;
  double se;
};

Frequency frequency(std::size_t hits, std::size_t reps) {
  const double p = static_cast<double>(hits) / static_cast<double>(reps);
  return {p, proportion_se(p, reps)};
}

// Mean of a 0/1 paired difference and its standard error.
Frequency paired_difference(const std::vector<char>& a, const std::vector<char>& b) {
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<double>(a[i]) - static_cast<double>(b[i]);
  const auto s = mean_and_se(d);
  return {s.mean, s.standard_error};
}

std::string grid_label(double r) { return format_double(r); }

RestrictedMean restricted_or_na(std::span<const double> v, std::span<const double> y,
                                const OutcomePredicate& pred) {
  try {
    return restricted_summary(v, y, pred);
  } catch (const NoQualifyingCases&) {
    return {kNA, kNA, 0};
  }
}

}  // namespace

std::string to_string(DilemmaForecaster f) {
  switch (f) {
    case DilemmaForecaster::perfect: return "perfect";
    case DilemmaForecaster::unconditional: return "unconditional";
    case DilemmaForecaster::extremist: return "extremist";
  }
  return "?";
}

Distribution DilemmaCase::forecast(DilemmaForecaster f) const {
  switch (f) {
    case DilemmaForecaster::perfect: return Distribution::gaussian(mu, sigma);
    case DilemmaForecaster::unconditional: return Distribution::gaussian(0.0, 1.0);
    case DilemmaForecaster::extremist: return Distribution::gaussian(mu + kExtremistShift, sigma);
  }
  throw std::logic_error("unknown forecaster");
}

double DilemmaCase::point_forecast(DilemmaForecaster f) const {
  switch (f) {
    case DilemmaForecaster::perfect: return mu;
    case DilemmaForecaster::unconditional: return 0.0;
    case DilemmaForecaster::extremist: return mu + kExtremistShift;
  }
  throw std::logic_error("unknown forecaster");
}

std::vector<DilemmaCase> gen_dilemma(double sigma2, std::size_t n, const RngStream& rng) {
  if (!(sigma2 > 0.0 && sigma2 < 1.0)) throw std::domain_error("gen_dilemma: sigma2 must lie in (0, 1)");
  const double sigma = std::sqrt(sigma2);
  const double mu_sd = std::sqrt(1.0 - sigma2);
  std::vector<DilemmaCase> cases(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream s = rng.substream(i);
    const double mu = mu_sd * s.normal();
    cases[i] = {mu, mu + sigma * s.normal(), sigma};
  }
  return cases;
}

Distribution perfect_point_given_observation(double sigma2, double y) {
  if (!(sigma2 > 0.0 && sigma2 < 1.0)) throw std::domain_error("sigma2 must lie in (0, 1)");
  return Distribution::gaussian((1.0 - sigma2) * y, std::sqrt(sigma2 * (1.0 - sigma2)));
}

ExperimentReport run_tables(const TablesConfig& cfg, const RngStream& rng, unsigned threads) {
  const auto cases = gen_dilemma(cfg.sigma2, cfg.n, rng);
  const auto ind = WeightFunction::indicator_right(cfg.threshold);
  const auto gau = WeightFunction::gaussian_right(cfg.threshold, cfg.gaussian_weight_scale);

  // column order of the per-case score matrix
  enum Col { AE, SE, CRPS, LOGS, TW_I, CL_I, CSL_I, TW_G, CL_G, CSL_G, NCOL };
  static constexpr std::array<const char*, NCOL> kNames = {
      "MAE", "MSE", "CRPS", "LogS", "twCRPS", "CL", "CSL", "twCRPS", "CL", "CSL"};

  std::array<std::vector<std::array<double, NCOL>>, 3> cols;
  for (auto& c : cols) c.resize(cases.size());
  parallel_for(cases.size(), threads, [&](std::size_t i) {
    const auto& c = cases[i];
    for (auto f : kDilemmaForecasters) {
      const auto dist = c.forecast(f);
      const auto ps = point_scores(c.point_forecast(f), c.y);
      auto& row = cols[index_of(f)][i];
      row[AE] = ps.absolute_error;
      row[SE] = ps.squared_error;
      row[CRPS] = crps(dist, c.y);
      row[LOGS] = logs(dist, c.y);
      row[TW_I] = twcrps(dist, c.y, ind);
      row[CL_I] = cl(dist, c.y, ind);
      row[CSL_I] = csl(dist, c.y, ind);
      row[TW_G] = twcrps(dist, c.y, gau);
      row[CL_G] = cl(dist, c.y, gau);
      row[CSL_G] = csl(dist, c.y, gau);
    }
  });

  std::vector<double> ys(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) ys[i] = cases[i].y;
  const auto extreme = OutcomePredicate::at_least(cfg.threshold);

  ExperimentReport rep;
  rep.experiment = "tables";
  rep.seed = rng.master_seed();
  rep.replications = cfg.n;
  rep.metadata["sigma2"] = format_double(cfg.sigma2);
  rep.metadata["threshold"] = format_double(cfg.threshold);
  rep.metadata["gaussian_weight_scale"] = format_double(cfg.gaussian_weight_scale);

  std::size_t restricted_n = 0;
  for (auto f : kDilemmaForecasters) {
    const auto& m = cols[index_of(f)];
    auto column = [&](int col) {
      std::vector<double> v(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) v[i] = m[i][static_cast<std::size_t>(col)];
      return v;
    };
    const std::string name = to_string(f);
    for (int col : {AE, SE, CRPS, LOGS}) {
      const auto v = column(col);
      const auto all = mean_and_se(v);
      rep.add(name, kNames[static_cast<std::size_t>(col)], kNA, all.mean, all.standard_error);
      const auto r = restricted_or_na(v, ys, extreme);
      restricted_n = r.count;
      rep.add(name, std::string("r") + kNames[static_cast<std::size_t>(col)], cfg.threshold, r.mean,
              r.standard_error);
    }
    for (int col : {TW_I, CL_I, CSL_I}) {
      const auto s = mean_and_se(column(col));
      rep.add(name, std::string(kNames[static_cast<std::size_t>(col)]) + ":indicator", cfg.threshold,
              s.mean, s.standard_error);
    }
    for (int col : {TW_G, CL_G, CSL_G}) {
      const auto s = mean_and_se(column(col));
      rep.add(name, std::string(kNames[static_cast<std::size_t>(col)]) + ":gaussian", cfg.threshold,
              s.mean, s.standard_error);
    }
  }
  rep.metadata["restricted_cases"] = std::to_string(restricted_n);
  return rep;
}

ExperimentReport sweep_sigma(const SweepConfig& cfg, const RngStream& rng, unsigned threads) {
  if (cfg.sigma_grid.empty()) throw std::domain_error("sweep_sigma: empty sigma grid");
  for (double s : cfg.sigma_grid) {
    if (!(s > 0.0 && s < 1.0)) throw std::domain_error("sweep_sigma: sigma must lie in (0, 1)");
  }
  ExperimentReport rep;
  rep.experiment = "sweep-sigma";
  rep.seed = rng.master_seed();
  rep.replications = cfg.n;
  rep.metadata["threshold"] = format_double(cfg.threshold);
  const auto extreme = OutcomePredicate::at_least(cfg.threshold);
  const std::array<std::string, 4> rules = {"CRPS", "LogS", "rCRPS", "rLogS"};

  for (std::size_t g = 0; g < cfg.sigma_grid.size(); ++g) {
    const double sigma = cfg.sigma_grid[g];
    const auto cases = gen_dilemma(sigma * sigma, cfg.n, rng.substream(g));
    std::vector<double> ys(cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) ys[i] = cases[i].y;
    for (auto f : kDilemmaForecasters) {
      std::vector<double> c(cases.size()), l(cases.size());
      parallel_for(cases.size(), threads, [&](std::size_t i) {
        const auto d = cases[i].forecast(f);
        c[i] = crps(d, cases[i].y);
        l[i] = logs(d, cases[i].y);
      });
      const auto mc = mean_and_se(c);
      const auto ml = mean_and_se(l);
      rep.add(to_string(f), "CRPS", sigma, mc.mean, mc.standard_error);
      rep.add(to_string(f), "LogS", sigma, ml.mean, ml.standard_error);
      const auto rc = restricted_or_na(c, ys, extreme);
      const auto rl = restricted_or_na(l, ys, extreme);
      rep.add(to_string(f), "rCRPS", sigma, rc.mean, rc.standard_error);
      rep.add(to_string(f), "rLogS", sigma, rl.mean, rl.standard_error);
    }
  }

  // Trend of each curve between the smallest and largest sigma, judged at 3 SE.
  const double lo = *std::min_element(cfg.sigma_grid.begin(), cfg.sigma_grid.end());
  const double hi = *std::max_element(cfg.sigma_grid.begin(), cfg.sigma_grid.end());
  for (auto f : kDilemmaForecasters) {
    for (const auto& rule : rules) {
      const auto& a = rep.at(to_string(f), rule, lo);
      const auto& b = rep.at(to_string(f), rule, hi);
      const double diff = b.value - a.value;
      const double se = std::hypot(a.mc_se, b.mc_se);
      std::string trend = "flat";
      if (diff > 3.0 * se) trend = "increasing";
      if (diff < -3.0 * se) trend = "decreasing";
      rep.metadata["trend." + to_string(f) + "." + rule] = trend;
    }
  }
  for (const auto& rule : {std::string("rCRPS"), std::string("rLogS")}) {
    std::ostringstream os;
    bool first = true;
    for (double s : cfg.sigma_grid) {
      if (rep.at("extremist", rule, s).value < rep.at("perfect", rule, s).value) {
        os << (first ? "" : ";") << format_double(s);
        first = false;
      }
    }
    rep.metadata["extremist_beats_perfect." + rule] = os.str();
  }
  return rep;
}

TwoSidedOutcome classify_two_sided(std::span<const double> sf, std::span<const double> sg,
                                   std::size_t k, VarianceEstimator est, double alpha) {
  TwoSidedOutcome out;
  try {
    const auto r = dm_test(sf, sg, k, est, alpha);
    out.preferred = r.preferred;
    out.degenerate = r.degenerate;
  } catch (const DegenerateVarianceError& e) {
    out.degenerate = true;
    out.preferred = e.mean_difference() < 0.0 ? Preferred::F : Preferred::G;
  } catch (const std::domain_error&) {
    out.failed = true;
  }
  return out;
}

bool one_sided_rejects(std::span<const double> sf, std::span<const double> sg, std::size_t k,
                       VarianceEstimator est, double alpha) {
  try {
    return dm_test(sf, sg, k, est, alpha).p_one_sided < alpha;
  } catch (const DegenerateVarianceError& e) {
    return e.mean_difference() > 0.0;
  } catch (const std::domain_error&) {
    return false;
  }
}

std::size_t diks_sample_size(double r, double c, std::size_t min_n) {
  const double p = normal_cdf(r);
  if (!(p > 0.0)) throw std::domain_error("diks_sample_size: Phi(r) vanishes");
  const double n = std::round(c / p);
  if (!(n < 1e8)) throw std::domain_error("diks_sample_size: sample size overflow for r = " + format_double(r));
  return std::max(min_n, static_cast<std::size_t>(n));
}

namespace {

const std::array<ScoreRule, 5> kPowerRules = {ScoreRule::crps, ScoreRule::logs, ScoreRule::twcrps,
                                              ScoreRule::cl, ScoreRule::csl};

void score_sample(const WeightedScorer& s, ScoreRule rule, std::span<const double> y,
                  std::vector<double>& out) {
  out.resize(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) out[t] = s.score(rule, y[t]);
}

// Scores both forecasters and classifies; an undefined score (e.g. CL with zero weighted mass)
// marks the replication as failed.
TwoSidedOutcome compare_two_sided(const WeightedScorer& sf, const WeightedScorer& sg, ScoreRule rule,
                                  std::span<const double> y, std::size_t k, VarianceEstimator est,
                                  double alpha, std::vector<double>& a, std::vector<double>& b) {
  try {
    score_sample(sf, rule, y, a);
    score_sample(sg, rule, y, b);
  } catch (const std::domain_error&) {
    TwoSidedOutcome out;
    out.failed = true;
    return out;
  }
  return classify_two_sided(a, b, k, est, alpha);
}

}  // namespace

ExperimentReport diks_power_study(const DiksConfig& cfg, const RngStream& rng, unsigned threads) {
  if (cfg.r_grid.empty()) throw std::domain_error("diks_power_study: empty threshold grid");
  if (cfg.reps == 0) throw std::domain_error("diks_power_study: need replications");
  const auto normal = Distribution::gaussian(0.0, 1.0);
  const auto t5 = Distribution::student_t(5);
  ExperimentReport rep;
  rep.experiment = "power-diks";
  rep.seed = rng.master_seed();
  rep.replications = cfg.reps;
  rep.metadata["c"] = format_double(cfg.c);
  rep.metadata["alpha"] = format_double(cfg.alpha);
  rep.metadata["estimator"] = to_string(cfg.estimator);
  rep.metadata["weight"] = "indicator_left";

  for (std::size_t g = 0; g < cfg.r_grid.size(); ++g) {
    const double r = cfg.r_grid[g];
    const std::size_t n = diks_sample_size(r, cfg.c, cfg.min_n);
    rep.metadata["n[r=" + grid_label(r) + "]"] = std::to_string(n);
    const auto w = WeightFunction::indicator_left(r);
    const WeightedScorer sn(normal, w);
    const WeightedScorer st(t5, w);
    std::vector<std::array<TwoSidedOutcome, 5>> outcomes(cfg.reps);
    const RngStream grid_rng = rng.substream(g);
    parallel_for(cfg.reps, threads, [&](std::size_t i) {
      RngStream s = grid_rng.substream(i);
      const auto y = normal.sample(s, n);
      std::vector<double> a, b;
      for (std::size_t k = 0; k < kPowerRules.size(); ++k) {
        outcomes[i][k] = compare_two_sided(sn, st, kPowerRules[k], y, 1, cfg.estimator, cfg.alpha, a, b);
      }
    });
    for (std::size_t k = 0; k < kPowerRules.size(); ++k) {
      std::size_t good = 0, bad = 0, degenerate = 0, failed = 0;
      for (const auto& o : outcomes) {
        good += o[k].preferred == Preferred::F;
        bad += o[k].preferred == Preferred::G;
        degenerate += o[k].degenerate;
        failed += o[k].failed;
      }
      const auto fg = frequency(good, cfg.reps);
      const auto fb = frequency(bad, cfg.reps);
      const auto rule = to_string(kPowerRules[k]);
      rep.add("favor_normal", rule, r, fg.value, fg.se);
      rep.add("favor_t", rule, r, fb.value, fb.se);
      if (degenerate > 0) {
        rep.metadata["degenerate." + rule + "[r=" + grid_label(r) + "]"] = std::to_string(degenerate);
      }
      if (failed > 0) {
        rep.metadata["failed." + rule + "[r=" + grid_label(r) + "]"] = std::to_string(failed);
      }
    }
  }
  return rep;
}

ExperimentReport np_study(const NPConfig& cfg, const RngStream& rng, unsigned threads) {
  if (cfg.r_grid.empty()) throw std::domain_error("np_study: empty threshold grid");
  if (cfg.reps == 0) throw std::domain_error("np_study: need replications");
  const auto f0 = Distribution::gaussian(0.0, 1.0);
  const auto f1 = Distribution::student_t(5);
  ExperimentReport rep;
  rep.experiment = "power-np";
  rep.seed = rng.master_seed();
  rep.replications = cfg.reps;
  rep.metadata["c"] = format_double(cfg.c);
  rep.metadata["alpha"] = format_double(cfg.alpha);
  rep.metadata["estimator"] = to_string(cfg.estimator);
  rep.metadata["weight"] = "indicator_left";
  rep.metadata["calibration_reps"] = std::to_string(std::max<std::size_t>(cfg.calibration_reps, 1000));

  const std::array<ScoreRule, 5> rules = {ScoreRule::crps, ScoreRule::twcrps, ScoreRule::logs,
                                          ScoreRule::cl, ScoreRule::csl};
  for (std::size_t g = 0; g < cfg.r_grid.size(); ++g) {
    const double r = cfg.r_grid[g];
    const std::size_t n = diks_sample_size(r, cfg.c, cfg.min_n);
    const RngStream grid_rng = rng.substream(g);
    const double critical = lrt_calibrate(f0, f1, n, cfg.alpha, std::max<std::size_t>(cfg.calibration_reps, 1000),
                                          grid_rng.substream(0), threads);
    rep.metadata["n[r=" + grid_label(r) + "]"] = std::to_string(n);
    rep.metadata["lrt_critical[r=" + grid_label(r) + "]"] = format_double(critical);

    const auto w = WeightFunction::indicator_left(r);
    const WeightedScorer s0(f0, w);
    const WeightedScorer s1(f1, w);
    // [0] = LRT, [1..5] = DM rules; under the null and under the alternative
    std::vector<std::array<char, 6>> level(cfg.reps), power(cfg.reps);
    const RngStream null_rng = grid_rng.substream(1);
    const RngStream alt_rng = grid_rng.substream(2);
    parallel_for(cfg.reps, threads, [&](std::size_t i) {
      std::vector<double> a, b;
      auto run = [&](const std::vector<double>& y, std::array<char, 6>& hits) {
        hits[0] = log_likelihood_ratio(f0, f1, y) > critical;
        for (std::size_t k = 0; k < rules.size(); ++k) {
          try {
            score_sample(s0, rules[k], y, a);
            score_sample(s1, rules[k], y, b);
            hits[k + 1] = one_sided_rejects(a, b, 1, cfg.estimator, cfg.alpha);
          } catch (const std::domain_error&) {
            hits[k + 1] = 0;
          }
        }
      };
      RngStream s_null = null_rng.substream(i);
      RngStream s_alt = alt_rng.substream(i);
      run(f0.sample(s_null, n), level[i]);
      run(f1.sample(s_alt, n), power[i]);
    });
    auto column = [&](const std::vector<std::array<char, 6>>& m, std::size_t k) {
      std::vector<char> v(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) v[i] = m[i][k];
      return v;
    };
    for (std::size_t k = 0; k < 6; ++k) {
      const std::string rule = k == 0 ? "LRT" : to_string(rules[k - 1]);
      const auto pw = column(power, k);
      const auto lv = column(level, k);
      const auto fp = frequency(static_cast<std::size_t>(std::count(pw.begin(), pw.end(), 1)), cfg.reps);
      const auto fl = frequency(static_cast<std::size_t>(std::count(lv.begin(), lv.end(), 1)), cfg.reps);
      rep.add("power", rule, r, fp.value, fp.se);
      rep.add("level", rule, r, fl.value, fl.se);
    }
    const auto diff = paired_difference(column(power, 3), column(power, 0));
    rep.add("power", "LogS-LRT", r, diff.value, diff.se);
  }
  return rep;
}

Distribution normal_heavy_mixture() {
  return Distribution::mixture({0.5, 0.5},
                               {Distribution::gaussian(0.0, 1.0), Distribution::heavy_tail()});
}

ExperimentReport scenario_ab_study(const ScenarioConfig& cfg, const RngStream& rng,
                                   unsigned threads) {
  if (cfg.r_grid.empty()) throw std::domain_error("scenario_ab_study: empty threshold grid");
  if (cfg.reps == 0 || cfg.n < 2) throw std::domain_error("scenario_ab_study: need reps and n >= 2");
  const auto phi = Distribution::gaussian(0.0, 1.0);
  const auto h = Distribution::heavy_tail();
  const auto f = normal_heavy_mixture();

  ExperimentReport rep;
  rep.experiment = "scenario-ab";
  rep.seed = rng.master_seed();
  rep.replications = cfg.reps;
  rep.metadata["n"] = std::to_string(cfg.n);
  rep.metadata["alpha"] = format_double(cfg.alpha);
  rep.metadata["estimator"] = to_string(cfg.estimator);
  rep.metadata["k"] = std::to_string(cfg.k);
  rep.metadata["weight"] = "indicator_right";

  struct Scenario {
    std::string name;
    Distribution truth;
    Distribution rival;  // compared against F
    std::string rival_label;
  };
  const std::array<Scenario, 2> scenarios = {Scenario{"A", phi, h, "H"},
                                             Scenario{"B", h, phi, "Phi"}};
  const std::array<ScoreRule, 3> weighted = {ScoreRule::twcrps, ScoreRule::cl, ScoreRule::csl};

  for (std::size_t sc = 0; sc < scenarios.size(); ++sc) {
    const auto& S = scenarios[sc];
    const WeightedScorer f_plain(f, WeightFunction::constant_one());
    const WeightedScorer g_plain(S.rival, WeightFunction::constant_one());
    std::vector<WeightedScorer> f_w, g_w;
    for (double r : cfg.r_grid) {
      f_w.emplace_back(f, WeightFunction::indicator_right(r));
      g_w.emplace_back(S.rival, WeightFunction::indicator_right(r));
    }
    const std::size_t cols = 2 + weighted.size() * cfg.r_grid.size();
    std::vector<std::vector<TwoSidedOutcome>> outcomes(cfg.reps, std::vector<TwoSidedOutcome>(cols));
    const RngStream sc_rng = rng.substream(sc);
    parallel_for(cfg.reps, threads, [&](std::size_t i) {
      RngStream s = sc_rng.substream(i);
      const auto y = S.truth.sample(s, cfg.n);
      std::vector<double> a, b;
      outcomes[i][0] =
          compare_two_sided(f_plain, g_plain, ScoreRule::crps, y, cfg.k, cfg.estimator, cfg.alpha, a, b);
      outcomes[i][1] =
          compare_two_sided(f_plain, g_plain, ScoreRule::logs, y, cfg.k, cfg.estimator, cfg.alpha, a, b);
      for (std::size_t g = 0; g < cfg.r_grid.size(); ++g) {
        for (std::size_t k = 0; k < weighted.size(); ++k) {
          outcomes[i][2 + g * weighted.size() + k] = compare_two_sided(
              f_w[g], g_w[g], weighted[k], y, cfg.k, cfg.estimator, cfg.alpha, a, b);
        }
      }
    });

    auto emit = [&](std::size_t col, const std::string& rule, double r) {
      std::size_t good = 0, bad = 0, degenerate = 0, failed = 0;
      for (const auto& o : outcomes) {
        good += o[col].preferred == Preferred::F;
        bad += o[col].preferred == Preferred::G;
        degenerate += o[col].degenerate;
        failed += o[col].failed;
      }
      const auto fg = frequency(good, cfg.reps);
      const auto fb = frequency(bad, cfg.reps);
      rep.add(S.name + ":favor_F", rule, r, fg.value, fg.se);
      rep.add(S.name + ":favor_" + S.rival_label, rule, r, fb.value, fb.se);
      if (degenerate > 0) {
        rep.metadata["degenerate." + S.name + "." + rule +
                     (std::isnan(r) ? std::string() : "[r=" + grid_label(r) + "]")] =
            std::to_string(degenerate);
      }
      if (failed > 0) {
        rep.metadata["failed." + S.name + "." + rule +
                     (std::isnan(r) ? std::string() : "[r=" + grid_label(r) + "]")] =
            std::to_string(failed);
      }
    };
    emit(0, "CRPS", kNA);
    emit(1, "LogS", kNA);
    for (std::size_t g = 0; g < cfg.r_grid.size(); ++g) {
      for (std::size_t k = 0; k < weighted.size(); ++k) {
        emit(2 + g * weighted.size() + k, to_string(weighted[k]), cfg.r_grid[g]);
      }
    }
    // paired CRPS - LogS difference in desired rejections
    std::vector<char> crps_hit(cfg.reps), logs_hit(cfg.reps);
    for (std::size_t i = 0; i < cfg.reps; ++i) {
      crps_hit[i] = outcomes[i][0].preferred == Preferred::F;
      logs_hit[i] = outcomes[i][1].preferred == Preferred::F;
    }
    const auto d = paired_difference(crps_hit, logs_hit);
    rep.add(S.name + ":favor_F", "CRPS-LogS", kNA, d.value, d.se);
  }
  return rep;
}

}  // namespace tailcast
