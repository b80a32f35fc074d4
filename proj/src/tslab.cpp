#include "tailcast/tslab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "tailcast/evaluation_tests.hpp"
#include "tailcast/format.hpp"
#include "tailcast/parallel.hpp"
#include "tailcast/weighted_scores.hpp"

namespace tailcast {
namespace {

constexpr double kNA = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Quarter label to a running index year * 4 + (q - 1).
long quarter_index(const std::string& label, std::size_t line) {
  static const std::regex pattern("^([0-9]{4})Q([1-4])$");
  std::smatch m;
  if (!std::regex_match(label, m, pattern)) {
    throw std::runtime_error("line " + std::to_string(line) + ": bad quarter label '" + label +
                             "' (expected YYYYQn)");
  }
  return std::stol(m[1]) * 4 + (std::stol(m[2]) - 1);
}

}  // namespace

QuarterlySeries read_series(std::istream& is, const std::string& column) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw std::runtime_error("series: empty input");
  const auto header = split_csv(trim(line));
  const auto find = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("series: header lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t qcol = find("quarter");
  const std::size_t vcol = find(column);

  QuarterlySeries out;
  long previous = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(trim(line));
    if (cells.size() != header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells, found " +
                               std::to_string(cells.size()));
    }
    const std::string& q = cells[qcol];
    const long idx = quarter_index(q, line_no);
    if (!out.quarters.empty()) {
      if (idx == previous) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": duplicated quarter label " + q);
      }
      if (idx < previous) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": quarter " + q +
                                 " is out of order");
      }
      if (idx != previous + 1) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": missing quarters before " + q);
      }
    }
    const auto v = parse_double(cells[vcol]);
    if (cells[vcol].empty() || !v || !std::isfinite(*v)) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": missing or invalid value '" +
                               cells[vcol] + "'");
    }
    out.quarters.push_back(q);
    out.values.push_back(*v);
    previous = idx;
  }
  return out;
}

QuarterlySeries load_series(const std::filesystem::path& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open series file " + path.string());
  try {
    return read_series(in, column);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_series(std::ostream& os, const QuarterlySeries& series) {
  if (series.quarters.size() != series.values.size()) {
    throw std::invalid_argument("write_series: label and value counts differ");
  }
  os << "quarter,value\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    os << series.quarters[i] << ',' << format_double(series.values[i]) << '\n';
  }
}

std::vector<std::string> quarter_range(int year, int quarter, std::size_t n) {
  if (quarter < 1 || quarter > 4) throw std::domain_error("quarter must be 1..4");
  std::vector<std::string> out;
  out.reserve(n);
  long idx = static_cast<long>(year) * 4 + quarter - 1;
  for (std::size_t i = 0; i < n; ++i, ++idx) {
    out.push_back(std::to_string(idx / 4) + "Q" + std::to_string(idx % 4 + 1));
  }
  return out;
}

Eigen::VectorXd ARPosterior::coef_variance() const {
  if (!(shape > 1.0)) throw std::domain_error("posterior variance needs shape > 1");
  return (scale / (shape - 1.0)) * coef_scale.diagonal();
}

ARPosterior fit_ar(std::span<const double> y, int p, std::size_t m, const ConjugatePrior& prior,
                   const RngStream& rng) {
  if (p < 1) throw std::domain_error("fit_ar: lag order p must be at least 1");
  if (m < 1) throw std::domain_error("fit_ar: need at least one draw");
  if (!(prior.coef_var > 0.0 && prior.shape > 0.0 && prior.scale > 0.0)) {
    throw std::domain_error("fit_ar: prior hyperparameters must be positive");
  }
  const auto pp = static_cast<std::size_t>(p);
  if (y.size() <= pp + 10) {
    throw std::domain_error("fit_ar: series of length " + std::to_string(y.size()) +
                            " is too short for p = " + std::to_string(p));
  }
  const Eigen::Index T = static_cast<Eigen::Index>(y.size() - pp);
  const Eigen::Index d = p + 1;
  Eigen::MatrixXd X(T, d);
  Eigen::VectorXd z(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    const std::size_t at = pp + static_cast<std::size_t>(t);
    z(t) = y[at];
    X(t, 0) = 1.0;
    for (int i = 1; i <= p; ++i) X(t, i) = y[at - static_cast<std::size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < d) throw std::domain_error("fit_ar: rank-deficient regressor matrix");

  const Eigen::MatrixXd precision =
      X.transpose() * X + Eigen::MatrixXd::Identity(d, d) / prior.coef_var;
  const Eigen::LLT<Eigen::MatrixXd> llt(precision);
  ARPosterior post;
  post.p = p;
  post.coef_scale = llt.solve(Eigen::MatrixXd::Identity(d, d));
  post.coef_mean = llt.solve(X.transpose() * z);
  post.shape = prior.shape + 0.5 * static_cast<double>(T);
  post.scale = prior.scale + 0.5 * (z.squaredNorm() - post.coef_mean.dot(precision * post.coef_mean));
  if (!(post.scale > 0.0)) throw std::domain_error("fit_ar: degenerate posterior scale");

  const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(post.coef_scale).matrixL();
  post.draws.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    RngStream s = rng.substream(j);
    const double sigma2 = post.scale / s.gamma(post.shape);
    const double sigma = std::sqrt(sigma2);
    Eigen::VectorXd e(d);
    for (Eigen::Index i = 0; i < d; ++i) e(i) = s.normal();
    post.draws[j] = {post.coef_mean + sigma * (L * e), sigma};
  }
  return post;
}

double MixturePredictive::mean() const {
  if (means.empty()) throw std::domain_error("empty mixture");
  return std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
}

double MixturePredictive::variance() const {
  const double mu = mean();
  double acc = 0.0;
  for (std::size_t j = 0; j < means.size(); ++j) {
    acc += sds[j] * sds[j] + (means[j] - mu) * (means[j] - mu);
  }
  return acc / static_cast<double>(means.size());
}

Distribution MixturePredictive::distribution() const {
  if (means.empty()) throw std::domain_error("empty mixture");
  if (means.size() == 1) return Distribution::gaussian(means[0], sds[0]);
  std::vector<Distribution> comps;
  comps.reserve(means.size());
  for (std::size_t j = 0; j < means.size(); ++j) comps.push_back(Distribution::gaussian(means[j], sds[j]));
  std::vector<double> w(means.size(), 1.0 / static_cast<double>(means.size()));
  return Distribution::mixture(std::move(w), std::move(comps));
}

std::vector<double> MixturePredictive::sample_one_per_component(RngStream& rng) const {
  std::vector<double> out(means.size());
  for (std::size_t j = 0; j < means.size(); ++j) out[j] = means[j] + sds[j] * rng.normal();
  return out;
}

MixturePredictive predict(const ARPosterior& post, std::span<const double> recent, int k,
                          std::size_t paths_per_draw, const RngStream& rng) {
  if (k < 1) throw std::domain_error("predict: horizon k must be at least 1");
  const auto pp = static_cast<std::size_t>(post.p);
  if (recent.size() < pp) throw std::domain_error("predict: need the last p observations");
  if (k > 1 && paths_per_draw < 2) throw std::domain_error("predict: need at least two paths per draw");
  const auto lags = recent.last(pp);

  MixturePredictive out;
  out.means.resize(post.draws.size());
  out.sds.resize(post.draws.size());
  std::vector<double> hist(pp + static_cast<std::size_t>(k));
  std::vector<double> terminal(paths_per_draw);
  for (std::size_t j = 0; j < post.draws.size(); ++j) {
    const auto& draw = post.draws[j];
    const auto step = [&](std::size_t at) {
      double v = draw.coef(0);
      for (std::size_t i = 1; i <= pp; ++i) v += draw.coef(static_cast<Eigen::Index>(i)) * hist[at - i];
      return v;
    };
    std::copy(lags.begin(), lags.end(), hist.begin());
    if (k == 1) {
      out.means[j] = step(pp);
      out.sds[j] = draw.sigma;
      continue;
    }
    RngStream s = rng.substream(j);
    for (auto& t : terminal) {
      for (std::size_t h = 0; h < static_cast<std::size_t>(k); ++h) {
        hist[pp + h] = step(pp + h) + draw.sigma * s.normal();
      }
      t = hist.back();
    }
    const auto ms = mean_and_se(terminal);
    const double n = static_cast<double>(terminal.size());
    out.means[j] = ms.mean;
    out.sds[j] = ms.standard_error * std::sqrt(n);
  }
  return out;
}

double quadratic_logs(std::span<const double> sample, double y) {
  if (sample.size() < 2) throw std::domain_error("quadratic_logs: need at least two draws");
  const auto ms = mean_and_se(sample);
  const double var = ms.standard_error * ms.standard_error * static_cast<double>(sample.size());
  if (!(var > 0.0)) throw std::domain_error("quadratic_logs: zero sample variance");
  const double r = y - ms.mean;
  return 0.5 * std::log(2.0 * std::numbers::pi * var) + 0.5 * r * r / var;
}

double quadratic_score(ScoreRule rule, std::span<const double> sample, double y) {
  switch (rule) {
    case ScoreRule::logs: return quadratic_logs(sample, y);
    case ScoreRule::dss: {
      const double ql = quadratic_logs(sample, y);
      return 2.0 * ql - std::log(2.0 * std::numbers::pi);
    }
    case ScoreRule::cl:
    case ScoreRule::csl:
      throw std::invalid_argument("quadratic approximation inside " + to_string(rule) +
                                  " yields an improper scoring rule");
    default:
      throw std::invalid_argument("no quadratic approximation for " + to_string(rule));
  }
}

std::vector<double> simulate_ar(std::span<const double> coef, double sigma, std::size_t n,
                                const RngStream& rng, std::size_t burn_in) {
  if (coef.size() < 2) throw std::domain_error("simulate_ar: need b_0 and at least one lag");
  if (!(sigma > 0.0)) throw std::domain_error("simulate_ar: sigma must be positive");
  const std::size_t p = coef.size() - 1;
  RngStream s = rng;
  std::vector<double> y(p + burn_in + n, 0.0);
  for (std::size_t t = p; t < y.size(); ++t) {
    double v = coef[0];
    for (std::size_t i = 1; i <= p; ++i) v += coef[i] * y[t - i];
    y[t] = v + sigma * s.normal();
  }
  return {y.end() - static_cast<std::ptrdiff_t>(n), y.end()};
}

namespace {

const std::vector<std::string> kRollingRules = {"CRPS", "LogS", "twCRPS_left", "twCRPS_right"};

std::string horizon_tag(int k) { return "h" + std::to_string(k); }

RestrictedMean restricted_or_na(std::span<const double> v, std::span<const double> y,
                                const OutcomePredicate& pred) {
  try {
    return restricted_summary(v, y, pred);
  } catch (const NoQualifyingCases&) {
    return {kNA, kNA, 0};
  }
}

}  // namespace

RollingResult rolling_eval(const QuarterlySeries& series, const RollingConfig& cfg,
                           const RngStream& rng, unsigned threads) {
  if (cfg.p < 1) throw std::domain_error("rolling_eval: p must be at least 1");
  if (cfg.horizons.empty()) throw std::domain_error("rolling_eval: no horizons");
  const auto& y = series.values;
  const std::size_t N = y.size();
  const std::size_t min_train = static_cast<std::size_t>(cfg.p) + 11;
  if (cfg.start_index < min_train) {
    throw std::domain_error("rolling_eval: start index " + std::to_string(cfg.start_index) +
                            " leaves fewer than p + 11 training points");
  }
  const std::string ar = "AR(" + std::to_string(cfg.p) + ")";
  const std::string clim = "climatology";
  const auto w_left = WeightFunction::indicator_left(cfg.lower_threshold);
  const auto w_right = WeightFunction::indicator_right(cfg.upper_threshold);
  const auto lower = OutcomePredicate::at_most(cfg.lower_threshold);
  const auto upper = OutcomePredicate::at_least(cfg.upper_threshold);

  RollingResult res;
  auto& rep = res.report;
  rep.experiment = "ar-eval";
  rep.seed = rng.master_seed();
  rep.replications = cfg.m;
  rep.metadata["p"] = std::to_string(cfg.p);
  rep.metadata["m"] = std::to_string(cfg.m);
  rep.metadata["paths_per_draw"] = std::to_string(cfg.paths_per_draw);
  rep.metadata["start_index"] = std::to_string(cfg.start_index);
  rep.metadata["series_length"] = std::to_string(N);
  rep.metadata["lower_threshold"] = format_double(cfg.lower_threshold);
  rep.metadata["upper_threshold"] = format_double(cfg.upper_threshold);

  for (std::size_t hi = 0; hi < cfg.horizons.size(); ++hi) {
    const int k = cfg.horizons[hi];
    if (k < 1) throw std::domain_error("rolling_eval: horizons must be at least 1");
    const auto ku = static_cast<std::size_t>(k);
    if (cfg.start_index + ku > N) {
      throw std::domain_error("rolling_eval: insufficient data for horizon " + std::to_string(k));
    }
    const std::size_t origins = N - ku - cfg.start_index + 1;
    // [model][rule][origin]
    std::vector<std::vector<std::vector<double>>> sc(
        2, std::vector<std::vector<double>>(kRollingRules.size(), std::vector<double>(origins)));
    std::vector<double> target(origins);
    const RngStream h_rng = rng.substream(hi);
    parallel_for(origins, threads, [&](std::size_t o) {
      const std::size_t t = cfg.start_index + o;
      const std::span<const double> train(y.data(), t);
      const double obs = y[t + ku - 1];
      target[o] = obs;
      const RngStream s = h_rng.substream(t);
      const auto post = fit_ar(train, cfg.p, cfg.m, cfg.prior, s.substream(0));
      const auto pred = predict(post, train, k, cfg.paths_per_draw, s.substream(1));
      const auto dist = pred.distribution();
      RngStream qs = s.substream(2);
      const auto draws = pred.sample_one_per_component(qs);
      sc[0][0][o] = crps(dist, obs);
      sc[0][1][o] = cfg.m >= 2 ? quadratic_logs(draws, obs) : logs(dist, obs);
      sc[0][2][o] = twcrps(dist, obs, w_left);
      sc[0][3][o] = twcrps(dist, obs, w_right);

      const auto ms = mean_and_se(train);
      const double sd = ms.standard_error * std::sqrt(static_cast<double>(train.size()));
      const auto g = Distribution::gaussian(ms.mean, sd);
      sc[1][0][o] = crps(g, obs);
      sc[1][1][o] = logs(g, obs);
      sc[1][2][o] = twcrps(g, obs, w_left);
      sc[1][3][o] = twcrps(g, obs, w_right);
    });

    const std::string tag = horizon_tag(k);
    res.targets["h=" + std::to_string(k)] = target;
    rep.metadata["origins@" + tag] = std::to_string(origins);
    rep.metadata["first_target@" + tag] = series.quarters.empty() ? std::to_string(cfg.start_index + ku - 1)
                                                                   : series.quarters[cfg.start_index + ku - 1];

    const std::array<std::string, 2> models = {ar, clim};
    // restricted means: [model][CRPS, LogS][lower, upper]
    double restricted[2][2][2];
    for (std::size_t mi = 0; mi < 2; ++mi) {
      const std::string who = models[mi] + "@" + tag;
      for (std::size_t ri = 0; ri < kRollingRules.size(); ++ri) {
        const auto& v = sc[mi][ri];
        res.scores[models[mi] + "|" + kRollingRules[ri] + "|h=" + std::to_string(k)] = v;
        const auto s = mean_and_se(v);
        double thr = kNA;
        if (ri == 2) thr = cfg.lower_threshold;
        if (ri == 3) thr = cfg.upper_threshold;
        rep.add(who, kRollingRules[ri], thr, s.mean, s.standard_error);
      }
      for (std::size_t ri = 0; ri < 2; ++ri) {
        for (std::size_t side = 0; side < 2; ++side) {
          const auto& pred = side == 0 ? lower : upper;
          const double thr = side == 0 ? cfg.lower_threshold : cfg.upper_threshold;
          const std::string rule = "r" + kRollingRules[ri] + (side == 0 ? "_left" : "_right");
          const auto r = restricted_or_na(sc[mi][ri], target, pred);
          if (r.count == 0) {
            restricted[mi][ri][side] = kNA;
            rep.add(who, rule, thr, kNA, kNA);
          } else {
            restricted[mi][ri][side] = r.mean;
            rep.add(who, rule, thr, r.mean, r.standard_error);
          }
          rep.metadata["restricted_cases@" + tag + (side == 0 ? ".left" : ".right")] =
              std::to_string(r.count);
        }
      }
    }

    const std::string pair = ar + "-" + clim + "@" + tag;
    for (std::size_t ri = 0; ri < kRollingRules.size(); ++ri) {
      double p_two = kNA, stat = kNA;
      try {
        const auto d = dm_test(sc[0][ri], sc[1][ri], ku, VarianceEstimator::kdep, cfg.alpha);
        if (!d.degenerate) {
          p_two = d.p_two_sided;
          stat = d.statistic;
        }
      } catch (const std::domain_error& e) {
        rep.metadata["dm_failure@" + tag + "." + kRollingRules[ri]] = e.what();
      }
      rep.add(pair, "DM_stat:" + kRollingRules[ri], kNA, stat, kNA);
      rep.add(pair, "DM_p:" + kRollingRules[ri], kNA, p_two, kNA);
    }

    for (std::size_t ri = 0; ri < 2; ++ri) {
      const double full_ar = rep.at(ar + "@" + tag, kRollingRules[ri], kNA).value;
      const double full_cl = rep.at(clim + "@" + tag, kRollingRules[ri], kNA).value;
      const bool ar_best = full_ar < full_cl;
      for (std::size_t side = 0; side < 2; ++side) {
        const double a = restricted[0][ri][side];
        const double c = restricted[1][ri][side];
        std::string flag = "NA";
        if (!std::isnan(a) && !std::isnan(c)) flag = ((a < c) != ar_best) ? "yes" : "no";
        rep.metadata["rank_reversal@" + tag + "." + kRollingRules[ri] + (side == 0 ? "_left" : "_right")] =
            flag;
      }
    }
  }
  return res;
}

}  // namespace tailcast
