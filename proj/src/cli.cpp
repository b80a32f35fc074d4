#include "tailcast/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "tailcast/evaluation_tests.hpp"
#include "tailcast/format.hpp"
#include "tailcast/parallel.hpp"
#include "tailcast/scores.hpp"
#include "tailcast/simlab.hpp"
#include "tailcast/tslab.hpp"
#include "tailcast/weighted_scores.hpp"

namespace tailcast::cli {
namespace {

const std::vector<std::string> kCommands = {"tables",     "sweep-sigma", "power-diks",
                                            "power-np",   "scenario-ab", "score",
                                            "dm-test",    "ar-eval",     "impropriety-demo"};

class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> default_sigma_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 19; ++i) g.push_back(0.05 * i);
  return g;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  const int count = static_cast<int>(std::lround((hi - lo) / step));
  for (int i = 0; i <= count; ++i) g.push_back(lo + step * i);
  return g;
}

std::vector<double> default_r_grid(const std::string& command) {
  if (command == "scenario-ab") return grid(0.0, 3.0, 0.5);
  return grid(-3.0, 3.0, 0.5);
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw UsageError("--" + field + ": " + what);
}

void validate(RunConfig& cfg) {
  require(cfg.format == "csv" || cfg.format == "json", "format", "must be csv or json, got '" + cfg.format + "'");
  require(cfg.threads >= 1, "threads", "must be at least 1");
  require(cfg.sigma2 > 0.0 && cfg.sigma2 < 1.0, "sigma2", "must lie in (0, 1), got " + format_double(cfg.sigma2));
  require(std::isfinite(cfg.threshold), "threshold", "must be finite");
  require(cfg.gaussian_scale > 0.0, "gaussian-scale", "must be positive");
  for (double s : cfg.sigma_grid) {
    require(s > 0.0 && s < 1.0, "sigma-grid", "values must lie in (0, 1), got " + format_double(s));
  }
  for (double r : cfg.r_grid) require(std::isfinite(r), "r-grid", "values must be finite");
  require(cfg.alpha > 0.0 && cfg.alpha < 1.0, "alpha", "must lie in (0, 1), got " + format_double(cfg.alpha));
  require(cfg.c > 0.0, "c", "must be positive, got " + format_double(cfg.c));
  require(cfg.n >= 2, "n", "must be at least 2");
  require(cfg.k >= 1, "k", "must be at least 1");
  require(cfg.calibration_reps >= 1000, "calibration-reps", "must be at least 1000");
  if (!cfg.estimator.empty()) {
    try {
      parse_variance_estimator(cfg.estimator);
    } catch (const std::exception&) {
      throw UsageError("--estimator: must be kdep or hac, got '" + cfg.estimator + "'");
    }
  }
  require(cfg.s > 0.0, "s", "must be positive");
  require(cfg.p >= 1, "p", "must be at least 1");
  require(cfg.m >= 1, "m", "must be at least 1");
  for (int h : cfg.horizons) require(h >= 1, "horizons", "values must be at least 1");
  require(cfg.paths_per_draw >= 2, "paths", "must be at least 2");
  require(cfg.synthetic_length >= 30, "length", "must be at least 30");

  if (cfg.command == "score") {
    require(!cfg.forecast.empty(), "forecast", "required for score");
    require(!cfg.rule.empty(), "rule", "required for score");
    require(!cfg.observations_path.empty() || !cfg.y.empty(), "y", "score needs --y values or --observations");
    try {
      parse_score_rule(cfg.rule);
      parse_weight_kind(cfg.weight);
    } catch (const std::exception& e) {
      throw UsageError(std::string("--rule/--weight: ") + e.what());
    }
  }
  if (cfg.command == "dm-test") {
    require(!cfg.scores_f.empty(), "scores-f", "required for dm-test");
    require(!cfg.scores_g.empty(), "scores-g", "required for dm-test");
  }
  if (cfg.sigma_grid.empty()) cfg.sigma_grid = default_sigma_grid();
  if (cfg.r_grid.empty()) cfg.r_grid = default_r_grid(cfg.command);
  if (cfg.horizons.empty()) cfg.horizons = {1, 4};
}

std::size_t reps_or(const RunConfig& cfg, std::size_t fallback) {
  return cfg.replications > 0 ? cfg.replications : fallback;
}

VarianceEstimator estimator_or(const RunConfig& cfg, VarianceEstimator fallback) {
  return cfg.estimator.empty() ? fallback : parse_variance_estimator(cfg.estimator);
}

std::vector<double> split_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto v = parse_double(tok);
    if (!v) throw UsageError("--forecast: bad number '" + tok + "' in " + what);
    out.push_back(*v);
  }
  return out;
}

// gaussian:m,s | student_t:nu | uniform:a,b | heavy_tail | mixture_fh
Distribution parse_forecast(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{} : split_numbers(spec.substr(colon + 1), spec);
  const auto arity = [&](std::size_t n) {
    if (args.size() != n) {
      throw UsageError("--forecast: '" + name + "' takes " + std::to_string(n) + " parameters");
    }
  };
  try {
    if (name == "gaussian" || name == "normal") {
      if (args.empty()) return Distribution::gaussian(0.0, 1.0);
      arity(2);
      return Distribution::gaussian(args[0], args[1]);
    }
    if (name == "student_t") {
      arity(1);
      if (args[0] != std::floor(args[0])) throw UsageError("--forecast: student_t needs integer degrees of freedom");
      return Distribution::student_t(static_cast<int>(args[0]));
    }
    if (name == "uniform") {
      arity(2);
      return Distribution::uniform(args[0], args[1]);
    }
    if (name == "heavy_tail") {
      arity(0);
      return Distribution::heavy_tail();
    }
    if (name == "mixture_fh") {
      arity(0);
      return normal_heavy_mixture();
    }
  } catch (const std::domain_error& e) {
    throw UsageError(std::string("--forecast: ") + e.what());
  }
  throw UsageError("--forecast: unknown family '" + name + "'");
}

WeightFunction make_weight(const RunConfig& cfg) {
  switch (parse_weight_kind(cfg.weight)) {
    case WeightFunction::Kind::constant_one: return WeightFunction::constant_one();
    case WeightFunction::Kind::indicator_right: return WeightFunction::indicator_right(cfg.r);
    case WeightFunction::Kind::indicator_left: return WeightFunction::indicator_left(cfg.r);
    case WeightFunction::Kind::gaussian_right: return WeightFunction::gaussian_right(cfg.r, cfg.s);
    case WeightFunction::Kind::gaussian_left: return WeightFunction::gaussian_left(cfg.r, cfg.s);
  }
  return WeightFunction::constant_one();
}

// One value per line; a non-numeric first line is a header. CSV files with an
// `observation` column are read through that column.
std::vector<double> read_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open observations file " + path);
  std::string line;
  std::vector<double> out;
  std::size_t col = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line_no == 1 && !parse_double(cells[0])) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (parse_double(cells[i]).has_value()) continue;
        std::string name = cells[i];
        while (!name.empty() && (name.back() == '\r' || name.back() == ' ')) name.pop_back();
        if (name == "observation" || name == "y" || name == "value") col = i;
      }
      continue;
    }
    if (col >= cells.size()) throw std::runtime_error(path + ": line " + std::to_string(line_no) + " has too few cells");
    const auto v = parse_double(cells[col]);
    if (!v || std::isnan(*v)) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": bad observation '" + cells[col] + "'");
    }
    out.push_back(*v);
  }
  if (out.empty()) throw std::runtime_error(path + ": no observations");
  return out;
}

ScoreSeries read_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open score file " + path);
  try {
    return ScoreSeries::read_csv(in, "", path).scores;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string emit(const ExperimentReport& rep, const RunConfig& cfg, std::size_t* cells) {
  if (cells) *cells = rep.rows.size();
  return cfg.format == "json" ? rep.to_json() : rep.to_csv();
}

std::string run_score(const RunConfig& cfg, std::size_t* cells) {
  const auto f = parse_forecast(cfg.forecast);
  const auto rule = parse_score_rule(cfg.rule);
  const auto w = make_weight(cfg);
  const std::vector<double> y = cfg.observations_path.empty() ? cfg.y : read_observations(cfg.observations_path);
  std::vector<double> v(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    switch (rule) {
      case ScoreRule::logs: v[i] = logs(f, y[i]); break;
      case ScoreRule::crps: v[i] = crps(f, y[i]); break;
      case ScoreRule::brier: v[i] = brier(f, y[i], cfg.z); break;
      case ScoreRule::discrete_ls: v[i] = discrete_ls(f, y[i], cfg.z); break;
      case ScoreRule::dss: v[i] = dss(f, y[i]); break;
      case ScoreRule::twcrps: v[i] = twcrps(f, y[i], w); break;
      case ScoreRule::cl: v[i] = cl(f, y[i], w); break;
      case ScoreRule::csl: v[i] = csl(f, y[i], w); break;
      case ScoreRule::twcrls: v[i] = twcrls(f, y[i], w); break;
      case ScoreRule::squared_error: v[i] = point_scores(f.mean(), y[i]).squared_error; break;
      case ScoreRule::absolute_error: v[i] = point_scores(f.quantile(0.5), y[i]).absolute_error; break;
    }
  }
  const ScoreSeries series(v, to_string(rule), f.describe());
  if (cells) *cells = v.size();
  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["rule"] = to_string(rule);
    j["forecast"] = f.describe();
    j["weight"] = w.label();
    j["mean"] = series.mean();
    j["standard_error"] = series.standard_error();
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < v.size(); ++i) {
      rows.push_back({{"case_index", i}, {"observation", y[i]},
                      {"score", std::isfinite(v[i]) ? nlohmann::ordered_json(v[i]) : nlohmann::ordered_json("inf")}});
    }
    j["scores"] = std::move(rows);
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  series.write_csv(os, y);
  return os.str();
}

std::string run_dm(const RunConfig& cfg, std::size_t* cells) {
  const auto sf = read_scores(cfg.scores_f);
  const auto sg = read_scores(cfg.scores_g);
  const auto r = dm_test(sf, sg, cfg.k, estimator_or(cfg, VarianceEstimator::kdep), cfg.alpha);
  if (cells) *cells = 1;
  return r.to_json() + "\n";
}

std::string run_impropriety(const RunConfig& cfg, std::ostream& err, std::size_t* cells) {
  struct Case {
    QuadraticRule rule;
    std::string name;
    double mean;
    double sd;
  };
  const std::array<Case, 2> demo = {Case{QuadraticRule::cl_q, "CL_q", 1.314, 0.252},
                                    Case{QuadraticRule::csl_q, "CSL_q", 0.540, 0.589}};
  const auto w = WeightFunction::indicator_right(1.0);
  const std::size_t draws = reps_or(cfg, 1000000);
  constexpr std::size_t kChunks = 64;
  const RngStream rng(cfg.seed, 0);
  const double half = std::sqrt(3.0);

  ExperimentReport rep;
  rep.experiment = "impropriety-demo";
  rep.seed = cfg.seed;
  rep.replications = draws;
  rep.metadata["truth"] = "uniform(-sqrt3,sqrt3)";
  rep.metadata["weight"] = w.label();
  for (std::size_t ci = 0; ci < demo.size(); ++ci) {
    const auto& d = demo[ci];
    const double analytic = quadratic_expected_difference(d.rule, d.mean, d.sd);
    std::vector<double> sum(kChunks), sum2(kChunks);
    const RngStream rule_rng = rng.substream(ci);
    parallel_for(kChunks, cfg.threads, [&](std::size_t c) {
      RngStream s = rule_rng.substream(c);
      const std::size_t count = draws / kChunks + (c < draws % kChunks ? 1 : 0);
      for (std::size_t i = 0; i < count; ++i) {
        const double y = -half + 2.0 * half * s.uniform();
        const double diff = d.rule == QuadraticRule::cl_q
                                ? cl_quadratic(d.mean, d.sd, y, w) - cl_quadratic(0.0, 1.0, y, w)
                                : csl_quadratic(d.mean, d.sd, y, w) - csl_quadratic(0.0, 1.0, y, w);
        sum[c] += diff;
        sum2[c] += diff * diff;
      }
    });
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t c = 0; c < kChunks; ++c) {
      s1 += sum[c];
      s2 += sum2[c];
    }
    const double n = static_cast<double>(draws);
    const double mc = s1 / n;
    const double se = std::sqrt(std::max(0.0, s2 / n - mc * mc) / (n - 1.0));
    const std::string who = "N(" + format_double(d.mean) + "," + format_double(d.sd) + ")";
    rep.add(who, d.name + ":analytic", 1.0, analytic, 0.0);
    rep.add(who, d.name + ":mc", 1.0, mc, se);
    rep.metadata["sign." + d.name] = analytic < 0.0 ? "negative" : (analytic > 0.0 ? "positive" : "zero");
    if (!cfg.quiet) {
      err << d.name << " expected difference " << format_double(analytic) << " ("
          << rep.metadata["sign." + d.name] << "; MC " << format_double(mc) << " +- " << format_double(se) << ")\n";
    }
  }
  return emit(rep, cfg, cells);
}

std::string run_ar(const RunConfig& cfg, std::ostream& err, std::size_t* cells) {
  QuarterlySeries series;
  std::string source;
  if (cfg.series_path.empty()) {
    const std::vector<double> coef = {0.3, 0.5, 0.2};
    series.values = simulate_ar(coef, 1.0, cfg.synthetic_length, RngStream(cfg.seed, 1u << 20));
    series.quarters = quarter_range(1960, 1, series.values.size());
    source = "synthetic AR(2) b=(0.3,0.5,0.2) sigma=1";
  } else {
    series = load_series(cfg.series_path, cfg.column);
    source = cfg.series_path;
  }
  RollingConfig rc;
  rc.p = cfg.p;
  rc.m = cfg.replications > 0 ? cfg.replications : cfg.m;
  rc.horizons = cfg.horizons;
  rc.start_index = cfg.start_index > 0 ? cfg.start_index
                                       : std::max<std::size_t>(static_cast<std::size_t>(cfg.p) + 11,
                                                               series.size() / 4);
  rc.paths_per_draw = cfg.paths_per_draw;
  rc.lower_threshold = cfg.lower_threshold;
  rc.upper_threshold = cfg.upper_threshold;
  rc.alpha = cfg.alpha;
  if (!cfg.quiet) {
    err << "ar-eval: " << series.size() << " quarters, origins from index " << rc.start_index << ", m = " << rc.m
        << "\n";
  }
  auto res = rolling_eval(series, rc, RngStream(cfg.seed, 0), cfg.threads);
  res.report.metadata["source"] = source;
  return emit(res.report, cfg, cells);
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Forecast evaluation experiments with proper and weighted scoring rules", "tailcast"};
  app.set_config("--config", "", "TOML/INI file with option values (command line wins)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("command", cfg.command, "Experiment to run")->required()->check(CLI::IsMember(kCommands));
  app.add_option("--seed", cfg.seed, "Master seed");
  app.add_option("--replications", cfg.replications, "Replications, sample size or MC draws (0: default)");
  app.add_option("--out", cfg.output_path, "Output file (default: stdout, or $" + std::string(kOutputDirEnv) + ")");
  app.add_option("--format", cfg.format, "csv or json");
  app.add_option("--threads", cfg.threads, "Worker threads");
  app.add_flag("--quiet", cfg.quiet, "Suppress progress on stderr");

  app.add_option("--sigma2", cfg.sigma2, "Noise variance of the dilemma setting");
  app.add_option("--threshold", cfg.threshold, "Extreme-event threshold");
  app.add_option("--gaussian-scale", cfg.gaussian_scale, "Scale of the Gaussian-CDF weight");
  app.add_option("--sigma-grid", cfg.sigma_grid, "Sigma values for sweep-sigma")->delimiter(',');

  app.add_option("--r-grid", cfg.r_grid, "Weight thresholds for power studies")->delimiter(',');
  app.add_option("--alpha", cfg.alpha, "Nominal level");
  app.add_option("--c", cfg.c, "Expected observations below r (power-diks, power-np)");
  app.add_option("--n", cfg.n, "Sample size (scenario-ab)");
  app.add_option("--calibration-reps", cfg.calibration_reps, "Null samples for the LRT critical value (power-np)");
  app.add_option("--k", cfg.k, "Lag truncation of the kdep variance estimator");
  app.add_option("--estimator", cfg.estimator, "kdep or hac");

  app.add_option("--forecast", cfg.forecast, "gaussian:m,s | student_t:nu | uniform:a,b | heavy_tail | mixture_fh");
  app.add_option("--rule", cfg.rule, "Scoring rule");
  app.add_option("--weight", cfg.weight, "Weight kind");
  app.add_option("--r", cfg.r, "Weight threshold");
  app.add_option("--s", cfg.s, "Gaussian weight scale");
  app.add_option("--z", cfg.z, "Brier/LS event threshold");
  app.add_option("--observations", cfg.observations_path, "File of observations");
  app.add_option("--y", cfg.y, "Observations")->delimiter(',');

  app.add_option("--scores-f", cfg.scores_f, "Score CSV of forecaster F");
  app.add_option("--scores-g", cfg.scores_g, "Score CSV of forecaster G");

  app.add_option("--series", cfg.series_path, "Quarterly CSV (quarter,value); synthetic AR(2) if absent");
  app.add_option("--column", cfg.column, "Value column of the series file");
  app.add_option("--p", cfg.p, "AR lag order");
  app.add_option("--m", cfg.m, "Posterior draws");
  app.add_option("--horizons", cfg.horizons, "Forecast horizons")->delimiter(',');
  app.add_option("--start", cfg.start_index, "First forecast origin (index)");
  app.add_option("--paths", cfg.paths_per_draw, "Simulated paths per draw for horizons > 1");
  app.add_option("--lower", cfg.lower_threshold, "Lower-tail threshold");
  app.add_option("--upper", cfg.upper_threshold, "Upper-tail threshold");
  app.add_option("--length", cfg.synthetic_length, "Length of the synthetic series");

  std::vector<std::string> store(args.begin(), args.end());
  if (store.empty()) store.push_back("tailcast");
  std::vector<char*> argv;
  for (auto& s : store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  validate(cfg);
  return cfg;
}

std::string render(const RunConfig& cfg, std::ostream& err, std::size_t* cells) {
  const RngStream rng(cfg.seed, 0);
  const auto& c = cfg.command;
  const auto note = [&](const std::string& msg) {
    if (!cfg.quiet) err << c << ": " << msg << "\n";
  };
  if (c == "tables") {
    TablesConfig t;
    t.sigma2 = cfg.sigma2;
    t.n = reps_or(cfg, 10000);
    t.threshold = cfg.threshold;
    t.gaussian_weight_scale = cfg.gaussian_scale;
    note(std::to_string(t.n) + " cases");
    return emit(run_tables(t, rng, cfg.threads), cfg, cells);
  }
  if (c == "sweep-sigma") {
    SweepConfig s;
    s.sigma_grid = cfg.sigma_grid;
    s.n = reps_or(cfg, 10000);
    s.threshold = cfg.threshold;
    note(std::to_string(s.sigma_grid.size()) + " sigma values x " + std::to_string(s.n) + " cases");
    return emit(sweep_sigma(s, rng, cfg.threads), cfg, cells);
  }
  if (c == "power-diks") {
    DiksConfig d;
    d.r_grid = cfg.r_grid;
    d.c = cfg.c;
    d.alpha = cfg.alpha;
    d.reps = reps_or(cfg, 10000);
    d.estimator = estimator_or(cfg, VarianceEstimator::hac);
    note(std::to_string(d.r_grid.size()) + " thresholds x " + std::to_string(d.reps) + " replications");
    return emit(diks_power_study(d, rng, cfg.threads), cfg, cells);
  }
  if (c == "power-np") {
    NPConfig d;
    d.r_grid = cfg.r_grid;
    d.c = cfg.c;
    d.alpha = cfg.alpha;
    d.reps = reps_or(cfg, 10000);
    d.estimator = estimator_or(cfg, VarianceEstimator::hac);
    d.calibration_reps = cfg.calibration_reps;
    note(std::to_string(d.r_grid.size()) + " thresholds x " + std::to_string(d.reps) + " replications");
    return emit(np_study(d, rng, cfg.threads), cfg, cells);
  }
  if (c == "scenario-ab") {
    ScenarioConfig s;
    s.r_grid = cfg.r_grid;
    s.n = cfg.n;
    s.alpha = cfg.alpha;
    s.reps = reps_or(cfg, 10000);
    s.estimator = estimator_or(cfg, VarianceEstimator::kdep);
    s.k = cfg.k;
    note(std::to_string(s.r_grid.size()) + " thresholds x " + std::to_string(s.reps) + " replications");
    return emit(scenario_ab_study(s, rng, cfg.threads), cfg, cells);
  }
  if (c == "score") return run_score(cfg, cells);
  if (c == "dm-test") return run_dm(cfg, cells);
  if (c == "ar-eval") return run_ar(cfg, err, cells);
  if (c == "impropriety-demo") return run_impropriety(cfg, err, cells);
  throw UsageError("unknown command '" + c + "'");
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::size_t cells = 0;
  std::string text;
  try {
    text = render(cfg, err, &cells);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  std::string path = cfg.output_path;
  const char* dir = std::getenv(kOutputDirEnv);
  if (path.empty() && dir && *dir && cfg.command != "dm-test") {
    path = (std::filesystem::path(dir) / (cfg.command + "." + cfg.format)).string();
  }
  if (path.empty()) {
    out << text;
    out.flush();
  } else {
    bool ok = false;
    {
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      if (f) {
        f << text;
        f.flush();
        ok = static_cast<bool>(f);
      }
    }
    if (!ok) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
      err << "error: cannot write " << path << "\n";
      return 1;
    }
  }
  err << "tailcast " << cfg.command << ": seed=" << cfg.seed << " cells=" << cells;
  if (!path.empty()) err << " -> " << path;
  err << "\n";
  return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  return dispatch(cfg, out, err);
}

}  // namespace tailcast::cli
