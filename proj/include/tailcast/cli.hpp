#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tailcast::cli {

inline constexpr const char* kOutputDirEnv = "TAILCAST_OUTPUT_DIR";

/// Invalid command line or configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::uint64_t seed = 20151;
  std::size_t replications = 0;  // 0: command default
  std::string output_path;
  std::string format = "csv";
  unsigned threads = 1;
  bool quiet = false;

  // dilemma tables and sweep
  double sigma2 = 2.0 / 3.0;
  double threshold = 1.64;
  double gaussian_scale = 1.0;
  std::vector<double> sigma_grid;

  // power studies
  std::vector<double> r_grid;
  double alpha = 0.05;
  double c = 5.0;
  std::size_t n = 100;
  std::size_t k = 1;
  std::size_t calibration_reps = 20000;
  std::string estimator;  // empty: command default

  // score
  std::string forecast;
  std::string rule;
  std::string weight = "indicator_right";
  double r = 0.0;
  double s = 1.0;
  double z = 0.0;
  std::string observations_path;
  std::vector<double> y;

  // dm-test
  std::string scores_f;
  std::string scores_g;

  // ar-eval
  std::string series_path;
  std::string column = "value";
  int p = 2;
  std::size_t m = 5000;
  std::vector<int> horizons;
  std::size_t start_index = 0;  // 0: a quarter of the series
  std::size_t paths_per_draw = 100;
  double lower_threshold = 0.1;
  double upper_threshold = 0.98;
  std::size_t synthetic_length = 200;
};

/// Parses argv (argv[0] is the program name). Precedence: command line >
/// --config file > defaults; unknown keys are rejected. Throws UsageError.
RunConfig parse_config(const std::vector<std::string>& args);

/// Runs the command and writes its output. Returns the process exit code.
int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_config followed by dispatch, with errors mapped to exit codes 1 and 2.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Produces the command's output text without writing it anywhere.
std::string render(const RunConfig& cfg, std::ostream& err, std::size_t* cells = nullptr);

}  // namespace tailcast::cli
