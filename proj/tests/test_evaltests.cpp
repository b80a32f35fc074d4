#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tailcast/evaluation_tests.hpp"
#include "tailcast/parallel.hpp"
#include "tailcast/simlab.hpp"

using namespace tailcast;

namespace {
std::vector<double> alternating(std::size_t n) {
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = i % 2 == 0 ? 1.0 : -1.0;
  return d;
}
double Phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
}  // namespace

TEST_CASE("autocovariance") {
  const std::vector<double> c(10, 3.5);
  for (std::size_t j = 0; j < 10; ++j) CHECK(autocovariance(c, j) == 0.0);
  CHECK(autocovariance(alternating(4), 1) == doctest::Approx(-0.75));
  // divisor n: (1/4) * sum over 3 products of -1
  const std::vector<double> d = {1, 2, 4, 8};
  const double m = 3.75;
  double g0 = 0.0;
  for (double v : d) g0 += (v - m) * (v - m);
  CHECK(autocovariance(d, 0) == doctest::Approx(g0 / 4.0));
  CHECK_THROWS_AS(autocovariance(d, 4), std::domain_error);
}

TEST_CASE("alternating series autocovariance") {
  // divisor n: three lag-1 products of -1 over n = 4
  CHECK(autocovariance(alternating(4), 0) == doctest::Approx(1.0));
  CHECK(var_kdep(alternating(4), 2) == doctest::Approx(1.0 - 1.5));
  CHECK(var_kdep(alternating(4), 2) < 0.0);
}

TEST_CASE("kdep and hac") {
  const std::vector<double> d = {0.3, -1.2, 2.2, 0.1, 0.7, -0.4, 1.9, -2.0};
  CHECK(var_kdep(d, 1) == autocovariance(d, 0));
  CHECK(var_kdep(d, 3) == doctest::Approx(autocovariance(d, 0) + 2 * (autocovariance(d, 1) + autocovariance(d, 2))));
  CHECK(hac_bandwidth(16) == 2);
  CHECK(hac_bandwidth(15) == 1);
  CHECK(hac_bandwidth(81) == 3);
  CHECK(hac_bandwidth(80) == 2);
  CHECK(hac_bandwidth(10000) == 10);
  // J = 2 at n = 16: lag 1 gets weight 1/2, lag 2 gets 0
  std::vector<double> e(16);
  RngStream rng(1, 0);
  for (auto& v : e) v = rng.normal();
  CHECK(var_hac(e) == doctest::Approx(autocovariance(e, 0) + autocovariance(e, 1)).epsilon(1e-14));
  CHECK(var_hac(std::vector<double>(20, 1.0)) == 0.0);
  // n < 16 forces J = 1: hac equals kdep(k = 1)
  for (std::size_t n = 2; n < 16; ++n) {
    std::vector<double> f(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(n));
    CHECK(var_hac(f) == doctest::Approx(var_kdep(f, 1)).epsilon(1e-12));
  }
  std::vector<double> big(100000);
  for (auto& v : big) v = rng.normal();
  CHECK(var_kdep(big, 4) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(var_hac(big) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("dm test basics") {
  const std::vector<double> a = {1.0, 2.0, 0.5, 3.0, 1.5};
  const auto same = dm_test(a, a, 1, VarianceEstimator::kdep, 0.05);
  CHECK(same.degenerate);
  CHECK(same.preferred == Preferred::none);
  CHECK(same.p_two_sided == 1.0);

  std::vector<double> f(10), g(10, 0.0);
  const auto alt = alternating(10);
  for (std::size_t i = 0; i < 10; ++i) f[i] = alt[i];
  const auto r = dm_test(f, g, 1, VarianceEstimator::kdep, 0.05);
  CHECK(r.statistic == doctest::Approx(0.0));
  CHECK(r.p_two_sided == doctest::Approx(1.0));

  std::vector<double> shifted(a.begin(), a.end());
  for (auto& v : shifted) v += 1.0;
  CHECK_THROWS_AS(dm_test(a, shifted, 1, VarianceEstimator::kdep, 0.05), DegenerateVarianceError);
  try {
    (void)dm_test(a, shifted, 1, VarianceEstimator::kdep, 0.05);
  } catch (const DegenerateVarianceError& e) {
    CHECK(e.mean_difference() == doctest::Approx(-1.0));
  }
  CHECK_THROWS_AS(dm_test(std::vector<double>{1, std::numeric_limits<double>::infinity()},
                          std::vector<double>{1, 2}, 1, VarianceEstimator::kdep, 0.05),
                  std::domain_error);
  CHECK_THROWS_AS(dm_test(std::vector<double>{1, 2}, std::vector<double>{1}, 1, VarianceEstimator::kdep, 0.05),
                  std::exception);
  // nonpositive kdep variance is an error
  std::vector<double> z(4, 0.0);
  auto alt4 = alternating(4);
  alt4[0] += 0.1;
  CHECK_THROWS_AS(dm_test(alt4, z, 2, VarianceEstimator::kdep, 0.05), std::domain_error);
}

TEST_CASE("dm statistic, p-values, sign convention") {
  RngStream rng(9, 0);
  std::vector<double> f(200), g(200);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = rng.normal();
    g[i] = rng.normal() + 0.2;
  }
  const auto r = dm_test(f, g, 1, VarianceEstimator::kdep, 0.05);
  std::vector<double> d(f.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = f[i] - g[i];
  const double mean = mean_and_se(d).mean;
  const double t = std::sqrt(200.0) * mean / std::sqrt(autocovariance(d, 0));
  CHECK(r.statistic == doctest::Approx(t).epsilon(1e-12));
  CHECK(r.p_two_sided == doctest::Approx(2.0 * (1.0 - Phi(std::abs(t)))).epsilon(1e-10));
  CHECK(r.p_one_sided == doctest::Approx(1.0 - Phi(t)).epsilon(1e-10));
  CHECK(r.preferred == (r.p_two_sided < 0.05 ? (t < 0 ? Preferred::F : Preferred::G) : Preferred::none));
  const auto s = dm_test(g, f, 1, VarianceEstimator::kdep, 0.05);
  CHECK(s.statistic == -r.statistic);
  if (r.preferred == Preferred::F) CHECK(s.preferred == Preferred::G);

  const auto j = r.to_json();
  for (const char* key : {"\"statistic\"", "\"variance\"", "\"n\"", "\"estimator\"", "\"p_two\"", "\"p_one\"", "\"preferred\""}) {
    CHECK(j.find(key) != std::string::npos);
  }
}

TEST_CASE("one-sided DM LogS region equals the likelihood-ratio form") {
  const auto f0 = Distribution::gaussian(0, 1);
  const auto f1 = Distribution::student_t(5);
  const double z = 1.6448536269514722;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(seed, 4);
    const auto y = f0.sample(rng, 40);
    std::vector<double> s0(y.size()), s1(y.size()), d(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      s0[i] = logs(f0, y[i]);
      s1[i] = logs(f1, y[i]);
      d[i] = s0[i] - s1[i];
    }
    const auto r = dm_test(s0, s1, 1, VarianceEstimator::hac, 0.05);
    const double lr = log_likelihood_ratio(f0, f1, y);
    const double rhs = std::sqrt(static_cast<double>(y.size())) * std::sqrt(var_hac(d)) * z;
    CHECK((r.p_one_sided < 0.05) == (lr > rhs));
    CHECK(lr == doctest::Approx(static_cast<double>(y.size()) * mean_and_se(d).mean).epsilon(1e-12));
  }
}

TEST_CASE("size under the null") {
  // F = N(0.3, 1) and G = N(-0.3, 1) score alike in distribution on N(0, 1) data
  const auto f = Distribution::gaussian(0.3, 1);
  const auto g = Distribution::gaussian(-0.3, 1);
  const auto truth = Distribution::gaussian(0, 1);
  const std::size_t reps = 10000;
  std::vector<char> rej(reps);
  parallel_for(reps, 4, [&](std::size_t i) {
    RngStream rng(123, i);
    const auto y = truth.sample(rng, 100);
    std::vector<double> a(y.size()), b(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
      a[t] = logs(f, y[t]);
      b[t] = logs(g, y[t]);
    }
    rej[i] = dm_test(a, b, 1, VarianceEstimator::kdep, 0.05).p_two_sided < 0.05;
  });
  const double freq = static_cast<double>(std::count(rej.begin(), rej.end(), 1)) / reps;
  CHECK(freq >= 0.03);
  CHECK(freq <= 0.07);
}

TEST_CASE("LRT calibration and power") {
  const auto f0 = Distribution::gaussian(0, 1);
  const auto f1 = Distribution::student_t(5);
  CHECK(lrt_calibrate(f0, f0, 50, 0.05, 1000, RngStream(1, 0)) == 0.0);
  const auto same = lrt_power(f0, f0, 50, 0.05, 1000, RngStream(1, 0));
  CHECK(same.level_realized == 0.0);
  CHECK(same.power == 0.0);
  CHECK_THROWS(lrt_calibrate(f0, f1, 50, 0.05, 999, RngStream(1, 0)));

  const std::size_t reps = 10000;
  const auto a = lrt_power(f0, f1, 100, 0.05, reps, RngStream(1, 0), 4);
  CHECK(std::abs(a.level_realized - 0.05) <= 3 * std::sqrt(0.05 * 0.95 / reps));

  // two seeds agree on the critical value within twice the quantile standard error
  const double c1 = lrt_calibrate(f0, f1, 100, 0.05, reps, RngStream(2, 0), 4);
  const double c2 = lrt_calibrate(f0, f1, 100, 0.05, reps, RngStream(3, 0), 4);
  // density of the LR statistic at its 95% quantile estimated from a pooled sample
  std::vector<double> lr(reps);
  parallel_for(reps, 4, [&](std::size_t i) {
    RngStream s(4, i);
    lr[i] = log_likelihood_ratio(f0, f1, f0.sample(s, 100));
  });
  std::sort(lr.begin(), lr.end());
  const double h = lr[static_cast<std::size_t>(0.97 * reps)] - lr[static_cast<std::size_t>(0.93 * reps)];
  const double dens = 0.04 / h;
  const double qse = std::sqrt(0.05 * 0.95 / reps) / dens;
  CHECK(std::abs(c1 - c2) <= 2.0 * std::sqrt(2.0) * qse);

  const auto p50 = lrt_power(f0, f1, 50, 0.05, reps, RngStream(5, 0), 4);
  const auto p100 = lrt_power(f0, f1, 100, 0.05, reps, RngStream(6, 0), 4);
  const auto p200 = lrt_power(f0, f1, 200, 0.05, reps, RngStream(7, 0), 4);
  const double se = std::sqrt(0.25 / reps) * std::sqrt(2.0);
  CHECK(p100.power >= p50.power - 3 * se);
  CHECK(p200.power >= p100.power - 3 * se);
  CHECK(p200.power > p50.power);
}

TEST_CASE("estimator names") {
  CHECK(parse_variance_estimator("hac") == VarianceEstimator::hac);
  CHECK(parse_variance_estimator("kdep") == VarianceEstimator::kdep);
  CHECK_THROWS(parse_variance_estimator("nw"));
}
