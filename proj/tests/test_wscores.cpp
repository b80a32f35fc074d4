#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "tailcast/simlab.hpp"
#include "tailcast/weighted_scores.hpp"

using namespace tailcast;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

double Phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<WeightFunction> weight_kinds() {
  return {WeightFunction::indicator_right(1.0), WeightFunction::indicator_left(-0.5),
          WeightFunction::gaussian_right(1.0, 1.0), WeightFunction::gaussian_left(-0.5, 0.7)};
}
}  // namespace

TEST_CASE("weight functions") {
  CHECK(WeightFunction::indicator_right(1)(1.0) == 1.0);
  CHECK(WeightFunction::indicator_right(1)(0.999) == 0.0);
  CHECK(WeightFunction::indicator_left(1)(1.0) == 1.0);
  CHECK(WeightFunction::indicator_left(1)(1.001) == 0.0);
  CHECK(WeightFunction::gaussian_right(1, 2)(3.0) == doctest::Approx(Phi(1.0)));
  CHECK(WeightFunction::gaussian_left(1, 2)(3.0) == doctest::Approx(1.0 - Phi(1.0)));
  for (const auto& w : weight_kinds()) {
    for (double z = -10; z <= 10; z += 0.1) {
      CHECK(w(z) >= 0.0);
      CHECK(w(z) <= 1.0);
    }
  }
  CHECK_THROWS(WeightFunction::gaussian_right(0, 0));
}

TEST_CASE("weighted mass") {
  const auto n = Distribution::gaussian(0, 1);
  CHECK(weighted_mass(n, WeightFunction::constant_one()) == 1.0);
  CHECK(weighted_mass(n, WeightFunction::indicator_right(1.6449)) == doctest::Approx(1.0 - Phi(1.6449)).epsilon(1e-14));
  CHECK(weighted_mass(n, WeightFunction::indicator_right(1.6449)) == doctest::Approx(0.05).epsilon(1e-4));
  CHECK(weighted_mass(n, WeightFunction::gaussian_right(0, 1)) == doctest::Approx(0.5).epsilon(1e-14));
  // quadrature path for a non-Gaussian forecast against a direct integral
  const auto h = Distribution::heavy_tail();
  const auto w = WeightFunction::gaussian_right(0.5, 1.0);
  const double direct = GK::integrate([&](double z) { return w(z) * h.pdf(z); }, -kInf, 0.0, 15, 1e-12) +
                        GK::integrate([&](double z) { return w(z) * h.pdf(z); }, 0.0, kInf, 15, 1e-12);
  CHECK(weighted_mass(h, w) == doctest::Approx(direct).epsilon(1e-9));
  CHECK(weighted_mass(h, w) + unweighted_mass(h, w) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("twcrps") {
  const auto n = Distribution::gaussian(0.3, 1.2);
  for (double y : {-2.0, 0.0, 1.5}) {
    CHECK(std::abs(twcrps(n, y, WeightFunction::constant_one()) - crps(n, y)) < 1e-6);
  }
  // indicator_right(r) with y < r depends on y only through nothing
  for (const auto& f : {Distribution::gaussian(0, 1), normal_heavy_mixture(), Distribution::student_t(5)}) {
    const double r = 1.3;
    const double tail = GK::integrate([&](double z) { const double s = f.sf(z); return s * s; }, r, kInf, 15, 1e-13);
    for (double y : {-3.0, 0.0, 1.29}) {
      CHECK(twcrps(f, y, WeightFunction::indicator_right(r)) == doctest::Approx(tail).epsilon(1e-9));
    }
    CHECK(upper_tail_twcrps(f, r) == doctest::Approx(tail).epsilon(1e-9));
    const double head = GK::integrate([&](double z) { const double F = f.cdf(z); return F * F; }, -kInf, -r, 15, 1e-13);
    CHECK(twcrps(f, 0.0, WeightFunction::indicator_left(-r)) == doctest::Approx(head).epsilon(1e-9));
  }
}

TEST_CASE("conditional likelihood") {
  const auto n = Distribution::gaussian(0, 1);
  for (double y : {-1.0, 0.5, 2.0}) {
    CHECK(cl(n, y, WeightFunction::constant_one()) == doctest::Approx(logs(n, y)).epsilon(1e-14));
  }
  CHECK(cl(n, 0.5, WeightFunction::indicator_right(1.0)) == 0.0);
  CHECK_THROWS_AS(cl(Distribution::uniform(0, 1), 6.0, WeightFunction::indicator_right(5.0)), std::domain_error);
  const double y = 2.0, r = 1.0;
  CHECK(cl(n, y, WeightFunction::indicator_right(r)) ==
        doctest::Approx(-std::log(n.pdf(y) / (1.0 - Phi(r)))).epsilon(1e-12));
}

TEST_CASE("censored likelihood") {
  const auto n = Distribution::gaussian(0, 1);
  for (double y : {-1.0, 0.5, 2.0}) {
    CHECK(csl(n, y, WeightFunction::constant_one()) == doctest::Approx(logs(n, y)).epsilon(1e-14));
  }
  CHECK(csl(n, 0.2, WeightFunction::indicator_right(1.6449)) == doctest::Approx(-std::log(Phi(1.6449))).epsilon(1e-13));
  CHECK(csl(n, 0.2, WeightFunction::indicator_right(1.6449)) == doctest::Approx(0.051293).epsilon(1e-4));
  CHECK(csl(Distribution::uniform(0, 1), -2.0, WeightFunction::indicator_right(-1.0)) == kInf);
  // Gaussian weight: both terms present
  const auto w = WeightFunction::gaussian_right(0.5, 1.0);
  const double y2 = 0.3;
  const double mass = Phi((0.0 - 0.5) / std::sqrt(2.0));
  CHECK(csl(n, y2, w) == doctest::Approx(-w(y2) * std::log(n.pdf(y2)) - (1 - w(y2)) * std::log(1 - mass)).epsilon(1e-12));
}

TEST_CASE("twcrls") {
  const auto n = Distribution::gaussian(0, 1);
  const double y = 0.0;
  const double direct =
      GK::integrate([&](double z) { return discrete_ls(n, y, z); }, -kInf, 0.0, 15, 1e-12) +
      GK::integrate([&](double z) { return discrete_ls(n, y, z); }, 0.0, kInf, 15, 1e-12);
  const double v = twcrls(n, y, WeightFunction::constant_one());
  CHECK(v > 0.0);
  CHECK(std::isfinite(v));
  CHECK(std::abs(v - direct) < 1e-5);

  CHECK(twcrls(Distribution::uniform(0, 1), 0.5, WeightFunction::indicator_right(1.0)) == doctest::Approx(0.0));

  const auto w = WeightFunction::gaussian_right(0.5, 1.0);
  const double y2 = 1.1;
  const double weighted =
      GK::integrate([&](double z) { return w(z) * discrete_ls(n, y2, z); }, -kInf, y2, 15, 1e-12) +
      GK::integrate([&](double z) { return w(z) * discrete_ls(n, y2, z); }, y2, kInf, 15, 1e-12);
  CHECK(std::abs(twcrls(n, y2, w) - weighted) < 1e-5);
}

TEST_CASE("improper product and hedging") {
  const auto g = Distribution::gaussian(0, 1);
  const auto w = WeightFunction::indicator_right(1.0);
  CHECK(improper_product(ScoreRule::logs, g, 0.5, w) == 0.0);
  CHECK(improper_product(ScoreRule::crps, g, 0.5, WeightFunction::constant_one()) == crps(g, 0.5));
  CHECK(improper_product(ScoreRule::logs, g, 1.5, w) == logs(g, 1.5));

  const auto same = hedge_density(g, WeightFunction::constant_one());
  for (double x : {-2.0, 0.0, 1.0}) CHECK(same.pdf(x) == doctest::Approx(g.pdf(x)).epsilon(1e-10));

  const auto trunc = hedge_density(g, WeightFunction::indicator_right(0.0));
  CHECK(trunc.pdf(0.5) == doctest::Approx(2.0 * g.pdf(0.5)).epsilon(1e-8));
  CHECK(trunc.pdf(0.5) == doctest::Approx(0.7041307).epsilon(1e-6));
  CHECK(trunc.pdf(-0.5) == 0.0);
  CHECK(trunc.cdf(g.quantile(0.75)) == doctest::Approx(0.5).epsilon(1e-8));

  const auto hedge = hedge_density(g, w);
  RngStream rng(8, 0);
  const auto y = g.sample(rng, 100000);
  std::vector<double> d(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    d[i] = improper_product(ScoreRule::logs, hedge, y[i], w) - improper_product(ScoreRule::logs, g, y[i], w);
  }
  const auto m = mean_and_se(d);
  CHECK(m.mean < -3.0 * m.standard_error);
}

TEST_CASE("quadratic approximations") {
  for (const auto& w : weight_kinds()) {
    for (double y : {-1.0, 0.2, 1.7}) {
      const auto f = Distribution::gaussian(0.4, 0.8);
      CHECK(cl_quadratic(0.4, 0.8, y, w) == doctest::Approx(cl(f, y, w)).epsilon(1e-12));
      CHECK(csl_quadratic(0.4, 0.8, y, w) == doctest::Approx(csl(f, y, w)).epsilon(1e-12));
    }
  }
  const auto w = WeightFunction::indicator_right(1.0);
  CHECK(cl_quadratic(0.0, 1.0, 0.0, w) == 0.0);
  CHECK(csl_quadratic(1.0, 2.0, 0.0, w) == doctest::Approx(-std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("quadratic CL and CSL expected differences are negative and match Monte Carlo") {
  CHECK(quadratic_expected_difference(QuadraticRule::cl_q, 1.314, 0.252) < 0.0);
  CHECK(quadratic_expected_difference(QuadraticRule::csl_q, 0.540, 0.589) < 0.0);
  CHECK(quadratic_expected_difference(QuadraticRule::cl_q, 0.0, 1.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(quadratic_expected_difference(QuadraticRule::cl_q, 0.0, 0.0), std::domain_error);

  const auto w = WeightFunction::indicator_right(1.0);
  const double half = std::sqrt(3.0);
  const std::vector<std::pair<double, double>> points = {{0.0, 1.0}, {1.314, 0.252}, {0.540, 0.589}, {-0.3, 1.4}, {2.0, 0.6}};
  RngStream rng(77, 0);
  std::vector<double> y(1000000);
  for (auto& v : y) v = -half + 2 * half * rng.uniform();
  for (const auto& [mu, sd] : points) {
    for (auto rule : {QuadraticRule::cl_q, QuadraticRule::csl_q}) {
      std::vector<double> d(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) {
        d[i] = rule == QuadraticRule::cl_q ? cl_quadratic(mu, sd, y[i], w) - cl_quadratic(0, 1, y[i], w)
                                           : csl_quadratic(mu, sd, y[i], w) - csl_quadratic(0, 1, y[i], w);
      }
      const auto m = mean_and_se(d);
      const double analytic = quadratic_expected_difference(rule, mu, sd);
      INFO("mu=" << mu << " sd=" << sd << " rule=" << (rule == QuadraticRule::cl_q ? "cl" : "csl"));
      // ten joint comparisons: 3.5 SE keeps the family-wise false alarm rate near 0.5%
      CHECK(std::abs(analytic - m.mean) <= 3.5 * m.standard_error + 1e-12);
      // the same expectation by quadrature over the uniform law
      const auto g = [&](double v) {
        const double diff = rule == QuadraticRule::cl_q ? cl_quadratic(mu, sd, v, w) - cl_quadratic(0, 1, v, w)
                                                        : csl_quadratic(mu, sd, v, w) - csl_quadratic(0, 1, v, w);
        return diff / (2.0 * half);
      };
      const double exact = GK::integrate(g, -half, 1.0, 15, 1e-13) + GK::integrate(g, 1.0, half, 15, 1e-13);
      CHECK(analytic == doctest::Approx(exact).epsilon(1e-9));
    }
  }
}

TEST_CASE("propriety of weighted rules") {
  const auto g = Distribution::gaussian(0, 1);
  const std::vector<Distribution> alternatives = {Distribution::student_t(5), Distribution::gaussian(0.5, 1),
                                                  Distribution::gaussian(0, 1.5)};
  RngStream rng(31, 0);
  const auto y = g.sample(rng, 100000);
  for (const auto& w : weight_kinds()) {
    const WeightedScorer sg(g, w);
    for (const auto& f : alternatives) {
      const WeightedScorer sf(f, w);
      for (auto rule : {ScoreRule::twcrps, ScoreRule::cl, ScoreRule::csl}) {
        std::vector<double> d(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) d[i] = sg.score(rule, y[i]) - sf.score(rule, y[i]);
        const auto m = mean_and_se(d);
        INFO(to_string(rule) << " " << w.label() << " vs " << f.describe());
        CHECK(m.mean <= 3.0 * m.standard_error);
      }
      // twcrls by direct quadrature on a subsample
      std::vector<double> d(2000);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = twcrls(g, y[i], w) - twcrls(f, y[i], w);
      const auto m = mean_and_se(d);
      INFO("twCRLS " << w.label() << " vs " << f.describe());
      CHECK(m.mean <= 3.0 * m.standard_error);
    }
  }
}

TEST_CASE("tail determinism") {
  const double r = 4.0;
  const auto w = WeightFunction::indicator_right(r);
  const auto phi = Distribution::gaussian(0, 1);
  const auto mix = normal_heavy_mixture();
  for (double y : {-1.0, 0.0, 2.5, 3.99}) {
    for (const auto& f : {phi, mix}) {
      CHECK(csl(f, y, w) == -std::log(f.cdf(r)));
      CHECK(twcrps(f, y, w) == upper_tail_twcrps(f, r));
    }
    CHECK(csl(phi, y, w) < csl(mix, y, w));
    CHECK(twcrps(phi, y, w) < twcrps(mix, y, w));
  }
}

TEST_CASE("cached scorer agrees with the direct functions") {
  const std::vector<Distribution> fs = {Distribution::gaussian(0.2, 1.1), Distribution::student_t(5),
                                        Distribution::heavy_tail(), normal_heavy_mixture()};
  std::vector<WeightFunction> ws = weight_kinds();
  ws.push_back(WeightFunction::constant_one());
  for (const auto& f : fs) {
    for (const auto& w : ws) {
      const WeightedScorer s(f, w);
      for (double y = -6.0; y <= 6.0; y += 0.37) {
        INFO(f.describe() << " " << w.label() << " y=" << y);
        CHECK(std::abs(s.twcrps(y) - twcrps(f, y, w)) < 1e-8);
        CHECK(std::abs(s.crps(y) - crps(f, y)) < 1e-8);
        CHECK(s.cl(y) == doctest::Approx(cl(f, y, w)).epsilon(1e-9));
        CHECK(s.csl(y) == doctest::Approx(csl(f, y, w)).epsilon(1e-9));
        CHECK(s.logs(y) == doctest::Approx(logs(f, y)).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS(WeightedScorer(Distribution::uniform(0, 1), WeightFunction::constant_one()));
}
