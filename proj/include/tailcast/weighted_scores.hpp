#pragma once

#include <string>

#include "tailcast/distributions.hpp"
#include "tailcast/scores.hpp"

namespace tailcast {

/// [0, 1]-valued emphasis function on the outcome axis.
struct WeightFunction {
  enum class Kind { constant_one, indicator_right, indicator_left, gaussian_right, gaussian_left };

  Kind kind = Kind::constant_one;
  double r = 0.0;  // threshold
  double s = 1.0;  // scale of the Gaussian-CDF weights

  static WeightFunction constant_one() { return {}; }
  static WeightFunction indicator_right(double r) { return {Kind::indicator_right, r, 1.0}; }
  static WeightFunction indicator_left(double r) { return {Kind::indicator_left, r, 1.0}; }
  static WeightFunction gaussian_right(double r, double s);
  static WeightFunction gaussian_left(double r, double s);

  double operator()(double z) const;
  bool is_indicator() const { return kind == Kind::indicator_right || kind == Kind::indicator_left; }
  /// Region where the weight can be nonzero.
  double lo() const;
  double hi() const;
  std::string label() const;
};

std::string to_string(WeightFunction::Kind kind);
WeightFunction::Kind parse_weight_kind(std::string_view name);

/// Integral of w(z) f(z) dz.
double weighted_mass(const Distribution& f, const WeightFunction& w);
/// Integral of (1 - w(z)) f(z) dz, computed directly (no 1 - mass cancellation).
double unweighted_mass(const Distribution& f, const WeightFunction& w);

double twcrps(const Distribution& f, double y, const WeightFunction& w);
/// Integral over [r, inf) of (1 - F)^2: the twCRPS under indicator_right(r)
/// for every observation y <= r.
double upper_tail_twcrps(const Distribution& f, double r);
/// Integral over (-inf, r] of F^2: the twCRPS under indicator_left(r) for every y >= r.
double lower_tail_twcrps(const Distribution& f, double r);

/// Conditional likelihood score. Throws std::domain_error if the weighted mass vanishes.
double cl(const Distribution& f, double y, const WeightFunction& w);
/// Censored likelihood score.
double csl(const Distribution& f, double y, const WeightFunction& w);

struct TwcrlsValue {
  double value;
  double error_bound;  // quadrature error estimate
};
TwcrlsValue twcrls_detailed(const Distribution& f, double y, const WeightFunction& w);
double twcrls(const Distribution& f, double y, const WeightFunction& w);

/// w(y) * base(f, y). Improper: kept to demonstrate hedging.
double improper_product(ScoreRule base, const Distribution& f, double y, const WeightFunction& w);

/// Density proportional to w * g; the minimizer of the expected improper
/// product score under g.
Distribution hedge_density(const Distribution& g, const WeightFunction& w);

/// CL and CSL with the predictive density replaced by a Gaussian with the
/// forecast's mean and standard deviation.
double cl_quadratic(double f_mean, double f_sd, double y, const WeightFunction& w);
double csl_quadratic(double f_mean, double f_sd, double y, const WeightFunction& w);

enum class QuadraticRule { cl_q, csl_q };

/// E_G[S(F, Y) - S(G, Y)] for G uniform on [-sqrt 3, sqrt 3], w = 1{y >= 1}
/// and S the quadratic CL or CSL approximation, in closed form. Negative
/// values show that the approximation is improper.
double quadratic_expected_difference(QuadraticRule rule, double f_mean, double f_sd);

/// Cached evaluator for one forecast and one weight. Precomputes the weighted
/// masses and running integrals of w F^2 and w (1 - F)^2, so repeated scoring
/// against many observations avoids a full quadrature per case.
class WeightedScorer {
 public:
  WeightedScorer(Distribution f, WeightFunction w);

  double logs(double y) const;
  double crps(double y) const;
  double twcrps(double y) const;
  double cl(double y) const;
  double csl(double y) const;
  double score(ScoreRule rule, double y) const;

  const Distribution& forecast() const { return f_; }
  const WeightFunction& weight() const { return w_; }

 private:
  Distribution f_;
  WeightFunction w_;
  double mass_;
  double log_mass_;
  double log_complement_;
  bool gaussian_;
  CumulativeIntegral crps_lower_;   // F^2
  CumulativeIntegral crps_upper_;   // (1 - F)^2
  CumulativeIntegral tw_lower_;     // w F^2
  CumulativeIntegral tw_upper_;     // w (1 - F)^2
};

}  // namespace tailcast
