#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tailcast/quadrature.hpp"
#include "tailcast/rng.hpp"

namespace tailcast {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

enum class Family { gaussian, student_t, uniform, heavy_tail, mixture, reweighted };

std::string to_string(Family family);

/// Univariate predictive distribution. Values are immutable and cheap to
/// copy; composite families share their state.
class Distribution {
 public:
  static Distribution gaussian(double mean, double sd);
  /// Student t with `nu` degrees of freedom rescaled to unit variance.
  static Distribution student_t(int nu);
  static Distribution uniform(double lo, double hi);
  /// Standard normal left half joined to the t(4) right half.
  static Distribution heavy_tail();
  static Distribution mixture(std::vector<double> weights, std::vector<Distribution> components);
  /// Density proportional to weight(z) * base.pdf(z) on [lo, hi]. The weight
  /// must take values in [0, 1]; `breakpoints` lists points where it is not
  /// smooth. Throws std::domain_error if the normalizer vanishes.
  static Distribution reweighted(const Distribution& base, RealFn weight,
                                 std::vector<double> breakpoints, double lo, double hi);

  Family family() const;
  std::string describe() const;

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  /// Survival function 1 - cdf(x), computed without cancellation.
  double sf(double x) const;
  /// Throws std::domain_error unless 0 < p < 1.
  double quantile(double p) const;
  Moments moments() const;
  double mean() const { return moments().mean; }
  double sd() const;

  double sample(RngStream& rng) const;
  std::vector<double> sample(RngStream& rng, std::size_t n) const;

  /// Support end points (possibly infinite).
  double support_lo() const;
  double support_hi() const;
  /// Points where the density or its derivative jumps.
  std::vector<double> breakpoints() const;

  /// Gaussian parameters; only valid when family() == Family::gaussian.
  double gaussian_mean() const;
  double gaussian_sd() const;

  struct Gaussian {
    double mean;
    double sd;
  };
  struct StudentT {
    int nu;
    double scale;
  };
  struct Uniform {
    double lo;
    double hi;
  };
  struct HeavyTail {};
  struct Mixture;
  struct Reweighted;

 private:
  using Repr = std::variant<Gaussian, StudentT, Uniform, HeavyTail, std::shared_ptr<const Mixture>,
                            std::shared_ptr<const Reweighted>>;
  explicit Distribution(Repr repr) : repr_(std::move(repr)) {}
  double bisect_quantile(double p) const;

  Repr repr_;
};

struct Distribution::Mixture {
  std::vector<double> weights;
  std::vector<double> cumulative;
  std::vector<Distribution> components;
};

struct Distribution::Reweighted {
  Distribution base;
  RealFn weight;
  std::vector<double> breakpoints;
  double lo;
  double hi;
  double normalizer;
  CumulativeIntegral mass;  // unnormalized
  Moments moments;
};

/// Standard normal helpers shared across modules.
double normal_pdf(double z);
double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace tailcast
