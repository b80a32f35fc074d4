#include "tailcast/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace tailcast {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1 / sqrt(2 pi)
constexpr double kLogSqrt2Pi = 0.91893853320467274;  // log sqrt(2 pi)

const boost::math::students_t_distribution<double>& t4() {
  static const boost::math::students_t_distribution<double> dist(4.0);
  return dist;
}

// Lower tail P(T <= t) of a standard Student t with integer nu, via the finite
// trigonometric series; boost beyond |t| = 4 where the series cancels.
double t_lower(double t, int nu) {
  if (std::abs(t) > 4.0 || nu > 30) {
    return boost::math::cdf(boost::math::students_t_distribution<double>(nu), t);
  }
  const double q = nu + t * t;
  const double c = nu / q;
  const double s = t / std::sqrt(q);
  double term = 1.0, sum = 1.0;
  if (nu % 2 == 1) {
    for (int k = 1; k <= (nu - 3) / 2; ++k) {
      term *= c * (2.0 * k) / (2.0 * k + 1.0);
      sum += term;
    }
    const double theta = std::atan(t / std::sqrt(static_cast<double>(nu)));
    const double tail = nu >= 3 ? s * std::sqrt(c) * sum : 0.0;
    return 0.5 + (theta + tail) / std::numbers::pi;
  }
  for (int k = 1; k <= nu / 2 - 1; ++k) {
    term *= c * (2.0 * k - 1.0) / (2.0 * k);
    sum += term;
  }
  return 0.5 + 0.5 * s * sum;
}

double heavy_pdf(double x) {
  if (x <= 0.0) return normal_pdf(x);
  return 0.375 * std::pow(1.0 + 0.25 * x * x, -2.5);
}

// Knots on the quantile scale of `d` plus a regular grid around the centre,
// so cumulative tables stay accurate in the body and the tails.
std::vector<double> quantile_knots(const Distribution& d, const std::vector<double>& extra) {
  std::vector<double> knots = extra;
  for (double t = -25.0; t <= 25.0; t += 0.25) {
    knots.push_back(d.quantile(1.0 / (1.0 + std::exp(-t))));
  }
  return knots;
}

}  // namespace

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

std::string to_string(Family family) {
  switch (family) {
    case Family::gaussian: return "gaussian";
    case Family::student_t: return "student_t";
    case Family::uniform: return "uniform";
    case Family::heavy_tail: return "heavy_tail";
    case Family::mixture: return "mixture";
    case Family::reweighted: return "reweighted";
  }
  return "unknown";
}

Distribution Distribution::gaussian(double mean, double sd) {
  if (!std::isfinite(mean) || !(sd > 0.0) || !std::isfinite(sd)) {
    throw std::domain_error("gaussian: need finite mean and sd > 0");
  }
  return Distribution(Gaussian{mean, sd});
}

Distribution Distribution::student_t(int nu) {
  if (nu < 3) throw std::domain_error("student_t: need nu >= 3 for unit variance scaling");
  return Distribution(StudentT{nu, std::sqrt((nu - 2.0) / nu)});
}

Distribution Distribution::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw std::domain_error("uniform: need finite lo < hi");
  }
  return Distribution(Uniform{lo, hi});
}

Distribution Distribution::heavy_tail() { return Distribution(HeavyTail{}); }

Distribution Distribution::mixture(std::vector<double> weights,
                                   std::vector<Distribution> components) {
  if (weights.empty() || weights.size() != components.size()) {
    throw std::domain_error("mixture: need one weight per component");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::domain_error("mixture: weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::domain_error("mixture: weights must sum to 1");
  auto m = std::make_shared<Mixture>();
  m->cumulative.resize(weights.size());
  std::partial_sum(weights.begin(), weights.end(), m->cumulative.begin());
  m->weights = std::move(weights);
  m->components = std::move(components);
  return Distribution(std::shared_ptr<const Mixture>(std::move(m)));
}

Distribution Distribution::reweighted(const Distribution& base, RealFn weight,
                                      std::vector<double> breakpoints, double lo, double hi) {
  lo = std::max(lo, base.support_lo());
  hi = std::min(hi, base.support_hi());
  if (!(lo < hi)) throw std::domain_error("reweighted: empty support");
  auto bp = base.breakpoints();
  breakpoints.insert(breakpoints.end(), bp.begin(), bp.end());
  RealFn density = [base, weight](double z) { return weight(z) * base.pdf(z); };
  const double normalizer = integrate_piecewise(density, lo, hi, breakpoints).value;
  if (!(normalizer > 0.0)) throw std::domain_error("reweighted: zero normalizer");

  const double mean =
      integrate_piecewise([&](double z) { return z * density(z); }, lo, hi, breakpoints).value /
      normalizer;
  const double second =
      integrate_piecewise([&](double z) { return (z - mean) * (z - mean) * density(z); }, lo, hi,
                          breakpoints)
          .value /
      normalizer;

  auto knots = quantile_knots(base, breakpoints);
  auto r = std::make_shared<Reweighted>(Reweighted{base, weight, breakpoints, lo, hi, normalizer,
                                                   CumulativeIntegral(density, knots, lo, hi),
                                                   Moments{mean, second}});
  return Distribution(std::shared_ptr<const Reweighted>(std::move(r)));
}

Family Distribution::family() const {
  return static_cast<Family>(repr_.index());
}

std::string Distribution::describe() const {
  std::ostringstream os;
  os.precision(6);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          os << "N(" << d.mean << ", " << d.sd << "^2)";
        } else if constexpr (std::is_same_v<T, StudentT>) {
          os << "t" << d.nu << "(unit variance)";
        } else if constexpr (std::is_same_v<T, Uniform>) {
          os << "U(" << d.lo << ", " << d.hi << ")";
        } else if constexpr (std::is_same_v<T, HeavyTail>) {
          os << "H";
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Mixture>>) {
          os << "mixture[" << d->components.size() << "]";
        } else {
          os << "reweighted(" << d->base.describe() << ")";
        }
      },
      repr_);
  return os.str();
}

double Distribution::pdf(double x) const {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return normal_pdf((x - d.mean) / d.sd) / d.sd;
        } else if constexpr (std::is_same_v<T, StudentT>) {
          boost::math::students_t_distribution<double> t(d.nu);
          return boost::math::pdf(t, x / d.scale) / d.scale;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return (x >= d.lo && x <= d.hi) ? 1.0 / (d.hi - d.lo) : 0.0;
        } else if constexpr (std::is_same_v<T, HeavyTail>) {
          return heavy_pdf(x);
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Mixture>>) {
          double s = 0.0;
          for (std::size_t i = 0; i < d->components.size(); ++i) {
            s += d->weights[i] * d->components[i].pdf(x);
          }
          return s;
        } else {
          if (x < d->lo || x > d->hi) return 0.0;
          return d->weight(x) * d->base.pdf(x) / d->normalizer;
        }
      },
      repr_);
}

double Distribution::log_pdf(double x) const {
  return std::visit(
      [x, this](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          const double z = (x - d.mean) / d.sd;
          return -kLogSqrt2Pi - std::log(d.sd) - 0.5 * z * z;
        } else if constexpr (std::is_same_v<T, StudentT>) {
          const double nu = d.nu;
          const double z = x / d.scale;
          return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                 0.5 * std::log(nu * std::numbers::pi) - 0.5 * (nu + 1.0) * std::log1p(z * z / nu) -
                 std::log(d.scale);
        } else if constexpr (std::is_same_v<T, HeavyTail>) {
          if (x <= 0.0) return -kLogSqrt2Pi - 0.5 * x * x;
          return std::log(0.375) - 2.5 * std::log1p(0.25 * x * x);
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Mixture>>) {
          // log-sum-exp keeps far-tail values finite
          double best = -std::numeric_limits<double>::infinity();
          std::vector<double> terms(d->components.size());
          for (std::size_t i = 0; i < terms.size(); ++i) {
            terms[i] = d->weights[i] > 0.0
                           ? std::log(d->weights[i]) + d->components[i].log_pdf(x)
                           : -std::numeric_limits<double>::infinity();
            best = std::max(best, terms[i]);
          }
          if (!std::isfinite(best)) return best;
          double s = 0.0;
          for (double t : terms) s += std::exp(t - best);
          return best + std::log(s);
        } else {
          return std::log(pdf(x));
        }
      },
      repr_);
}

double Distribution::cdf(double x) const {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return normal_cdf((x - d.mean) / d.sd);
        } else if constexpr (std::is_same_v<T, StudentT>) {
          return t_lower(x / d.scale, d.nu);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          if (x <= d.lo) return 0.0;
          if (x >= d.hi) return 1.0;
          return (x - d.lo) / (d.hi - d.lo);
        } else if constexpr (std::is_same_v<T, HeavyTail>) {
          return x <= 0.0 ? normal_cdf(x) : t_lower(x, 4);
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Mixture>>) {
          double s = 0.0;
          for (std::size_t i = 0; i < d->components.size(); ++i) {
            s += d->weights[i] * d->components[i].cdf(x);
          }
          return std::min(s, 1.0);
        } else {
          return std::clamp(d->mass.below(x) / d->normalizer, 0.0, 1.0);
        }
      },
      repr_);
}

double Distribution::sf(double x) const {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return normal_cdf(-(x - d.mean) / d.sd);
        } else if constexpr (std::is_same_v<T, StudentT>) {
          return t_lower(-x / d.scale, d.nu);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          if (x <= d.lo) return 1.0;
          if (x >= d.hi) return 0.0;
          return (d.hi - x) / (d.hi - d.lo);
        } else if constexpr (std::is_same_v<T, HeavyTail>) {
          return x <= 0.0 ? normal_cdf(-x) : t_lower(-x, 4);
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Mixture>>) {
          double s = 0.0;
          for (std::size_t i = 0; i < d->components.size(); ++i) {
            s += d->weights[i] * d->components[i].sf(x);
          }
          return std::min(s, 1.0);
        } else {
          return std::clamp(d->mass.above(x) / d->normalizer, 0.0, 1.0);
        }
      },
      repr_);
}

double Distribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p must lie in (0, 1)");
  return std::visit(
      [p, this](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return d.mean + d.sd * normal_quantile(p);
        } else if constexpr (std::is_same_v<T, StudentT>) {
          boost::math::students_t_distribution<double> t(d.nu);
          return d.scale * boost::math::quantile(t, p);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return d.lo + p * (d.hi - d.lo);
        } else if constexpr (std::is_same_v<T, HeavyTail>) {
          return p <= 0.5 ? normal_quantile(p) : boost::math::quantile(t4(), p);
        } else {
          return bisect_quantile(p);
        }
      },
      repr_);
}

double Distribution::bisect_quantile(double p) const {
  // Bracket expanded geometrically from the mean, then plain bisection.
  const Moments m = moments();
  const double step0 = std::sqrt(m.variance) > 0.0 ? std::sqrt(m.variance) : 1.0;
  double lo = m.mean - step0;
  double hi = m.mean + step0;
  for (double step = step0; cdf(lo) > p; step *= 2.0) lo = m.mean - 2.0 * step;
  for (double step = step0; cdf(hi) < p; step *= 2.0) hi = m.mean + 2.0 * step;
  lo = std::max(lo, support_lo());
  hi = std::min(hi, support_hi());
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) break;
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Moments Distribution::moments() const {
  return std::visit(
      [](const auto& d) -> Moments {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return {d.mean, d.sd * d.sd};
        } else if constexpr (std::is_same_v<T, StudentT>) {
          return {0.0, 1.0};
        } else if constexpr (std::is_same_v<T, Uniform>) {
          const double w = d.hi - d.lo;
          return {0.5 * (d.lo + d.hi), w * w / 12.0};
        } else if constexpr (std::is_same_v<T, HeavyTail>) {
          // E[X; X <= 0] = -phi(0); E[X; X > 0] = E|T4| / 2 = 1/2; E[X^2] = 1/2 + 2/2.
          const double mean = 0.5 - kInvSqrt2Pi;
          return {mean, 1.5 - mean * mean};
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Mixture>>) {
          double mean = 0.0;
          double second = 0.0;
          for (std::size_t i = 0; i < d->components.size(); ++i) {
            const Moments c = d->components[i].moments();
            mean += d->weights[i] * c.mean;
            second += d->weights[i] * (c.variance + c.mean * c.mean);
          }
          return {mean, std::max(second - mean * mean, 0.0)};
        } else {
          return d->moments;
        }
      },
      repr_);
}

double Distribution::sd() const { return std::sqrt(moments().variance); }

double Distribution::sample(RngStream& rng) const {
  return std::visit(
      [&rng, this](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return d.mean + d.sd * rng.normal();
        } else if constexpr (std::is_same_v<T, StudentT>) {
          return d.scale * rng.student_t(d.nu);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return d.lo + (d.hi - d.lo) * rng.uniform();
        } else if constexpr (std::is_same_v<T, HeavyTail>) {
          // fair coin between the negative half-normal and the positive half-t(4)
          if (rng.uniform() < 0.5) return -std::abs(rng.normal());
          return std::abs(rng.student_t(4.0));
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Mixture>>) {
          const double u = rng.uniform() * d->cumulative.back();
          auto it = std::upper_bound(d->cumulative.begin(), d->cumulative.end(), u);
          auto i = static_cast<std::size_t>(it - d->cumulative.begin());
          i = std::min(i, d->components.size() - 1);
          return d->components[i].sample(rng);
        } else {
          return quantile(rng.uniform());
        }
      },
      repr_);
}

std::vector<double> Distribution::sample(RngStream& rng, std::size_t n) const {
  std::vector<double> out(n);
  for (auto& v : out) v = sample(rng);
  return out;
}

double Distribution::support_lo() const {
  if (auto u = std::get_if<Uniform>(&repr_)) return u->lo;
  if (auto r = std::get_if<std::shared_ptr<const Reweighted>>(&repr_)) return (*r)->lo;
  if (auto m = std::get_if<std::shared_ptr<const Mixture>>(&repr_)) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& c : (*m)->components) lo = std::min(lo, c.support_lo());
    return lo;
  }
  return -std::numeric_limits<double>::infinity();
}

double Distribution::support_hi() const {
  if (auto u = std::get_if<Uniform>(&repr_)) return u->hi;
  if (auto r = std::get_if<std::shared_ptr<const Reweighted>>(&repr_)) return (*r)->hi;
  if (auto m = std::get_if<std::shared_ptr<const Mixture>>(&repr_)) {
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& c : (*m)->components) hi = std::max(hi, c.support_hi());
    return hi;
  }
  return std::numeric_limits<double>::infinity();
}

std::vector<double> Distribution::breakpoints() const {
  if (auto u = std::get_if<Uniform>(&repr_)) return {u->lo, u->hi};
  if (std::holds_alternative<HeavyTail>(repr_)) return {0.0};
  if (auto r = std::get_if<std::shared_ptr<const Reweighted>>(&repr_)) {
    auto out = (*r)->breakpoints;
    out.push_back((*r)->lo);
    out.push_back((*r)->hi);
    std::erase_if(out, [](double v) { return !std::isfinite(v); });
    return out;
  }
  if (auto m = std::get_if<std::shared_ptr<const Mixture>>(&repr_)) {
    std::vector<double> out;
    for (const auto& c : (*m)->components) {
      if (c.family() == Family::gaussian || c.family() == Family::student_t) continue;
      auto b = c.breakpoints();
      out.insert(out.end(), b.begin(), b.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  return {};
}

double Distribution::gaussian_mean() const { return std::get<Gaussian>(repr_).mean; }
double Distribution::gaussian_sd() const { return std::get<Gaussian>(repr_).sd; }

}  // namespace tailcast
