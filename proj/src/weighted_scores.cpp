#include "tailcast/weighted_scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tailcast {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log F and log(1 - F) evaluated on whichever side avoids cancellation.
double log_cdf(const Distribution& f, double z) {
  const double F = f.cdf(z);
  return F > 0.5 ? std::log1p(-f.sf(z)) : std::log(F);
}

double log_sf(const Distribution& f, double z) {
  const double S = f.sf(z);
  return S > 0.5 ? std::log1p(-f.cdf(z)) : std::log(S);
}

std::vector<double> cuts_for(const Distribution& f, const WeightFunction& w) {
  auto cuts = f.breakpoints();
  if (w.kind != WeightFunction::Kind::constant_one) cuts.push_back(w.r);
  return cuts;
}

std::vector<double> scorer_knots(const Distribution& f, const WeightFunction& w) {
  std::vector<double> knots = cuts_for(f, w);
  for (double t = -25.0; t <= 25.0; t += 0.25) {
    knots.push_back(f.quantile(1.0 / (1.0 + std::exp(-t))));
  }
  const double centre = f.mean();
  for (int k = -100; k <= 100; ++k) knots.push_back(centre + 0.1 * k);
  if (w.kind == WeightFunction::Kind::gaussian_left ||
      w.kind == WeightFunction::Kind::gaussian_right) {
    for (int k = -40; k <= 40; ++k) knots.push_back(w.r + 0.25 * w.s * k);
  }
  return knots;
}

}  // namespace

WeightFunction WeightFunction::gaussian_right(double r, double s) {
  if (!(s > 0.0)) throw std::domain_error("gaussian weight: scale must be positive");
  return {Kind::gaussian_right, r, s};
}

WeightFunction WeightFunction::gaussian_left(double r, double s) {
  if (!(s > 0.0)) throw std::domain_error("gaussian weight: scale must be positive");
  return {Kind::gaussian_left, r, s};
}

double WeightFunction::operator()(double z) const {
  switch (kind) {
    case Kind::constant_one: return 1.0;
    case Kind::indicator_right: return z >= r ? 1.0 : 0.0;
    case Kind::indicator_left: return z <= r ? 1.0 : 0.0;
    case Kind::gaussian_right: return normal_cdf((z - r) / s);
    case Kind::gaussian_left: return normal_cdf(-(z - r) / s);
  }
  return 1.0;
}

double WeightFunction::lo() const { return kind == Kind::indicator_right ? r : -kInf; }

double WeightFunction::hi() const { return kind == Kind::indicator_left ? r : kInf; }

std::string to_string(WeightFunction::Kind kind) {
  switch (kind) {
    case WeightFunction::Kind::constant_one: return "constant_one";
    case WeightFunction::Kind::indicator_right: return "indicator_right";
    case WeightFunction::Kind::indicator_left: return "indicator_left";
    case WeightFunction::Kind::gaussian_right: return "gaussian_right";
    case WeightFunction::Kind::gaussian_left: return "gaussian_left";
  }
  return "?";
}

WeightFunction::Kind parse_weight_kind(std::string_view name) {
  for (auto k : {WeightFunction::Kind::constant_one, WeightFunction::Kind::indicator_right,
                 WeightFunction::Kind::indicator_left, WeightFunction::Kind::gaussian_right,
                 WeightFunction::Kind::gaussian_left}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown weight kind: " + std::string(name));
}

std::string WeightFunction::label() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind != Kind::constant_one) os << '(' << r;
  if (kind == Kind::gaussian_left || kind == Kind::gaussian_right) os << ',' << s;
  if (kind != Kind::constant_one) os << ')';
  return os.str();
}

double weighted_mass(const Distribution& f, const WeightFunction& w) {
  using K = WeightFunction::Kind;
  switch (w.kind) {
    case K::constant_one: return 1.0;
    case K::indicator_right: return f.sf(w.r);
    case K::indicator_left: return f.cdf(w.r);
    case K::gaussian_right:
    case K::gaussian_left:
      if (f.family() == Family::gaussian) {
        // P(Z_s <= X - r) with Z_s ~ N(0, s^2) independent of X
        const double scale = std::hypot(f.gaussian_sd(), w.s);
        const double z = (f.gaussian_mean() - w.r) / scale;
        return w.kind == K::gaussian_right ? normal_cdf(z) : normal_cdf(-z);
      }
      break;
  }
  const auto cuts = cuts_for(f, w);
  return integrate_piecewise([&](double z) { return w(z) * f.pdf(z); }, f.support_lo(),
                             f.support_hi(), cuts)
      .value;
}

double unweighted_mass(const Distribution& f, const WeightFunction& w) {
  using K = WeightFunction::Kind;
  switch (w.kind) {
    case K::constant_one: return 0.0;
    case K::indicator_right: return f.cdf(w.r);
    case K::indicator_left: return f.sf(w.r);
    case K::gaussian_right: return weighted_mass(f, WeightFunction::gaussian_left(w.r, w.s));
    case K::gaussian_left: return weighted_mass(f, WeightFunction::gaussian_right(w.r, w.s));
  }
  return 0.0;
}

double upper_tail_twcrps(const Distribution& f, double r) {
  const double hi = f.support_hi();
  if (r >= hi) return 0.0;
  const double a = r;
  double extra = 0.0;
  double start = a;
  if (f.support_lo() > a) {  // S = 1 below the support
    extra = f.support_lo() - a;
    start = f.support_lo();
  }
  const auto cuts = f.breakpoints();
  return extra + integrate_piecewise(
                     [&](double z) {
                       const double S = f.sf(z);
                       return S * S;
                     },
                     start, hi, cuts)
                     .value;
}

double lower_tail_twcrps(const Distribution& f, double r) {
  const double lo = f.support_lo();
  if (r <= lo) return 0.0;
  double extra = 0.0;
  double end = r;
  if (f.support_hi() < r) {  // F = 1 above the support
    extra = r - f.support_hi();
    end = f.support_hi();
  }
  const auto cuts = f.breakpoints();
  return extra + integrate_piecewise(
                     [&](double z) {
                       const double F = f.cdf(z);
                       return F * F;
                     },
                     lo, end, cuts)
                     .value;
}

double twcrps(const Distribution& f, double y, const WeightFunction& w) {
  using K = WeightFunction::Kind;
  const auto cuts = cuts_for(f, w);
  const RealFn one = [](double) { return 1.0; };
  switch (w.kind) {
    case K::indicator_right:
      if (y <= w.r) return upper_tail_twcrps(f, w.r);
      return weighted_brier_integral(f, y, one, w.r, kInf, cuts).value;
    case K::indicator_left:
      if (y >= w.r) return lower_tail_twcrps(f, w.r);
      return weighted_brier_integral(f, y, one, -kInf, w.r, cuts).value;
    case K::constant_one:
      return weighted_brier_integral(f, y, one, -kInf, kInf, cuts).value;
    case K::gaussian_right:
    case K::gaussian_left:
      break;
  }
  const RealFn weight = [&w](double z) { return w(z); };
  return weighted_brier_integral(f, y, weight, -kInf, kInf, cuts).value;
}

double cl(const Distribution& f, double y, const WeightFunction& w) {
  const double mass = weighted_mass(f, w);
  if (!(mass > 0.0)) throw std::domain_error("cl: weighted mass of the forecast is zero");
  const double wy = w(y);
  if (wy == 0.0) return 0.0;
  const double lp = f.log_pdf(y);
  if (!std::isfinite(lp)) return kInf;
  return -wy * (lp - std::log(mass));
}

double csl(const Distribution& f, double y, const WeightFunction& w) {
  const double wy = w(y);
  double out = 0.0;
  if (wy > 0.0) {
    const double lp = f.log_pdf(y);
    if (!std::isfinite(lp)) return kInf;
    out -= wy * lp;
  }
  if (wy < 1.0) {
    const double rest = unweighted_mass(f, w);
    if (!(rest > 0.0)) return kInf;
    out -= (1.0 - wy) * std::log(rest);
  }
  return out;
}

TwcrlsValue twcrls_detailed(const Distribution& f, double y, const WeightFunction& w) {
  const double lo = std::max(w.lo(), -kInf);
  const double hi = w.hi();
  const auto cuts = cuts_for(f, w);
  // Positive weight where the realized indicator has zero predicted
  // probability makes the score infinite.
  const double slo = f.support_lo();
  const double shi = f.support_hi();
  auto weight_positive_on = [&](double a, double b) {
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (!(a < b)) return false;
    return integrate([&](double z) { return w(z); }, a, b).value > 0.0;
  };
  if ((y > shi && weight_positive_on(shi, y)) || (y < slo && weight_positive_on(y, slo))) {
    return {kInf, 0.0};
  }
  TwcrlsValue out{0.0, 0.0};
  // z < y: -log(1 - F(z)); z >= y: -log F(z)
  const double left_lo = std::max(lo, slo);
  const double left_hi = std::min({y, hi, shi});
  if (left_lo < left_hi) {
    const auto v = integrate_piecewise(
        [&](double z) {
          const double wz = w(z);
          return wz == 0.0 ? 0.0 : -wz * log_sf(f, z);
        },
        left_lo, left_hi, cuts);
    out.value += v.value;
    out.error_bound += v.error;
  }
  const double right_lo = std::max({y, lo, slo});
  const double right_hi = std::min(hi, shi);
  if (right_lo < right_hi) {
    const auto v = integrate_piecewise(
        [&](double z) {
          const double wz = w(z);
          return wz == 0.0 ? 0.0 : -wz * log_cdf(f, z);
        },
        right_lo, right_hi, cuts);
    out.value += v.value;
    out.error_bound += v.error;
  }
  return out;
}

double twcrls(const Distribution& f, double y, const WeightFunction& w) {
  return twcrls_detailed(f, y, w).value;
}

double improper_product(ScoreRule base, const Distribution& f, double y, const WeightFunction& w) {
  const double wy = w(y);
  if (wy == 0.0) return 0.0;
  switch (base) {
    case ScoreRule::logs: return wy * logs(f, y);
    case ScoreRule::crps: return wy * crps(f, y);
    default: break;
  }
  throw std::invalid_argument("improper_product: base rule must be LogS or CRPS");
}

Distribution hedge_density(const Distribution& g, const WeightFunction& w) {
  if (w.kind == WeightFunction::Kind::constant_one) return g;
  if (!(weighted_mass(g, w) > 0.0)) {
    throw std::domain_error("hedge_density: weight has no mass under g");
  }
  std::vector<double> cuts;
  cuts.push_back(w.r);
  return Distribution::reweighted(g, [w](double z) { return w(z); }, cuts, w.lo(), w.hi());
}

double cl_quadratic(double f_mean, double f_sd, double y, const WeightFunction& w) {
  if (!(f_sd > 0.0)) throw std::domain_error("cl_quadratic: sd must be positive");
  return cl(Distribution::gaussian(f_mean, f_sd), y, w);
}

double csl_quadratic(double f_mean, double f_sd, double y, const WeightFunction& w) {
  if (!(f_sd > 0.0)) throw std::domain_error("csl_quadratic: sd must be positive");
  return csl(Distribution::gaussian(f_mean, f_sd), y, w);
}

double quadratic_expected_difference(QuadraticRule rule, double f_mean, double f_sd) {
  if (!(f_sd > 0.0)) throw std::domain_error("quadratic_expected_difference: sd must be positive");
  const double r3 = std::numbers::sqrt3;
  const double mu = f_mean;
  const double s2 = f_sd * f_sd;
  const double quad = 3.0 * (r3 - 1.0) * mu * mu - 6.0 * mu + (3.0 * r3 - 1.0) * (1.0 - s2);
  const double t = (1.0 - mu) / f_sd;
  if (rule == QuadraticRule::cl_q) {
    // c_g = P_G(Y >= 1) times the difference of Kullback-Leibler divergences.
    const double cg = (r3 - 1.0) / (2.0 * r3);
    const double kl = std::log(f_sd * normal_cdf(-t) / normal_cdf(-1.0)) +
                      quad / (6.0 * (r3 - 1.0) * s2);
    return cg * kl;
  }
  return (r3 - 1.0) / (2.0 * r3) * std::log(f_sd) -
         (r3 + 1.0) / (2.0 * r3) * std::log(normal_cdf(t) / normal_cdf(1.0)) +
         quad / (12.0 * r3 * s2);
}

WeightedScorer::WeightedScorer(Distribution f, WeightFunction w)
    : f_(std::move(f)), w_(w), gaussian_(f_.family() == Family::gaussian) {
  mass_ = weighted_mass(f_, w_);
  log_mass_ = mass_ > 0.0 ? std::log(mass_) : -kInf;
  const double rest = unweighted_mass(f_, w_);
  log_complement_ = rest > 0.0 ? std::log(rest) : -kInf;

  const double lo = f_.support_lo();
  const double hi = f_.support_hi();
  if (std::isfinite(lo) || std::isfinite(hi)) {
    throw std::invalid_argument("WeightedScorer: forecast needs unbounded support");
  }
  const auto knots = scorer_knots(f_, w_);
  const Distribution& d = f_;
  const WeightFunction ww = w_;
  if (!gaussian_) {
    crps_lower_ = CumulativeIntegral(
        [d](double z) {
          const double F = d.cdf(z);
          return F * F;
        },
        knots, -kInf, kInf);
    crps_upper_ = CumulativeIntegral(
        [d](double z) {
          const double S = d.sf(z);
          return S * S;
        },
        knots, -kInf, kInf);
  }
  tw_lower_ = CumulativeIntegral(
      [d, ww](double z) {
        const double wz = ww(z);
        if (wz == 0.0) return 0.0;
        const double F = d.cdf(z);
        return wz * F * F;
      },
      knots, ww.lo(), ww.hi());
  tw_upper_ = CumulativeIntegral(
      [d, ww](double z) {
        const double wz = ww(z);
        if (wz == 0.0) return 0.0;
        const double S = d.sf(z);
        return wz * S * S;
      },
      knots, ww.lo(), ww.hi());
}

double WeightedScorer::logs(double y) const { return -f_.log_pdf(y); }

double WeightedScorer::crps(double y) const {
  if (gaussian_) return crps_gaussian(f_.gaussian_mean(), f_.gaussian_sd(), y);
  return crps_lower_.below(y) + crps_upper_.above(y);
}

double WeightedScorer::twcrps(double y) const { return tw_lower_.below(y) + tw_upper_.above(y); }

double WeightedScorer::cl(double y) const {
  if (!(mass_ > 0.0)) throw std::domain_error("cl: weighted mass of the forecast is zero");
  const double wy = w_(y);
  if (wy == 0.0) return 0.0;
  return -wy * (f_.log_pdf(y) - log_mass_);
}

double WeightedScorer::csl(double y) const {
  const double wy = w_(y);
  double out = 0.0;
  if (wy > 0.0) out -= wy * f_.log_pdf(y);
  if (wy < 1.0) out -= (1.0 - wy) * log_complement_;
  return out;
}

double WeightedScorer::score(ScoreRule rule, double y) const {
  switch (rule) {
    case ScoreRule::logs: return logs(y);
    case ScoreRule::crps: return crps(y);
    case ScoreRule::twcrps: return twcrps(y);
    case ScoreRule::cl: return cl(y);
    case ScoreRule::csl: return csl(y);
    default: break;
  }
  throw std::invalid_argument("WeightedScorer: unsupported rule " + to_string(rule));
}

}  // namespace tailcast
