#include "tailcast/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tailcast {

namespace {

constexpr double kAbsTol = 1e-15;
constexpr std::size_t kMaxPanels = 2000;

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename G>
Panel kronrod_panel(const G& g, double lo, double hi) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, lo, hi, 0, 0.0, &err);
  return {lo, hi, v, err};
}

// Globally adaptive Gauss-Kronrod on a finite interval: the panel with the
// largest error estimate is bisected until the summed error meets
// max(rel_tol |I|, kAbsTol) or the panel budget runs out.
template <typename G>
QuadratureValue adaptive(const G& g, double lo, double hi, double rel_tol) {
  std::priority_queue<Panel> heap;
  heap.push(kronrod_panel(g, lo, hi));
  double value = heap.top().value;
  double error = heap.top().error;
  while (error > std::max(rel_tol * std::abs(value), kAbsTol) && heap.size() < kMaxPanels) {
    const Panel p = heap.top();
    const double mid = 0.5 * (p.lo + p.hi);
    if (!(mid > p.lo && mid < p.hi)) break;
    heap.pop();
    const Panel l = kronrod_panel(g, p.lo, mid);
    const Panel r = kronrod_panel(g, mid, p.hi);
    value += l.value + r.value - p.value;
    error += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }
  // re-sum to shed the drift of the running updates
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {value, error};
}

// f(x) dx with an infinite-range change of variables; zero where f vanishes.
double scaled(const RealFn& f, double x, double jacobian) {
  const double v = f(x);
  return v == 0.0 ? 0.0 : v * jacobian;
}

}  // namespace

QuadratureValue integrate(const RealFn& f, double a, double b, double rel_tol) {
  if (!(a < b)) return {};
  const bool fa = std::isfinite(a), fb = std::isfinite(b);
  if (fa && fb) return adaptive(f, a, b, rel_tol);
  if (fa) {
    // x = a + t / (1 - t), t in [0, 1)
    const auto g = [&](double t) { return scaled(f, a + t / (1.0 - t), 1.0 / ((1.0 - t) * (1.0 - t))); };
    return adaptive(g, 0.0, 1.0, rel_tol);
  }
  if (fb) {
    // x = b - t / (1 - t)
    const auto g = [&](double t) { return scaled(f, b - t / (1.0 - t), 1.0 / ((1.0 - t) * (1.0 - t))); };
    return adaptive(g, 0.0, 1.0, rel_tol);
  }
  // x = t / (1 - t^2), t in (-1, 1)
  const auto g = [&](double t) {
    const double q = 1.0 - t * t;
    return scaled(f, t / q, (1.0 + t * t) / (q * q));
  };
  return adaptive(g, -1.0, 1.0, rel_tol);
}

QuadratureValue integrate_piecewise(const RealFn& f, double a, double b,
                                    std::span<const double> cuts, double rel_tol) {
  std::vector<double> pts{a};
  for (double c : cuts) {
    if (c > a && c < b) pts.push_back(c);
  }
  std::sort(pts.begin() + 1, pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  pts.push_back(b);
  QuadratureValue out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto piece = integrate(f, pts[i], pts[i + 1], rel_tol);
    out.value += piece.value;
    out.error += piece.error;
  }
  return out;
}

double gauss_legendre(const RealFn& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
}

CumulativeIntegral::CumulativeIntegral(RealFn f, std::vector<double> knots, double lo, double hi)
    : f_(std::move(f)), lo_(lo), hi_(hi) {
  if (!(lo < hi)) throw std::invalid_argument("CumulativeIntegral: empty interval");
  std::erase_if(knots, [&](double k) { return !(k > lo && k < hi) || !std::isfinite(k); });
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  if (knots.empty()) {
    if (std::isfinite(lo)) {
      knots.push_back(lo);
    } else if (std::isfinite(hi)) {
      knots.push_back(hi);
    } else {
      knots.push_back(0.0);
    }
  }
  knots_ = std::move(knots);
  const std::size_t k = knots_.size();
  std::vector<double> cells(k + 1);
  cells[0] = integrate(f_, lo_, knots_[0]).value;
  for (std::size_t i = 1; i < k; ++i) cells[i] = integrate(f_, knots_[i - 1], knots_[i]).value;
  cells[k] = integrate(f_, knots_[k - 1], hi_).value;

  // Prefix and suffix sums are kept separately so that small tail integrals
  // are not computed as a difference of two large numbers.
  cumulative_.resize(k);
  tail_.resize(k);
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    acc += cells[i];
    cumulative_[i] = acc;
  }
  acc = 0.0;
  for (std::size_t i = k; i-- > 0;) {
    acc += cells[i + 1];
    tail_[i] = acc;
  }
  total_ = cumulative_.back() + cells[k];
}

double CumulativeIntegral::below(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return total_;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  if (it == knots_.begin()) {
    return std::isfinite(lo_) ? gauss_legendre(f_, lo_, x) : integrate(f_, lo_, x).value;
  }
  const auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  if (it == knots_.end() && !std::isfinite(hi_)) {
    return cumulative_[i] + integrate(f_, knots_[i], x).value;
  }
  return cumulative_[i] + gauss_legendre(f_, knots_[i], x);
}

double CumulativeIntegral::above(double x) const {
  if (x >= hi_) return 0.0;
  if (x <= lo_) return total_;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  if (it == knots_.end()) {
    return std::isfinite(hi_) ? gauss_legendre(f_, x, hi_) : integrate(f_, x, hi_).value;
  }
  const auto j = static_cast<std::size_t>(it - knots_.begin());
  if (j == 0 && !std::isfinite(lo_)) {
    return tail_[0] + integrate(f_, x, knots_[0]).value;
  }
  return tail_[j] + gauss_legendre(f_, x, knots_[j]);
}

}  // namespace tailcast
