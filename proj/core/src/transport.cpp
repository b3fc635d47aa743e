#include "phasereg/transport.hpp"

#include <algorithm>
#include <cmath>

#include "phasereg/error.hpp"

namespace phasereg {

namespace {

// One linear piece of a monotone function of a single variable: on
// [a0, a1] the function goes linearly from v0 to v1. Quantile functions are
// pieces in probability, CDFs are pieces in space.
struct Piece {
  double a0, a1, v0, v1;
  double at(double a) const {
    if (a1 <= a0) return v0;
    return v0 + (a - a0) / (a1 - a0) * (v1 - v0);
  }
};

std::vector<Piece> quantile_pieces(const DiffuseMeasure& mu) {
  const auto x = mu.grid();
  const auto p = mu.cdf_values();
  std::vector<Piece> out;
  out.reserve(x.size());
  for (std::size_t j = 1; j < x.size(); ++j) {
    if (p[j] > p[j - 1]) out.push_back({p[j - 1], p[j], x[j - 1], x[j]});
  }
  return out;
}

std::vector<Piece> quantile_pieces(const EmpiricalMeasure& mu) {
  const auto x = mu.pattern().points();
  const double m = static_cast<double>(x.size());
  std::vector<Piece> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.push_back({static_cast<double>(i) / m, static_cast<double>(i + 1) / m,
                   x[i], x[i]});
  }
  out.back().a1 = 1.0;
  return out;
}

std::vector<Piece> cdf_pieces(const DiffuseMeasure& mu) {
  const auto x = mu.grid();
  const auto p = mu.cdf_values();
  std::vector<Piece> out;
  out.reserve(x.size());
  for (std::size_t j = 1; j < x.size(); ++j) {
    out.push_back({x[j - 1], x[j], p[j - 1], p[j]});
  }
  return out;
}

// The empirical CDF is right-continuous and constant between breakpoints, so
// each piece carries the value at its left end.
std::vector<Piece> cdf_pieces(const EmpiricalMeasure& mu) {
  const Interval& d = mu.domain();
  const auto pts = mu.pattern().points();
  std::vector<double> breaks;
  breaks.reserve(pts.size() + 2);
  breaks.push_back(d.lo());
  for (double x : pts) {
    if (x > breaks.back()) breaks.push_back(x);
  }
  if (breaks.back() < d.hi()) breaks.push_back(d.hi());
  std::vector<Piece> out;
  out.reserve(breaks.size());
  for (std::size_t k = 1; k < breaks.size(); ++k) {
    const double f = mu.cdf(breaks[k - 1]);
    out.push_back({breaks[k - 1], breaks[k], f, f});
  }
  return out;
}

// Walks two tilings of the same interval and hands each common sub-interval
// [a, b] with the difference of the two functions at both ends to `fn`.
template <class Fn>
double integrate_difference(const std::vector<Piece>& f,
                            const std::vector<Piece>& g, Fn&& fn) {
  double total = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  double a = std::min(f.front().a0, g.front().a0);
  while (i < f.size() && j < g.size()) {
    const double b = std::min(f[i].a1, g[j].a1);
    if (b > a) {
      const double u = f[i].at(a) - g[j].at(a);
      const double v = f[i].at(b) - g[j].at(b);
      total += fn(b - a, u, v);
      a = b;
    }
    if (f[i].a1 <= b) ++i;
    if (j < g.size() && g[j].a1 <= b) ++j;
  }
  return total;
}

double squared_linear(double width, double u, double v) {
  return width * (u * u + u * v + v * v) / 3.0;
}

double absolute_linear(double width, double u, double v) {
  if ((u >= 0.0 && v >= 0.0) || (u <= 0.0 && v <= 0.0)) {
    return width * (std::abs(u) + std::abs(v)) / 2.0;
  }
  return width * (u * u + v * v) / (2.0 * (std::abs(u) + std::abs(v)));
}

template <class A, class B>
double w2_impl(const A& mu, const B& nu) {
  if (mu.domain() != nu.domain()) {
    throw ValidationError("Wasserstein distance needs measures on one domain");
  }
  const double sq =
      integrate_difference(quantile_pieces(mu), quantile_pieces(nu), squared_linear);
  return std::sqrt(std::max(sq, 0.0));
}

template <class A, class B>
double w1_impl(const A& mu, const B& nu) {
  if (mu.domain() != nu.domain()) {
    throw ValidationError("Wasserstein distance needs measures on one domain");
  }
  return integrate_difference(cdf_pieces(mu), cdf_pieces(nu), absolute_linear);
}

}  // namespace

double wasserstein2(const DiffuseMeasure& mu, const DiffuseMeasure& nu) {
  return w2_impl(mu, nu);
}
double wasserstein2(const DiffuseMeasure& mu, const EmpiricalMeasure& nu) {
  return w2_impl(mu, nu);
}
double wasserstein2(const EmpiricalMeasure& mu, const DiffuseMeasure& nu) {
  return w2_impl(mu, nu);
}
double wasserstein2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  return w2_impl(mu, nu);
}

double wasserstein2_empirical_oracle(const EmpiricalMeasure& a,
                                     const EmpiricalMeasure& b) {
  if (a.size() != b.size()) {
    throw ValidationError("sorted matching needs equal point counts");
  }
  const auto x = a.pattern().points();
  const auto y = b.pattern().points();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(sum / static_cast<double>(x.size()));
}

double wasserstein1(const DiffuseMeasure& mu, const DiffuseMeasure& nu) {
  return w1_impl(mu, nu);
}
double wasserstein1(const DiffuseMeasure& mu, const EmpiricalMeasure& nu) {
  return w1_impl(mu, nu);
}
double wasserstein1(const EmpiricalMeasure& mu, const DiffuseMeasure& nu) {
  return w1_impl(mu, nu);
}
double wasserstein1(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  return w1_impl(mu, nu);
}

WarpMap optimal_map(const DiffuseMeasure& mu, const DiffuseMeasure& nu) {
  if (mu.domain() != nu.domain()) {
    throw ValidationError("optimal map needs measures on one domain");
  }
  // Kinks of F_nu^{-1} o F_mu sit at mu's nodes and at the points where F_mu
  // crosses one of nu's probability nodes.
  std::vector<double> kinks = mu.quantiles(nu.cdf_values());
  std::sort(kinks.begin(), kinks.end());
  std::vector<double> grid = merge_grids(mu.grid(), kinks);
  std::vector<double> probs(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) probs[j] = mu.cdf(grid[j]);
  // Rounding in F_mu can step back by an ulp; quantiles() wants sorted input.
  for (std::size_t j = 1; j < probs.size(); ++j) {
    probs[j] = std::max(probs[j], probs[j - 1]);
  }
  std::vector<double> values = nu.quantiles(probs);
  return WarpMap(mu.domain(), std::move(grid), std::move(values));
}

PointPattern push_forward(const PointPattern& pattern, const WarpMap& map) {
  if (pattern.domain() != map.domain()) {
    throw ValidationError("push-forward needs a map on the pattern's domain");
  }
  std::vector<double> points;
  points.reserve(pattern.size());
  for (double x : pattern.points()) points.push_back(map(x));
  return PointPattern(pattern.domain(), std::move(points));
}

DiffuseMeasure push_forward(const DiffuseMeasure& measure, const WarpMap& map) {
  if (measure.domain() != map.domain()) {
    throw ValidationError("push-forward needs a map on the measure's domain");
  }
  // Between consecutive nodes of the merged grid both F and T are linear, so
  // the image nodes (T(x), F(x)) describe the image CDF exactly wherever T is
  // strictly increasing.
  const std::vector<double> grid = merge_grids(measure.grid(), map.grid());
  std::vector<double> xs(grid.size());
  std::vector<double> ps(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    xs[j] = map(grid[j]);
    ps[j] = measure.cdf(grid[j]);
    if (j > 0) {
      xs[j] = std::max(xs[j], xs[j - 1]);
      ps[j] = std::max(ps[j], ps[j - 1]);
    }
  }
  return DiffuseMeasure::from_nodes(measure.domain(), xs, ps);
}

DiffuseMeasure geodesic(const DiffuseMeasure& mu, const DiffuseMeasure& nu,
                        double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ValidationError("geodesic time must lie in [0, 1]");
  }
  const WarpMap transport = optimal_map(mu, nu);
  return push_forward(mu, blend(WarpMap::identity(mu.domain()), transport, t));
}

}  // namespace phasereg
