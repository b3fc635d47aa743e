#include "phasereg/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phasereg/error.hpp"

namespace phasereg {

namespace {

constexpr double kTieTolerance = 1e-12;

// Linear interpolation of y over strictly increasing xs; clamped at the ends.
double interpolate(std::span<const double> xs, std::span<const double> ys,
                   double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return ys[j - 1] + t * (ys[j] - ys[j - 1]);
}

// Left-continuous inverse of a nondecreasing piecewise-linear function given
// by nodes (xs, fs): inf{x : f(x) >= p}.
double generalized_inverse(std::span<const double> xs,
                           std::span<const double> fs, double p) {
  if (p <= fs.front()) return xs.front();
  if (p > fs.back()) return xs.back();
  const auto it = std::lower_bound(fs.begin(), fs.end(), p);
  const std::size_t j = static_cast<std::size_t>(it - fs.begin());
  if (j == 0) return xs.front();
  const double df = fs[j] - fs[j - 1];
  const double t = df > 0.0 ? (p - fs[j - 1]) / df : 1.0;
  return xs[j - 1] + t * (xs[j] - xs[j - 1]);
}

}  // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw ValidationError("interval requires finite lo < hi, got [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

double Interval::clamp(double x) const { return std::clamp(x, lo_, hi_); }

std::vector<double> uniform_grid(const Interval& domain, std::size_t count) {
  if (count < 2) throw ValidationError("grid needs at least two points");
  std::vector<double> grid(count);
  const double step = domain.width() / static_cast<double>(count - 1);
  for (std::size_t j = 0; j < count; ++j) {
    grid[j] = domain.lo() + static_cast<double>(j) * step;
  }
  grid.front() = domain.lo();
  grid.back() = domain.hi();
  return grid;
}

PointPattern::PointPattern(const Interval& domain, std::vector<double> points)
    : domain_(domain), points_(std::move(points)) {
  const double slack = kTieTolerance * domain.width();
  for (double& x : points_) {
    if (!std::isfinite(x) || x < domain.lo() - slack || x > domain.hi() + slack) {
      throw ValidationError("point " + std::to_string(x) +
                            " lies outside the pattern domain");
    }
    x = domain.clamp(x);
  }
  std::sort(points_.begin(), points_.end());
}

DiffuseMeasure::DiffuseMeasure(const Interval& domain, std::vector<double> grid,
                               std::vector<double> cdf)
    : domain_(domain), grid_(std::move(grid)), cdf_(std::move(cdf)) {
  if (grid_.size() < 2 || grid_.size() != cdf_.size()) {
    throw ValidationError("measure needs matching grid and cdf of length >= 2");
  }
  if (grid_.front() != domain.lo() || grid_.back() != domain.hi()) {
    throw ValidationError("measure grid must span its domain exactly");
  }
  for (std::size_t j = 1; j < grid_.size(); ++j) {
    if (!(grid_[j] > grid_[j - 1])) {
      throw ValidationError("measure grid must be strictly increasing");
    }
  }
  if (std::abs(cdf_.front()) > kTieTolerance ||
      std::abs(cdf_.back() - 1.0) > kTieTolerance) {
    throw ValidationError("cdf must start at 0 and end at 1");
  }
  cdf_.front() = 0.0;
  cdf_.back() = 1.0;
  for (std::size_t j = 1; j < cdf_.size(); ++j) {
    if (!std::isfinite(cdf_[j]) || cdf_[j] < cdf_[j - 1] - kTieTolerance) {
      throw ValidationError("cdf must be nondecreasing");
    }
    cdf_[j] = std::clamp(cdf_[j], cdf_[j - 1], 1.0);
  }
}

DiffuseMeasure DiffuseMeasure::uniform(const Interval& domain,
                                       const Interval& support) {
  if (support.lo() < domain.lo() || support.hi() > domain.hi()) {
    throw ValidationError("uniform support must lie inside the domain");
  }
  std::vector<double> xs{support.lo(), support.hi()};
  std::vector<double> ps{0.0, 1.0};
  return from_nodes(domain, xs, ps);
}

DiffuseMeasure DiffuseMeasure::uniform_on_grid(const Interval& domain,
                                               std::size_t grid_size) {
  std::vector<double> grid = uniform_grid(domain, grid_size);
  std::vector<double> cdf(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    cdf[j] = static_cast<double>(j) / static_cast<double>(grid.size() - 1);
  }
  return DiffuseMeasure(domain, std::move(grid), std::move(cdf));
}

DiffuseMeasure DiffuseMeasure::from_nodes(const Interval& domain,
                                          std::span<const double> xs,
                                          std::span<const double> ps) {
  if (xs.size() != ps.size() || xs.empty()) {
    throw ValidationError("node lists must be nonempty and of equal length");
  }
  std::vector<double> grid;
  std::vector<double> cdf;
  grid.reserve(xs.size() + 2);
  cdf.reserve(xs.size() + 2);
  grid.push_back(domain.lo());
  cdf.push_back(0.0);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double x = domain.clamp(xs[k]);
    const double p = std::clamp(ps[k], cdf.back(), 1.0);
    if (x > grid.back()) {
      grid.push_back(x);
      cdf.push_back(p);
    } else {
      // coincident abscissa: keep the right limit
      cdf.back() = std::max(cdf.back(), p);
    }
  }
  if (grid.back() < domain.hi()) {
    grid.push_back(domain.hi());
    cdf.push_back(1.0);
  }
  // An atom at lo is smeared over the first cell.
  cdf.front() = 0.0;
  cdf.back() = 1.0;
  return DiffuseMeasure(domain, std::move(grid), std::move(cdf));
}

double DiffuseMeasure::cdf(double x) const { return interpolate(grid_, cdf_, x); }

double DiffuseMeasure::quantile(double p) const {
  return generalized_inverse(grid_, cdf_, std::clamp(p, 0.0, 1.0));
}

std::vector<double> DiffuseMeasure::quantiles(std::span<const double> probs) const {
  std::vector<double> out(probs.size());
  std::size_t j = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double p = std::clamp(probs[k], 0.0, 1.0);
    while (j < cdf_.size() && cdf_[j] < p) ++j;
    if (j == 0) {
      out[k] = grid_.front();
    } else if (j == cdf_.size()) {
      out[k] = grid_.back();
    } else {
      const double df = cdf_[j] - cdf_[j - 1];
      const double t = df > 0.0 ? (p - cdf_[j - 1]) / df : 1.0;
      out[k] = grid_[j - 1] + t * (grid_[j] - grid_[j - 1]);
    }
  }
  return out;
}

EmpiricalMeasure::EmpiricalMeasure(PointPattern pattern)
    : pattern_(std::move(pattern)) {
  if (pattern_.empty()) {
    throw ValidationError("empirical measure needs at least one point");
  }
}

double EmpiricalMeasure::cdf(double x) const {
  const auto pts = pattern_.points();
  const auto it = std::upper_bound(pts.begin(), pts.end(), x);
  return static_cast<double>(it - pts.begin()) / static_cast<double>(pts.size());
}

double EmpiricalMeasure::quantile(double p) const {
  const auto pts = pattern_.points();
  const double m = static_cast<double>(pts.size());
  const double scaled = std::ceil(std::clamp(p, 0.0, 1.0) * m);
  const std::size_t index = scaled < 1.0 ? 0 : static_cast<std::size_t>(scaled) - 1;
  return pts[std::min(index, pts.size() - 1)];
}

DiffuseMeasure EmpiricalMeasure::to_diffuse(std::size_t grid_size) const {
  std::vector<double> grid = uniform_grid(domain(), grid_size);
  std::vector<double> cdf(grid.size());
  const auto pts = pattern_.points();
  std::size_t count = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    while (count < pts.size() && pts[count] <= grid[j]) ++count;
    cdf[j] = static_cast<double>(count) / static_cast<double>(pts.size());
  }
  cdf.front() = 0.0;
  return DiffuseMeasure(domain(), std::move(grid), std::move(cdf));
}

PointPattern rescale_affine(const PointPattern& pattern, const Interval& from,
                            const Interval& to) {
  if (pattern.domain() != from) {
    throw ValidationError("pattern domain does not match the source interval");
  }
  const AffineMap map(from, to);
  std::vector<double> points;
  points.reserve(pattern.size());
  for (double x : pattern.points()) points.push_back(map(x));
  return PointPattern(to, std::move(points));
}

DiffuseMeasure rescale_affine(const DiffuseMeasure& measure, const Interval& from,
                              const Interval& to) {
  if (measure.domain() != from) {
    throw ValidationError("measure domain does not match the source interval");
  }
  if (from == to) return measure;
  const AffineMap map(from, to);
  std::vector<double> grid;
  grid.reserve(measure.size());
  for (double x : measure.grid()) grid.push_back(map(x));
  grid.front() = to.lo();
  grid.back() = to.hi();
  const auto cdf = measure.cdf_values();
  // Rounding can collapse neighbouring nodes; from_nodes merges them.
  return DiffuseMeasure::from_nodes(to, grid,
                                    std::vector<double>(cdf.begin(), cdf.end()));
}

}  // namespace phasereg
