#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace phasereg {

inline constexpr std::size_t kDefaultGridSize = 4097;

/// Grid resolution used by tolerance-based invariants: 2/G.
inline double grid_tolerance(std::size_t grid_size) {
  return 2.0 / static_cast<double>(grid_size);
}

/// Closed interval [lo, hi] with lo < hi.
class Interval {
 public:
  Interval() = default;
  Interval(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return hi_ - lo_; }
  bool contains(double x) const { return x >= lo_ && x <= hi_; }
  double clamp(double x) const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
};

inline const Interval kUnitInterval{0.0, 1.0};

/// `count` equally spaced abscissae from lo to hi, endpoints exact.
std::vector<double> uniform_grid(const Interval& domain, std::size_t count);

/// Finite sorted multiset of event locations in a closed interval.
class PointPattern {
 public:
  PointPattern() = default;
  explicit PointPattern(const Interval& domain) : domain_(domain) {}
  /// Sorts `points`. Points outside the domain by more than 1e-12 of its width
  /// are rejected; smaller excursions are clamped.
  PointPattern(const Interval& domain, std::vector<double> points);

  const Interval& domain() const { return domain_; }
  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

 private:
  Interval domain_;
  std::vector<double> points_;
};

/// Probability measure without atoms, stored as a piecewise-linear CDF over a
/// strictly increasing grid spanning the domain. Flat CDF pieces are allowed
/// (zero-density regions); quantiles use the left-continuous inverse.
class DiffuseMeasure {
 public:
  /// Validates: grid strictly increasing from lo to hi, cdf nondecreasing
  /// (ties within 1e-12 are flattened), cdf.front() == 0, cdf.back() == 1.
  DiffuseMeasure(const Interval& domain, std::vector<double> grid,
                 std::vector<double> cdf);

  /// Uniform probability on `support` (a subinterval of `domain`).
  static DiffuseMeasure uniform(const Interval& domain, const Interval& support);
  static DiffuseMeasure uniform(const Interval& domain) {
    return uniform(domain, domain);
  }
  /// Uniform measure on a G-point uniform grid of the domain.
  static DiffuseMeasure uniform_on_grid(const Interval& domain,
                                        std::size_t grid_size);

  /// Builds a measure from (x, F(x)) samples. Both sequences must be
  /// nondecreasing; abscissae are clamped into the domain, coincident
  /// abscissae keep the largest probability, and the endpoints (lo, 0) and
  /// (hi, 1) are added when missing.
  static DiffuseMeasure from_nodes(const Interval& domain,
                                   std::span<const double> xs,
                                   std::span<const double> ps);

  /// Measure whose quantile function interpolates (probs[k], quantiles[k]).
  static DiffuseMeasure from_quantiles(const Interval& domain,
                                       std::span<const double> probs,
                                       std::span<const double> quantiles) {
    return from_nodes(domain, quantiles, probs);
  }

  /// Samples `cdf` on a uniform grid and normalizes to [0, 1].
  template <class Cdf>
  static DiffuseMeasure from_cdf(const Interval& domain, std::size_t grid_size,
                                 Cdf&& cdf);

  const Interval& domain() const { return domain_; }
  std::span<const double> grid() const { return grid_; }
  std::span<const double> cdf_values() const { return cdf_; }
  std::size_t size() const { return grid_.size(); }

  /// Piecewise-linear CDF, clamped to [0, 1] outside the domain.
  double cdf(double x) const;
  /// inf{y : F(y) >= p}, exact for the piecewise-linear CDF.
  double quantile(double p) const;
  /// Quantiles at nondecreasing probabilities, one linear sweep.
  std::vector<double> quantiles(std::span<const double> probs) const;

 private:
  Interval domain_;
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

/// Uniform probability on the atoms of a nonempty point pattern.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(PointPattern pattern);

  const PointPattern& pattern() const { return pattern_; }
  const Interval& domain() const { return pattern_.domain(); }
  std::size_t size() const { return pattern_.size(); }

  /// (#points <= x) / m.
  double cdf(double x) const;
  /// Step quantile: x_(ceil(p m)), with p = 0 mapped to the smallest atom.
  double quantile(double p) const;

  /// Piecewise-linear approximation on a uniform grid: the CDF is the
  /// empirical CDF sampled at the grid nodes, so each atom is spread over the
  /// grid cell that ends at or after it.
  DiffuseMeasure to_diffuse(std::size_t grid_size = kDefaultGridSize) const;

 private:
  PointPattern pattern_;
};

/// Increasing affine bijection between two intervals.
class AffineMap {
 public:
  AffineMap(const Interval& from, const Interval& to)
      : from_(from), to_(to), scale_(to.width() / from.width()) {}
  double operator()(double x) const {
    if (x == from_.hi()) return to_.hi();
    return to_.clamp(to_.lo() + (x - from_.lo()) * scale_);
  }
  double scale() const { return scale_; }
  const Interval& from() const { return from_; }
  const Interval& to() const { return to_; }

 private:
  Interval from_;
  Interval to_;
  double scale_;
};

PointPattern rescale_affine(const PointPattern& pattern, const Interval& from,
                            const Interval& to);
DiffuseMeasure rescale_affine(const DiffuseMeasure& measure,
                              const Interval& from, const Interval& to);

template <class Cdf>
DiffuseMeasure DiffuseMeasure::from_cdf(const Interval& domain,
                                        std::size_t grid_size, Cdf&& cdf) {
  std::vector<double> grid = uniform_grid(domain, grid_size);
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) values[j] = cdf(grid[j]);
  const double f0 = values.front();
  const double span = values.back() - f0;
  for (double& v : values) v = (v - f0) / span;
  values.front() = 0.0;
  values.back() = 1.0;
  return DiffuseMeasure(domain, std::move(grid), std::move(values));
}

}  // namespace phasereg
