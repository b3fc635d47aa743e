#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phasereg/measure.hpp"

namespace phasereg {

/// Monotone nondecreasing map of an interval into itself, linear between
/// nodes. Warp maps, registration maps and optimal transport maps all use
/// this representation.
class WarpMap {
 public:
  /// `grid` must be strictly increasing from lo to hi; `values` nondecreasing
  /// within 1e-12 and inside the domain within 1e-12 of its width.
  WarpMap(const Interval& domain, std::vector<double> grid,
          std::vector<double> values);

  static WarpMap identity(const Interval& domain);

  template <class Fn>
  static WarpMap from_function(const Interval& domain, std::size_t grid_size,
                               Fn&& fn);

  const Interval& domain() const { return domain_; }
  std::span<const double> grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return grid_.size(); }

  /// True when the map fixes both domain endpoints (a surjection).
  bool onto() const {
    return values_.front() == domain_.lo() && values_.back() == domain_.hi();
  }

  double operator()(double x) const;

  /// Left-continuous generalized inverse y -> inf{x : T(x) >= y}, built by
  /// swapping nodes. Exact for the piecewise-linear interpolant where it is
  /// strictly increasing; flat pieces become jumps smeared over one cell.
  WarpMap inverse() const;

 private:
  Interval domain_;
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// Pointwise convex combination (1 - t) * a + t * b on the merged grid.
WarpMap blend(const WarpMap& a, const WarpMap& b, double t);

/// Union of two sorted grids, deduplicated.
std::vector<double> merge_grids(std::span<const double> a,
                                std::span<const double> b);

WarpMap rescale_affine(const WarpMap& map, const Interval& from,
                       const Interval& to);

template <class Fn>
WarpMap WarpMap::from_function(const Interval& domain, std::size_t grid_size,
                               Fn&& fn) {
  std::vector<double> grid = uniform_grid(domain, grid_size);
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    values[j] = domain.clamp(fn(grid[j]));
  }
  return WarpMap(domain, std::move(grid), std::move(values));
}

}  // namespace phasereg
