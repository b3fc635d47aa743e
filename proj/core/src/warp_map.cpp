#include "phasereg/warp_map.hpp"

#include <algorithm>
#include <cmath>

#include "phasereg/error.hpp"

namespace phasereg {

namespace {
constexpr double kTieTolerance = 1e-12;
}

WarpMap::WarpMap(const Interval& domain, std::vector<double> grid,
                 std::vector<double> values)
    : domain_(domain), grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() < 2 || grid_.size() != values_.size()) {
    throw ValidationError("warp map needs matching grid and values of length >= 2");
  }
  if (grid_.front() != domain.lo() || grid_.back() != domain.hi()) {
    throw ValidationError("warp map grid must span its domain exactly");
  }
  const double slack = kTieTolerance * domain.width();
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    if (j > 0 && !(grid_[j] > grid_[j - 1])) {
      throw ValidationError("warp map grid must be strictly increasing");
    }
    double& v = values_[j];
    if (!std::isfinite(v) || v < domain.lo() - slack || v > domain.hi() + slack) {
      throw ValidationError("warp map values must stay inside the domain");
    }
    v = domain.clamp(v);
    if (j > 0) {
      if (v < values_[j - 1] - slack) {
        throw ValidationError("warp map must be nondecreasing");
      }
      v = std::max(v, values_[j - 1]);
    }
  }
}

WarpMap WarpMap::identity(const Interval& domain) {
  return WarpMap(domain, {domain.lo(), domain.hi()}, {domain.lo(), domain.hi()});
}

double WarpMap::operator()(double x) const {
  if (x <= grid_.front()) return values_.front();
  if (x >= grid_.back()) return values_.back();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - grid_.begin());
  const double t = (x - grid_[j - 1]) / (grid_[j] - grid_[j - 1]);
  return values_[j - 1] + t * (values_[j] - values_[j - 1]);
}

WarpMap WarpMap::inverse() const {
  std::vector<double> grid;
  std::vector<double> values;
  grid.reserve(grid_.size() + 2);
  values.reserve(grid_.size() + 2);
  if (values_.front() > domain_.lo()) {
    grid.push_back(domain_.lo());
    values.push_back(domain_.lo());
  }
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    // On a flat piece keep the first preimage (infimum convention).
    if (!grid.empty() && !(values_[j] > grid.back())) continue;
    grid.push_back(values_[j]);
    values.push_back(grid_[j]);
  }
  if (grid.back() < domain_.hi()) {
    grid.push_back(domain_.hi());
    values.push_back(domain_.hi());
  }
  return WarpMap(domain_, std::move(grid), std::move(values));
}

std::vector<double> merge_grids(std::span<const double> a,
                                std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WarpMap blend(const WarpMap& a, const WarpMap& b, double t) {
  if (a.domain() != b.domain()) {
    throw ValidationError("blended warp maps must share a domain");
  }
  std::vector<double> grid = merge_grids(a.grid(), b.grid());
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    values[j] = (1.0 - t) * a(grid[j]) + t * b(grid[j]);
  }
  return WarpMap(a.domain(), std::move(grid), std::move(values));
}

WarpMap rescale_affine(const WarpMap& map, const Interval& from,
                       const Interval& to) {
  if (map.domain() != from) {
    throw ValidationError("warp map domain does not match the source interval");
  }
  if (from == to) return map;
  const AffineMap affine(from, to);
  std::vector<double> grid;
  std::vector<double> values;
  grid.reserve(map.size());
  values.reserve(map.size());
  for (std::size_t j = 0; j < map.size(); ++j) {
    const double x = affine(map.grid()[j]);
    if (!grid.empty() && !(x > grid.back())) continue;
    grid.push_back(x);
    values.push_back(affine(map.values()[j]));
  }
  grid.back() = to.hi();
  values.back() = affine(map.values().back());
  return WarpMap(to, std::move(grid), std::move(values));
}

}  // namespace phasereg
