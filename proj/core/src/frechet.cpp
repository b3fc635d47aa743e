#include "phasereg/frechet.hpp"

#include <algorithm>

#include "phasereg/error.hpp"
#include "phasereg/transport.hpp"
#include "phasereg/warp_map.hpp"

namespace phasereg {

namespace {

constexpr double kJitter = 1e-12;

void require_common_domain(std::span<const DiffuseMeasure> measures) {
  if (measures.empty()) throw ValidationError("need at least one measure");
  for (const auto& mu : measures) {
    if (mu.domain() != measures.front().domain()) {
      throw ValidationError("measures must share a domain");
    }
  }
}

}  // namespace

double BarycenterResult::quantile_mean(double p) const {
  p = std::clamp(p, 0.0, 1.0);
  const auto it = std::upper_bound(probs.begin(), probs.end(), p);
  if (it == probs.end()) return quantiles.back();
  const std::size_t j = static_cast<std::size_t>(it - probs.begin());
  const double t = (p - probs[j - 1]) / (probs[j] - probs[j - 1]);
  return quantiles[j - 1] + t * (quantiles[j] - quantiles[j - 1]);
}

BarycenterResult barycenter(std::span<const DiffuseMeasure> measures,
                            std::size_t grid_size) {
  require_common_domain(measures);
  const Interval domain = measures.front().domain();
  std::vector<double> probs = uniform_grid(kUnitInterval, grid_size);
  std::vector<double> average(probs.size(), 0.0);
  for (const auto& mu : measures) {
    const std::vector<double> q = mu.quantiles(probs);
    for (std::size_t k = 0; k < q.size(); ++k) average[k] += q[k];
  }
  const double n = static_cast<double>(measures.size());
  for (std::size_t k = 0; k < average.size(); ++k) {
    const double uniform_q = domain.lo() + probs[k] * domain.width();
    average[k] = (1.0 - kJitter) * (average[k] / n) + kJitter * uniform_q;
  }

  DiffuseMeasure mean = DiffuseMeasure::from_quantiles(domain, probs, average);
  const double value = frechet_functional(mean, measures);
  return BarycenterResult{std::move(mean), std::move(probs), std::move(average), value};
}

double frechet_functional(const DiffuseMeasure& gamma,
                          std::span<const DiffuseMeasure> measures) {
  if (measures.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& mu : measures) {
    const double d = wasserstein2(gamma, mu);
    sum += d * d;
  }
  return sum / static_cast<double>(measures.size());
}

DiffuseMeasure arithmetic_mean(std::span<const DiffuseMeasure> measures) {
  require_common_domain(measures);
  std::vector<double> grid(measures.front().grid().begin(),
                           measures.front().grid().end());
  for (std::size_t i = 1; i < measures.size(); ++i) {
    const auto other = measures[i].grid();
    if (!std::equal(grid.begin(), grid.end(), other.begin(), other.end())) {
      grid = merge_grids(grid, other);
    }
  }
  std::vector<double> cdf(grid.size(), 0.0);
  for (const auto& mu : measures) {
    for (std::size_t j = 0; j < grid.size(); ++j) cdf[j] += mu.cdf(grid[j]);
  }
  const double n = static_cast<double>(measures.size());
  const double f0 = cdf.front() / n;
  const double f1 = cdf.back() / n;
  for (double& f : cdf) f = (f / n - f0) / (f1 - f0);
  cdf.front() = 0.0;
  cdf.back() = 1.0;
  return DiffuseMeasure(measures.front().domain(), std::move(grid), std::move(cdf));
}

}  // namespace phasereg
