#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phasereg/measure.hpp"

namespace phasereg {

/// Wasserstein barycenter of a finite family of diffuse measures.
struct BarycenterResult {
  DiffuseMeasure mean;
  std::vector<double> probs;      ///< uniform probability grid
  std::vector<double> quantiles;  ///< averaged quantile function at `probs`
  double functional_value = 0.0;  ///< mean squared distance to the inputs

  /// Averaged quantile function, linear between probability nodes.
  double quantile_mean(double p) const;
};

/// Quantile averaging on a uniform probability grid of `grid_size` nodes. The
/// averaged quantile function is nudged towards the uniform quantile by 1e-12
/// so that it is strictly increasing before inversion.
BarycenterResult barycenter(std::span<const DiffuseMeasure> measures,
                            std::size_t grid_size = kDefaultGridSize);

/// (1/n) sum_i W2^2(gamma, measures[i]).
double frechet_functional(const DiffuseMeasure& gamma,
                          std::span<const DiffuseMeasure> measures);

/// Pointwise average of CDFs on the merged grid.
DiffuseMeasure arithmetic_mean(std::span<const DiffuseMeasure> measures);

}  // namespace phasereg
