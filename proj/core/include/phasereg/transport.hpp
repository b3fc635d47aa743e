#pragma once

#include "phasereg/measure.hpp"
#include "phasereg/warp_map.hpp"

namespace phasereg {

// Optimal transport on the line. Distances are computed from quantile
// functions, which are piecewise linear (diffuse) or piecewise constant
// (empirical); the L2/L1 integrals over the merged breakpoints are evaluated
// in closed form, so no additional quadrature grid is involved.

/// Quadratic Wasserstein distance; both arguments must share a domain.
double wasserstein2(const DiffuseMeasure& mu, const DiffuseMeasure& nu);
double wasserstein2(const DiffuseMeasure& mu, const EmpiricalMeasure& nu);
double wasserstein2(const EmpiricalMeasure& mu, const DiffuseMeasure& nu);
double wasserstein2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

/// Sorted matching, sqrt(mean (x_(i) - y_(i))^2). Requires equal counts.
/// Independent of the quantile machinery; used as a reference.
double wasserstein2_empirical_oracle(const EmpiricalMeasure& a,
                                     const EmpiricalMeasure& b);

/// Integral of |F_mu - F_nu| over the domain.
double wasserstein1(const DiffuseMeasure& mu, const DiffuseMeasure& nu);
double wasserstein1(const DiffuseMeasure& mu, const EmpiricalMeasure& nu);
double wasserstein1(const EmpiricalMeasure& mu, const DiffuseMeasure& nu);
double wasserstein1(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

/// Monotone rearrangement x -> F_nu^{-1}(F_mu(x)). Sampled at mu's grid and
/// at the mu-quantiles of nu's probability nodes, which makes it exact for
/// piecewise-linear CDFs.
WarpMap optimal_map(const DiffuseMeasure& mu, const DiffuseMeasure& nu);

PointPattern push_forward(const PointPattern& pattern, const WarpMap& map);
/// Image measure with quantile function map o Q_mu.
DiffuseMeasure push_forward(const DiffuseMeasure& measure, const WarpMap& map);

/// Constant-speed geodesic [(1 - t) id + t T]_# mu, T = optimal_map(mu, nu).
DiffuseMeasure geodesic(const DiffuseMeasure& mu, const DiffuseMeasure& nu,
                        double t);

}  // namespace phasereg
