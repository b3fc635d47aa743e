#pragma once

#include <cstddef>
#include <string_view>

#include "phasereg/measure.hpp"

namespace phasereg {

enum class KernelKind { gaussian, logistic };

KernelKind parse_kernel_kind(std::string_view name);
std::string_view to_string(KernelKind kind);

/// Symmetric, strictly positive, unit-variance base kernel together with a
/// bandwidth. The bandwidth is expressed on the unit interval.
class KernelSpec {
 public:
  explicit KernelSpec(double sigma, KernelKind kind = KernelKind::gaussian);

  KernelKind kind() const { return kind_; }
  double sigma() const { return sigma_; }

  /// Base distribution function Psi(z).
  double base_cdf(double z) const;
  /// Base density psi(z).
  double base_density(double z) const;
  /// |z| beyond which Psi(z) is within 1e-17 of 0 or 1.
  double tail_cutoff() const;

 private:
  double sigma_;
  KernelKind kind_;
};

/// Boundary-corrected smoothing of a Dirac mass at `center` in [0, 1]: the
/// kernel restricted to [0, 1] (mass 1 - b1 - b2), the two one-sided halves
/// reweighted by 2 b2 (right of the center) and 2 b1 (left), and the leftover
/// 4 b1 b2 spread uniformly. The density is strictly positive on [0, 1] and
/// integrates to one.
struct SmoothedAtom {
  SmoothedAtom(double center, const KernelSpec& kernel);

  double center;
  double sigma;
  double b1;  ///< 1 - Psi((1 - center) / sigma)
  double b2;  ///< Psi(-center / sigma)

  double density(const KernelSpec& kernel, double x) const;
  /// Closed-form CDF on [0, 1].
  double cdf(const KernelSpec& kernel, double x) const;
};

/// CDF of a smoothed atom sampled on a uniform canonical grid.
DiffuseMeasure smooth_atom(double center, const KernelSpec& kernel,
                           std::size_t grid_size = kDefaultGridSize);

/// Uniform mixture of smoothed atoms over the pattern's points, or the uniform
/// measure when the pattern is empty. Patterns on other intervals are mapped
/// to [0, 1], smoothed, and mapped back; `kernel.sigma()` is always in unit
/// interval coordinates.
DiffuseMeasure smooth_pattern(const PointPattern& pattern, const KernelSpec& kernel,
                              std::size_t grid_size = kDefaultGridSize);

/// 3 sigma^2 + 4 max(Psi(-1/sqrt(sigma)), 1 - Psi(1/sqrt(sigma))): bound on
/// the squared W2 distance between a smoothed pattern and its normalized
/// empirical measure. Requires sigma <= 1/4.
double lemma_bound(const KernelSpec& kernel);

inline constexpr double kMaxBandwidth = 0.25;
inline constexpr double kRosenblattExponent = 0.2;

/// min(m^-alpha, 1/4); 1/4 when m == 0.
double default_bandwidth(std::size_t count, double alpha = kRosenblattExponent);

}  // namespace phasereg
