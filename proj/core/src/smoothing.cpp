#include "phasereg/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "phasereg/error.hpp"

namespace phasereg {

namespace {

// Logistic with unit variance: scale s satisfies s^2 pi^2 / 3 = 1.
const double kLogisticScale = std::sqrt(3.0) / std::numbers::pi;

}  // namespace

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "gaussian") return KernelKind::gaussian;
  if (name == "logistic") return KernelKind::logistic;
  throw ValidationError("unknown kernel '" + std::string(name) + "'");
}

std::string_view to_string(KernelKind kind) {
  return kind == KernelKind::gaussian ? "gaussian" : "logistic";
}

KernelSpec::KernelSpec(double sigma, KernelKind kind) : sigma_(sigma), kind_(kind) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("kernel bandwidth must be positive");
  }
}

double KernelSpec::base_cdf(double z) const {
  switch (kind_) {
    case KernelKind::gaussian:
      return 0.5 * std::erfc(-z / std::numbers::sqrt2);
    case KernelKind::logistic:
      return 1.0 / (1.0 + std::exp(-z / kLogisticScale));
  }
  return 0.0;
}

double KernelSpec::base_density(double z) const {
  switch (kind_) {
    case KernelKind::gaussian:
      return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    case KernelKind::logistic: {
      const double e = std::exp(-std::abs(z) / kLogisticScale);
      return e / (kLogisticScale * (1.0 + e) * (1.0 + e));
    }
  }
  return 0.0;
}

double KernelSpec::tail_cutoff() const {
  return kind_ == KernelKind::gaussian ? 8.75 : 22.0;
}

SmoothedAtom::SmoothedAtom(double y, const KernelSpec& kernel)
    : center(y), sigma(kernel.sigma()) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw ValidationError("smoothed atom center must lie in [0, 1]");
  }
  b1 = 1.0 - kernel.base_cdf((1.0 - y) / sigma);
  b2 = kernel.base_cdf(-y / sigma);
}

double SmoothedAtom::density(const KernelSpec& kernel, double x) const {
  const double k = kernel.base_density((x - center) / sigma) / sigma;
  double weight = 1.0;
  if (x > center) weight += 2.0 * b2;
  if (x < center) weight += 2.0 * b1;
  return k * weight + 4.0 * b1 * b2;
}

double SmoothedAtom::cdf(const KernelSpec& kernel, double x) const {
  x = std::clamp(x, 0.0, 1.0);
  const double psi = kernel.base_cdf((x - center) / sigma);
  const double uniform = 4.0 * b1 * b2;
  if (x <= center) {
    return (1.0 + 2.0 * b1) * (psi - b2) + uniform * x;
  }
  const double at_center = (1.0 + 2.0 * b1) * (0.5 - b2) + uniform * center;
  return at_center + (1.0 + 2.0 * b2) * (psi - 0.5) + uniform * (x - center);
}

DiffuseMeasure smooth_atom(double center, const KernelSpec& kernel,
                           std::size_t grid_size) {
  const SmoothedAtom atom(center, kernel);
  std::vector<double> grid = uniform_grid(kUnitInterval, grid_size);
  std::vector<double> cdf(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) cdf[j] = atom.cdf(kernel, grid[j]);
  return DiffuseMeasure(kUnitInterval, std::move(grid), std::move(cdf));
}

namespace {

// Mixture CDF on the uniform unit grid. Away from its center an atom's CDF is
// affine in x (Psi has saturated to 0 or 1 within 1e-17), so only the window
// |x - y| <= cutoff * sigma is evaluated pointwise; the affine tails are
// accumulated with difference arrays.
std::vector<double> mixture_cdf(std::span<const double> centers,
                                const KernelSpec& kernel,
                                std::span<const double> grid) {
  const std::size_t g = grid.size();
  const double step = 1.0 / static_cast<double>(g - 1);
  const double reach = kernel.tail_cutoff() * kernel.sigma();
  std::vector<double> sum(g, 0.0);
  std::vector<double> intercept(g + 1, 0.0);
  std::vector<double> slope(g + 1, 0.0);

  auto add_affine = [&](std::size_t first, std::size_t last_excl, double c0,
                        double c1) {
    if (first >= last_excl) return;
    intercept[first] += c0;
    intercept[last_excl] -= c0;
    slope[first] += c1;
    slope[last_excl] -= c1;
  };

  for (double y : centers) {
    const SmoothedAtom atom(y, kernel);
    const double uniform = 4.0 * atom.b1 * atom.b2;
    const auto lo_index = static_cast<std::ptrdiff_t>(std::ceil((y - reach) / step));
    const auto hi_index = static_cast<std::ptrdiff_t>(std::floor((y + reach) / step));
    const std::size_t first =
        static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(lo_index, 0, static_cast<std::ptrdiff_t>(g)));
    const std::size_t last_excl = static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(hi_index + 1, 0, static_cast<std::ptrdiff_t>(g)));

    // Left tail: Psi -> 0.
    add_affine(0, first, -(1.0 + 2.0 * atom.b1) * atom.b2, uniform);
    for (std::size_t j = first; j < last_excl; ++j) sum[j] += atom.cdf(kernel, grid[j]);
    // Right tail: Psi -> 1.
    const double at_center =
        (1.0 + 2.0 * atom.b1) * (0.5 - atom.b2) + uniform * y;
    add_affine(last_excl, g, at_center + 0.5 * (1.0 + 2.0 * atom.b2) - uniform * y,
               uniform);
  }

  double c0 = 0.0;
  double c1 = 0.0;
  const double m = static_cast<double>(centers.size());
  for (std::size_t j = 0; j < g; ++j) {
    c0 += intercept[j];
    c1 += slope[j];
    sum[j] = (sum[j] + c0 + c1 * grid[j]) / m;
  }
  return sum;
}

}  // namespace

DiffuseMeasure smooth_pattern(const PointPattern& pattern, const KernelSpec& kernel,
                              std::size_t grid_size) {
  const Interval domain = pattern.domain();
  if (pattern.empty()) return DiffuseMeasure::uniform_on_grid(domain, grid_size);

  std::vector<double> centers;
  centers.reserve(pattern.size());
  const AffineMap to_unit(domain, kUnitInterval);
  for (double x : pattern.points()) centers.push_back(to_unit(x));

  std::vector<double> grid = uniform_grid(kUnitInterval, grid_size);
  std::vector<double> cdf = mixture_cdf(centers, kernel, grid);
  if (std::abs(cdf.back() - 1.0) > 1e-12) {
    throw std::logic_error("smoothed mixture lost mass: F(1) = " +
                           std::to_string(cdf.back()));
  }
  cdf.front() = 0.0;
  cdf.back() = 1.0;
  DiffuseMeasure unit(kUnitInterval, std::move(grid), std::move(cdf));
  return rescale_affine(unit, kUnitInterval, domain);
}

double lemma_bound(const KernelSpec& kernel) {
  const double sigma = kernel.sigma();
  if (sigma > kMaxBandwidth) {
    throw ValidationError("smoothing bound requires sigma <= 1/4");
  }
  const double r = 1.0 / std::sqrt(sigma);
  const double tail = std::max(kernel.base_cdf(-r), 1.0 - kernel.base_cdf(r));
  return 3.0 * sigma * sigma + 4.0 * tail;
}

double default_bandwidth(std::size_t count, double alpha) {
  if (!(alpha > 0.0)) throw ValidationError("bandwidth exponent must be positive");
  if (count == 0) return kMaxBandwidth;
  return std::min(std::pow(static_cast<double>(count), -alpha), kMaxBandwidth);
}

}  // namespace phasereg
