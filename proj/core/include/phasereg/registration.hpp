#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "phasereg/measure.hpp"
#include "phasereg/smoothing.hpp"
#include "phasereg/warp_map.hpp"

namespace phasereg {

/// How each conditional measure is smoothed. Without a fixed `sigma`, process
/// i uses default_bandwidth(m_i, alpha).
struct BandwidthPolicy {
  std::optional<double> sigma;
  double alpha = kRosenblattExponent;
  KernelKind kernel = KernelKind::gaussian;

  double bandwidth_for(std::size_t count) const;
};

struct PipelineOptions {
  BandwidthPolicy bandwidth;
  std::size_t grid_size = kDefaultGridSize;
};

/// Result of separating phase from amplitude variation. All members live on
/// the input patterns' domain.
struct RegistrationOutput {
  Interval domain;
  DiffuseMeasure lambda_hat;                ///< estimated structural mean
  std::vector<DiffuseMeasure> lambda_hats;  ///< smoothed conditional means
  std::vector<WarpMap> warps;               ///< estimated warp maps
  std::vector<WarpMap> inverse_warps;       ///< estimated registration maps
  std::vector<PointPattern> registered;     ///< patterns pushed through the registration maps
  std::vector<double> sigmas;               ///< bandwidth used per process
  double c_hat = 0.0;                       ///< mean point count
};

struct WarpEstimates {
  std::vector<WarpMap> warps;
  std::vector<WarpMap> inverse_warps;
};

/// Registration maps F_hat^{-1} o F_i and their inverses F_i^{-1} o F_hat.
WarpEstimates estimate_warps(const DiffuseMeasure& lambda_hat,
                             std::span<const DiffuseMeasure> lambda_hats);

/// Pushes pattern i through inverse_warps[i].
std::vector<PointPattern> register_patterns(std::span<const PointPattern> patterns,
                                            std::span<const WarpMap> inverse_warps);

/// Smooth each pattern, average quantiles, estimate warps, and register.
/// Patterns must share a domain and at least one must be nonempty.
RegistrationOutput pipeline(std::span<const PointPattern> patterns,
                            const PipelineOptions& options = {});

}  // namespace phasereg
