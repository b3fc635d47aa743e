#include "phasereg/registration.hpp"

#include "phasereg/error.hpp"
#include "phasereg/frechet.hpp"
#include "phasereg/parallel.hpp"
#include "phasereg/transport.hpp"

namespace phasereg {

double BandwidthPolicy::bandwidth_for(std::size_t count) const {
  if (sigma) return *sigma;
  return default_bandwidth(count, alpha);
}

WarpEstimates estimate_warps(const DiffuseMeasure& lambda_hat,
                             std::span<const DiffuseMeasure> lambda_hats) {
  WarpEstimates out;
  out.warps.reserve(lambda_hats.size());
  out.inverse_warps.reserve(lambda_hats.size());
  for (const auto& measure : lambda_hats) {
    WarpMap registration = optimal_map(measure, lambda_hat);
    out.warps.push_back(registration.inverse());
    out.inverse_warps.push_back(std::move(registration));
  }
  return out;
}

std::vector<PointPattern> register_patterns(std::span<const PointPattern> patterns,
                                            std::span<const WarpMap> inverse_warps) {
  if (patterns.size() != inverse_warps.size()) {
    throw ValidationError("need one registration map per pattern");
  }
  std::vector<PointPattern> out;
  out.reserve(patterns.size());
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    out.push_back(push_forward(patterns[i], inverse_warps[i]));
  }
  return out;
}

RegistrationOutput pipeline(std::span<const PointPattern> patterns,
                            const PipelineOptions& options) {
  if (patterns.empty()) throw ValidationError("need at least one pattern");
  const Interval domain = patterns.front().domain();
  std::size_t total = 0;
  for (const auto& p : patterns) {
    if (p.domain() != domain) {
      throw ValidationError("all patterns must share one domain");
    }
    total += p.size();
  }
  if (total == 0) throw ValidationError("all patterns are empty; nothing to register");

  const std::size_t n = patterns.size();
  std::vector<PointPattern> unit_patterns;
  unit_patterns.reserve(n);
  for (const auto& p : patterns) {
    unit_patterns.push_back(rescale_affine(p, domain, kUnitInterval));
  }

  std::vector<double> sigmas(n);
  std::vector<std::optional<DiffuseMeasure>> smoothed(n);
  parallel_for(n, [&](std::size_t i) {
    sigmas[i] = options.bandwidth.bandwidth_for(unit_patterns[i].size());
    const KernelSpec kernel(sigmas[i], options.bandwidth.kernel);
    smoothed[i] = smooth_pattern(unit_patterns[i], kernel, options.grid_size);
  });
  std::vector<DiffuseMeasure> unit_hats;
  unit_hats.reserve(n);
  for (auto& s : smoothed) unit_hats.push_back(std::move(*s));

  const BarycenterResult bary = barycenter(unit_hats, options.grid_size);
  WarpEstimates unit_warps = estimate_warps(bary.mean, unit_hats);
  for (std::size_t i = 0; i < n; ++i) {
    if (unit_patterns[i].empty()) {
      unit_warps.warps[i] = WarpMap::identity(kUnitInterval);
      unit_warps.inverse_warps[i] = WarpMap::identity(kUnitInterval);
    }
  }
  const std::vector<PointPattern> unit_registered =
      register_patterns(unit_patterns, unit_warps.inverse_warps);

  RegistrationOutput out{domain,
                         rescale_affine(bary.mean, kUnitInterval, domain),
                         {}, {}, {}, {}, std::move(sigmas),
                         static_cast<double>(total) / static_cast<double>(n)};
  out.lambda_hats.reserve(n);
  out.warps.reserve(n);
  out.inverse_warps.reserve(n);
  out.registered.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.lambda_hats.push_back(rescale_affine(unit_hats[i], kUnitInterval, domain));
    out.warps.push_back(rescale_affine(unit_warps.warps[i], kUnitInterval, domain));
    out.inverse_warps.push_back(
        rescale_affine(unit_warps.inverse_warps[i], kUnitInterval, domain));
    out.registered.push_back(rescale_affine(unit_registered[i], kUnitInterval, domain));
  }
  return out;
}

}  // namespace phasereg
