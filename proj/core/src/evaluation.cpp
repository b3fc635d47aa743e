#include "phasereg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "phasereg/error.hpp"
#include "phasereg/frechet.hpp"
#include "phasereg/parallel.hpp"
#include "phasereg/smoothing.hpp"
#include "phasereg/transport.hpp"

namespace phasereg {

double warp_sup_error(const WarpMap& estimate, const WarpMap& truth) {
  if (estimate.domain() != truth.domain()) {
    throw ValidationError("compared warp maps must share a domain");
  }
  double worst = 0.0;
  for (double x : merge_grids(estimate.grid(), truth.grid())) {
    worst = std::max(worst, std::abs(estimate(x) - truth(x)));
  }
  return worst;
}

double registration_l2(const PointPattern& registered, const PointPattern& original) {
  if (registered.size() != original.size()) {
    throw ValidationError("registration error needs equal point counts");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < registered.size(); ++i) {
    const double d = registered.points()[i] - original.points()[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ValidationError("slope fit needs at least two matching points");
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

double quantile_of_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty sample");
  std::sort(values.begin(), values.end());
  return quantile_of_sorted(values, 0.5);
}

double interquartile_range(std::vector<double> values) {
  if (values.empty()) throw ValidationError("IQR of an empty sample");
  std::sort(values.begin(), values.end());
  return quantile_of_sorted(values, 0.75) - quantile_of_sorted(values, 0.25);
}

std::vector<double> interior_grid() {
  std::vector<double> xs(9);
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = 0.1 * static_cast<double>(k + 1);
  return xs;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw ValidationError("correlation needs two samples of equal size >= 2");
  }
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

bool UnbiasednessReport::passed() const {
  return std::none_of(flagged.begin(), flagged.end(), [](bool f) { return f; });
}

UnbiasednessReport unbiasedness_mc(const SineWarpConfig& config, std::size_t draws,
                                   std::span<const double> xs, std::uint64_t seed) {
  if (draws < 100) throw ValidationError("unbiasedness check needs N >= 100");
  UnbiasednessReport report;
  report.xs.assign(xs.begin(), xs.end());
  report.draws = draws;
  std::vector<double> sum(xs.size(), 0.0);
  std::vector<double> sum_sq(xs.size(), 0.0);
  Rng rng = make_stream(seed, {0x756e62ULL});
  for (std::size_t d = 0; d < draws; ++d) {
    const SineWarp warp = sample_sine_warp(config, rng);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double v = warp(xs[k]) - xs[k];
      sum[k] += v;
      sum_sq[k] += v * v;
    }
  }
  const double n = static_cast<double>(draws);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double mean_dev = sum[k] / n;
    const double var = std::max(0.0, (sum_sq[k] - n * mean_dev * mean_dev) / (n - 1.0));
    const double se = std::sqrt(var / n);
    report.mean.push_back(xs[k] + mean_dev);
    report.standard_error.push_back(se);
    report.flagged.push_back(std::abs(mean_dev) > 4.0 * se);
  }
  return report;
}

namespace {

ScenarioConfig with_cell(const ScenarioConfig& base, std::size_t n, double tau,
                         std::uint64_t seed, std::size_t grid_size) {
  return std::visit(
      [&](auto cfg) -> ScenarioConfig {
        cfg.n = n;
        cfg.tau = tau;
        cfg.seed = seed;
        cfg.grid_size = grid_size;
        return cfg;
      },
      base);
}

PipelineOptions pipeline_options(const StudyOptions& options) {
  return PipelineOptions{options.bandwidth, options.grid_size};
}

}  // namespace

PipelineRun run_replicate(const ScenarioConfig& config, std::uint64_t replicate,
                          const PipelineOptions& options) {
  ScenarioData data = simulate_scenario(config, replicate);
  RegistrationOutput output = pipeline(data.warped, options);
  const Interval domain = data.domain;
  const std::size_t n = data.warped.size();

  ReplicateMetrics metrics;
  const DiffuseMeasure truth = rescale_affine(data.lambda, domain, kUnitInterval);
  metrics.lambda_error =
      wasserstein2(rescale_affine(output.lambda_hat, domain, kUnitInterval), truth);

  std::vector<DiffuseMeasure> unit_hats;
  unit_hats.reserve(n);
  for (const auto& m : output.lambda_hats) {
    unit_hats.push_back(rescale_affine(m, domain, kUnitInterval));
  }
  metrics.arithmetic_error = wasserstein2(arithmetic_mean(unit_hats), truth);

  double warp_sum = 0.0;
  double l2_sum = 0.0;
  double w2_sum = 0.0;
  std::size_t nonempty = 0;
  double slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    warp_sum += warp_sup_error(rescale_affine(output.warps[i], domain, kUnitInterval),
                               rescale_affine(data.warps[i], domain, kUnitInterval));
    const PointPattern registered =
        rescale_affine(output.registered[i], domain, kUnitInterval);
    const PointPattern original = rescale_affine(data.unwarped[i], domain, kUnitInterval);
    const double l2 = registration_l2(registered, original);
    l2_sum += l2;
    if (!original.empty()) {
      ++nonempty;
      w2_sum += l2 / std::sqrt(static_cast<double>(original.size()));
      if (output.sigmas[i] <= kMaxBandwidth) {
        const KernelSpec kernel(output.sigmas[i], options.bandwidth.kernel);
        const EmpiricalMeasure empirical(
            rescale_affine(data.warped[i], domain, kUnitInterval));
        const double d = wasserstein2(unit_hats[i], empirical);
        slack = std::min(slack, lemma_bound(kernel) - d * d);
      }
    }
  }
  metrics.warp_error = warp_sum / static_cast<double>(n);
  metrics.registration_l2 = l2_sum / static_cast<double>(n);
  metrics.registration_w2 = nonempty > 0 ? w2_sum / static_cast<double>(nonempty) : 0.0;
  metrics.lemma_slack = std::isfinite(slack) ? slack : 0.0;
  return PipelineRun{std::move(data), std::move(output), metrics};
}

double CellSummary::median_of(double ReplicateMetrics::*field) const {
  std::vector<double> v;
  v.reserve(replicates.size());
  for (const auto& r : replicates) v.push_back(r.*field);
  return median(std::move(v));
}

double CellSummary::iqr_of(double ReplicateMetrics::*field) const {
  std::vector<double> v;
  v.reserve(replicates.size());
  for (const auto& r : replicates) v.push_back(r.*field);
  return interquartile_range(std::move(v));
}

StudyReport run_study(const ScenarioConfig& scenario,
                      std::span<const std::pair<std::size_t, double>> cells,
                      const StudyOptions& options) {
  if (options.replicates == 0) throw ValidationError("study needs replicates >= 1");
  StudyReport report;
  report.scenario = scenario_name(scenario);
  const PipelineOptions pipe = pipeline_options(options);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto [n, tau] = cells[c];
    const ScenarioConfig cfg =
        with_cell(scenario, n, tau, derive_seed(options.seed, {c}), options.grid_size);
    CellSummary cell{n, tau, std::vector<ReplicateMetrics>(options.replicates)};
    parallel_for(options.replicates, [&](std::size_t r) {
      cell.replicates[r] = run_replicate(cfg, r, pipe).metrics;
    });
    for (const auto& m : cell.replicates) {
      if (m.lemma_slack < 0.0) report.lemma_bound_holds = false;
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

StudyReport rate_study(const ScenarioConfig& scenario,
                       std::span<const std::size_t> n_list,
                       const std::function<double(std::size_t)>& tau_rule,
                       const StudyOptions& options) {
  if (!std::is_sorted(n_list.begin(), n_list.end())) {
    throw ValidationError("rate study needs an increasing list of n");
  }
  std::vector<std::pair<std::size_t, double>> cells;
  for (std::size_t n : n_list) cells.emplace_back(n, tau_rule(n));
  StudyReport report = run_study(scenario, cells, options);
  if (n_list.size() >= 2 && n_list.front() > 1) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& cell : report.cells) {
      xs.push_back(static_cast<double>(cell.n));
      ys.push_back(cell.median_of(&ReplicateMetrics::lambda_error));
    }
    report.slope = loglog_slope(xs, ys);
  }
  return report;
}

std::function<double(double)> sample_unit_warp(const ScenarioConfig& scenario,
                                               Rng& rng) {
  if (const auto* bimodal = std::get_if<BimodalScenarioConfig>(&scenario)) {
    return [warp = sample_sine_warp(bimodal->warp, rng)](double x) { return warp(x); };
  }
  if (const auto* uniform = std::get_if<UniformScenarioConfig>(&scenario)) {
    return [warp = sample_sine_warp(uniform->warp, rng)](double x) { return warp(x); };
  }
  const auto& tri = std::get<TriangularScenarioConfig>(scenario);
  const double h = tri.sample_scale(rng);
  const Interval domain = tri.domain();
  return [h, domain](double x) {
    const AffineMap from_unit(kUnitInterval, domain);
    const AffineMap to_unit(domain, kUnitInterval);
    return to_unit(domain.clamp(h * from_unit(x)));
  };
}

namespace {

std::vector<double> covariance_matrix(const std::vector<std::vector<double>>& rows) {
  const std::size_t k = rows.front().size();
  const double count = static_cast<double>(rows.size());
  std::vector<double> mean(k, 0.0);
  for (const auto& row : rows) {
    for (std::size_t a = 0; a < k; ++a) mean[a] += row[a] / count;
  }
  std::vector<double> cov(k * k, 0.0);
  for (const auto& row : rows) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        cov[a * k + b] += (row[a] - mean[a]) * (row[b] - mean[b]);
      }
    }
  }
  for (double& v : cov) v /= (count - 1.0);
  return cov;
}

}  // namespace

CovarianceReport clt_covariance_check(const ScenarioConfig& scenario, std::size_t n,
                                      double tau, std::size_t replicates,
                                      const StudyOptions& options,
                                      std::size_t direct_draws) {
  if (n == 0 || replicates < 2 || direct_draws < 2) {
    throw ValidationError("covariance check needs n >= 1 and at least two replicates");
  }
  const double nd = static_cast<double>(n);
  if (tau < nd * nd) {
    throw ValidationError("covariance check requires tau >= n^2");
  }
  if (!options.bandwidth.sigma && options.bandwidth.alpha < 0.25) {
    throw ValidationError("covariance check requires bandwidth exponent >= 1/4");
  }

  CovarianceReport report;
  report.xs = interior_grid();
  report.replicates = replicates;
  const std::size_t k = report.xs.size();
  const ScenarioConfig cfg =
      with_cell(scenario, n, tau, derive_seed(options.seed, {0x636c74ULL}), options.grid_size);
  const PipelineOptions pipe = pipeline_options(options);

  std::vector<std::vector<double>> rows(replicates, std::vector<double>(k));
  parallel_for(replicates, [&](std::size_t r) {
    const ScenarioData data = simulate_scenario(cfg, r);
    const RegistrationOutput out = pipeline(data.warped, pipe);
    const DiffuseMeasure truth = rescale_affine(data.lambda, data.domain, kUnitInterval);
    const DiffuseMeasure estimate =
        rescale_affine(out.lambda_hat, data.domain, kUnitInterval);
    const WarpMap s = optimal_map(truth, estimate);
    for (std::size_t a = 0; a < k; ++a) {
      rows[r][a] = std::sqrt(nd) * (s(report.xs[a]) - report.xs[a]);
    }
  });
  report.empirical = covariance_matrix(rows);

  std::vector<std::vector<double>> direct_rows(direct_draws, std::vector<double>(k));
  Rng rng = make_stream(options.seed, {0x6b617070ULL});
  for (auto& row : direct_rows) {
    const auto warp = sample_unit_warp(scenario, rng);
    for (std::size_t a = 0; a < k; ++a) row[a] = warp(report.xs[a]);
  }
  report.direct = covariance_matrix(direct_rows);

  double largest = 0.0;
  for (double v : report.direct) largest = std::max(largest, std::abs(v));
  std::size_t agree = 0;
  for (std::size_t e = 0; e < report.direct.size(); ++e) {
    const double kappa = report.direct[e];
    if (largest == 0.0 || std::abs(kappa) < 0.1 * largest) continue;
    ++report.thresholded_entries;
    report.max_relative_error = std::max(
        report.max_relative_error, std::abs(report.empirical[e] - kappa) / std::abs(kappa));
    if ((report.empirical[e] > 0.0) == (kappa > 0.0)) ++agree;
  }
  if (largest == 0.0) {
    for (double v : report.empirical) {
      report.max_relative_error = std::max(report.max_relative_error, std::abs(v));
    }
  }
  report.sign_agreement = report.thresholded_entries > 0
                              ? static_cast<double>(agree) /
                                    static_cast<double>(report.thresholded_entries)
                              : 1.0;
  return report;
}

std::vector<double> smoothed_density(const DiffuseMeasure& measure, double bandwidth,
                                     std::span<const double> xs) {
  if (!(bandwidth > 0.0)) throw ValidationError("density bandwidth must be positive");
  if (!std::is_sorted(xs.begin(), xs.end())) {
    throw ValidationError("density evaluation points must be sorted");
  }
  const auto grid = measure.grid();
  const auto cdf = measure.cdf_values();
  const double reach = 9.0 * bandwidth;
  auto phi_cdf = [](double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); };

  // A uniform cell convolved with a Gaussian is a difference of normal CDFs.
  std::vector<double> density(xs.size(), 0.0);
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double mass = cdf[j] - cdf[j - 1];
    if (mass <= 0.0) continue;
    const double a = grid[j - 1];
    const double b = grid[j];
    const auto first = std::lower_bound(xs.begin(), xs.end(), a - reach);
    const auto last = std::upper_bound(xs.begin(), xs.end(), b + reach);
    for (auto it = first; it != last; ++it) {
      const auto idx = static_cast<std::size_t>(it - xs.begin());
      density[idx] += mass *
                      (phi_cdf((*it - a) / bandwidth) - phi_cdf((*it - b) / bandwidth)) /
                      (b - a);
    }
  }
  return density;
}

std::vector<double> find_modes(const DiffuseMeasure& measure, double bandwidth,
                               std::size_t count) {
  const std::vector<double> xs = uniform_grid(measure.domain(), 1025);
  const std::vector<double> density = smoothed_density(measure, bandwidth, xs);

  std::vector<std::pair<double, double>> peaks;  // (height, location)
  for (std::size_t j = 1; j + 1 < xs.size(); ++j) {
    if (density[j] > density[j - 1] && density[j] >= density[j + 1]) {
      peaks.emplace_back(density[j], xs[j]);
    }
  }
  std::sort(peaks.begin(), peaks.end(), std::greater<>());
  std::vector<double> modes;
  for (std::size_t i = 0; i < std::min(count, peaks.size()); ++i) {
    modes.push_back(peaks[i].second);
  }
  return modes;
}

std::vector<std::pair<double, double>> residual_curve(const DiffuseMeasure& estimate,
                                                      const DiffuseMeasure& truth,
                                                      double offset,
                                                      std::size_t points) {
  if (estimate.domain() != truth.domain()) {
    throw ValidationError("residual curve needs measures on one domain");
  }
  std::vector<std::pair<double, double>> curve;
  curve.reserve(points);
  for (double x : uniform_grid(truth.domain(), points)) {
    curve.emplace_back(x, estimate.cdf(x) - truth.cdf(x) + offset);
  }
  return curve;
}

BimodalFigureReport bimodal_figure_check(const BimodalScenarioConfig& config,
                                         const StudyOptions& options,
                                         double mode_bandwidth,
                                         double mode_tolerance) {
  BimodalFigureReport report;
  const std::size_t reps = options.replicates;
  report.barycenter_error.resize(reps);
  report.arithmetic_error.resize(reps);
  report.modes.resize(reps);
  BimodalScenarioConfig cfg = config;
  cfg.seed = options.seed;
  cfg.grid_size = options.grid_size;
  const PipelineOptions pipe = pipeline_options(options);
  parallel_for(reps, [&](std::size_t r) {
    const PipelineRun run = run_replicate(cfg, r, pipe);
    report.barycenter_error[r] = run.metrics.lambda_error;
    report.arithmetic_error[r] = run.metrics.arithmetic_error;
    report.modes[r] = find_modes(run.output.lambda_hat, mode_bandwidth, 2);
  });
  std::size_t better = 0;
  std::size_t found = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    if (report.barycenter_error[r] < report.arithmetic_error[r]) ++better;
    auto modes = report.modes[r];
    std::sort(modes.begin(), modes.end());
    if (modes.size() == 2 && std::abs(modes[0] + 8.0) <= mode_tolerance &&
        std::abs(modes[1] - 8.0) <= mode_tolerance) {
      ++found;
    }
  }
  report.fraction_barycenter_better =
      static_cast<double>(better) / static_cast<double>(reps);
  report.fraction_modes_found = static_cast<double>(found) / static_cast<double>(reps);
  return report;
}

LineFit fit_line(const WarpMap& map, double lo, double hi, std::size_t points) {
  const std::vector<double> xs = uniform_grid(Interval(lo, hi), points);
  std::vector<double> ys(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) ys[k] = map(xs[k]);
  const double count = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / count;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    fit.max_deviation =
        std::max(fit.max_deviation, std::abs(ys[k] - (fit.intercept + fit.slope * xs[k])));
  }
  return fit;
}

TriangularFigureReport triangular_linearity_check(const TriangularScenarioConfig& config,
                                                  const StudyOptions& options,
                                                  double fraction) {
  TriangularFigureReport report;
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValidationError("fit fraction must lie in (0, 1]");
  }
  report.fit_lo = -fraction * config.bound;
  report.fit_hi = fraction * config.bound;
  const std::size_t reps = options.replicates;
  report.max_deviation.resize(reps);
  report.correlation.resize(reps);
  TriangularScenarioConfig cfg = config;
  cfg.seed = options.seed;
  cfg.grid_size = options.grid_size;
  const PipelineOptions pipe = pipeline_options(options);
  parallel_for(reps, [&](std::size_t r) {
    const ScenarioData data = simulate_scenario(cfg, r);
    const RegistrationOutput out = pipeline(data.warped, pipe);
    std::vector<double> slopes;
    double worst = 0.0;
    for (const auto& warp : out.warps) {
      const LineFit fit = fit_line(warp, report.fit_lo, report.fit_hi);
      worst = std::max(worst, fit.max_deviation);
      slopes.push_back(fit.slope);
    }
    report.max_deviation[r] = worst;
    report.correlation[r] = pearson(slopes, data.scales);
  });
  return report;
}

}  // namespace phasereg
