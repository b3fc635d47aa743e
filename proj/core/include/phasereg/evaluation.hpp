#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phasereg/measure.hpp"
#include "phasereg/registration.hpp"
#include "phasereg/simulation.hpp"
#include "phasereg/warp_map.hpp"

namespace phasereg {

/// Largest |estimate - truth| over the union of both grids.
double warp_sup_error(const WarpMap& estimate, const WarpMap& truth);

/// sqrt(sum_i (x_(i) - y_(i))^2) over order statistics; counts must match.
double registration_l2(const PointPattern& registered, const PointPattern& original);

/// Least-squares slope of log(ys) against log(xs).
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

double median(std::vector<double> values);
/// Interquartile range (linear interpolation between order statistics).
double interquartile_range(std::vector<double> values);

/// The nine interior points 0.1, ..., 0.9 of the unit interval.
std::vector<double> interior_grid();

struct UnbiasednessReport {
  std::vector<double> xs;
  std::vector<double> mean;
  std::vector<double> standard_error;
  std::vector<bool> flagged;  ///< |mean - x| > 4 SE
  std::size_t draws = 0;

  bool passed() const;
};

/// Monte-Carlo mean of T(x) over `draws` sine warps; N >= 100.
UnbiasednessReport unbiasedness_mc(const SineWarpConfig& config, std::size_t draws,
                                   std::span<const double> xs, std::uint64_t seed);

/// Shared knobs of the simulation studies. Metrics are computed on the unit
/// interval so that scenarios with different domains are comparable.
/// sigma_i = min(1/m_i, 1/4): small enough that smoothing bias stays below
/// the sampling error at every cell size the studies use.
inline constexpr double kStudyBandwidthExponent = 1.0;

struct StudyOptions {
  std::size_t replicates = 20;
  BandwidthPolicy bandwidth{std::nullopt, kStudyBandwidthExponent, KernelKind::gaussian};
  std::size_t grid_size = kDefaultGridSize;
  std::uint64_t seed = 1;
};

/// Per-replicate errors of one pipeline run against the simulation truth.
struct ReplicateMetrics {
  double lambda_error = 0.0;      ///< W2(lambda_hat, lambda)
  double arithmetic_error = 0.0;  ///< W2(arithmetic mean of smoothed, lambda)
  double warp_error = 0.0;        ///< mean_i sup |T_hat_i - T_i|
  double registration_l2 = 0.0;   ///< mean_i registration_l2
  double registration_w2 = 0.0;   ///< mean_i registration_l2 / sqrt(m_i)
  double lemma_slack = 0.0;       ///< min_i (bound - W2^2(smoothed_i, empirical_i))
};

struct PipelineRun {
  ScenarioData data;
  RegistrationOutput output;
  ReplicateMetrics metrics;
};

/// Simulates one replicate, runs the pipeline, and scores it.
PipelineRun run_replicate(const ScenarioConfig& config, std::uint64_t replicate,
                          const PipelineOptions& options);

struct CellSummary {
  std::size_t n = 0;
  double tau = 0.0;
  std::vector<ReplicateMetrics> replicates;

  double median_of(double ReplicateMetrics::*field) const;
  double iqr_of(double ReplicateMetrics::*field) const;
};

struct StudyReport {
  std::string scenario;
  std::vector<CellSummary> cells;
  std::optional<double> slope;    ///< log-log slope of median lambda error vs n
  bool lemma_bound_holds = true;  ///< every smoothed measure met its bound
};

/// Runs `replicates` pipeline fits for each (n, tau) cell of `scenario`.
StudyReport run_study(const ScenarioConfig& scenario,
                      std::span<const std::pair<std::size_t, double>> cells,
                      const StudyOptions& options);

/// Cells (n, tau_rule(n)) plus the log-log slope of the median lambda error.
StudyReport rate_study(const ScenarioConfig& scenario,
                       std::span<const std::size_t> n_list,
                       const std::function<double(std::size_t)>& tau_rule,
                       const StudyOptions& options);

struct CovarianceReport {
  std::vector<double> xs;
  std::vector<double> empirical;  ///< row-major cov of sqrt(n)(S_n - id)
  std::vector<double> direct;     ///< row-major cov{T(x), T(y)}
  double max_relative_error = 0.0;
  double sign_agreement = 1.0;
  std::size_t thresholded_entries = 0;
  std::size_t replicates = 0;
};

/// Compares the covariance of sqrt(n)(S_n - id), S_n the optimal map from the
/// true structural mean to its estimate, with the warp covariance estimated
/// from `direct_draws` independent warps. Entries with |kappa| below 10% of
/// the largest entry are ignored in the relative error. Requires tau >= n^2
/// and, without a fixed sigma, alpha >= 1/4.
CovarianceReport clt_covariance_check(const ScenarioConfig& scenario, std::size_t n,
                                      double tau, std::size_t replicates,
                                      const StudyOptions& options,
                                      std::size_t direct_draws = 100000);

/// Draws one true warp of the scenario, expressed on the unit interval.
std::function<double(double)> sample_unit_warp(const ScenarioConfig& scenario,
                                               Rng& rng);

/// Density of the measure convolved with a Gaussian of the given bandwidth,
/// evaluated at `xs`. Each CDF cell contributes its mass spread uniformly.
std::vector<double> smoothed_density(const DiffuseMeasure& measure, double bandwidth,
                                     std::span<const double> xs);

/// Local maxima of the measure's density smoothed by a Gaussian of the given
/// bandwidth (in domain units), highest first, at most `count`.
std::vector<double> find_modes(const DiffuseMeasure& measure, double bandwidth,
                               std::size_t count = 2);

/// Residual curve F_estimate - F_truth + offset on a uniform grid.
std::vector<std::pair<double, double>> residual_curve(const DiffuseMeasure& estimate,
                                                      const DiffuseMeasure& truth,
                                                      double offset,
                                                      std::size_t points = 513);

struct BimodalFigureReport {
  std::vector<double> barycenter_error;
  std::vector<double> arithmetic_error;
  std::vector<std::vector<double>> modes;
  double fraction_barycenter_better = 0.0;
  double fraction_modes_found = 0.0;
};

/// Barycenter versus naive CDF average, and two-mode recovery near +-8.
BimodalFigureReport bimodal_figure_check(const BimodalScenarioConfig& config,
                                         const StudyOptions& options,
                                         double mode_bandwidth = 1.0,
                                         double mode_tolerance = 1.0);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_deviation = 0.0;  ///< sup |map - line| over the sample points
};

/// Least-squares line through `points` equally spaced samples of the map on
/// [lo, hi].
LineFit fit_line(const WarpMap& map, double lo, double hi, std::size_t points = 181);

struct TriangularFigureReport {
  std::vector<double> max_deviation;  ///< per replicate, worst warp
  std::vector<double> correlation;    ///< per replicate, Pearson r(slope, h)
  double fit_lo = 0.0;
  double fit_hi = 0.0;
};

/// Straight-line fits of the estimated warps over the central `fraction` of
/// the domain [-bound, bound].
TriangularFigureReport triangular_linearity_check(const TriangularScenarioConfig& config,
                                                  const StudyOptions& options,
                                                  double fraction = 0.9);

/// Pearson correlation coefficient.
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace phasereg
