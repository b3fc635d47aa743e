#include "phasereg/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "phasereg/error.hpp"
#include "phasereg/parallel.hpp"

namespace phasereg {

namespace {

constexpr double kModeOffset = 8.0;
constexpr double kBimodalHalfWidth = 16.0;
constexpr double kBackgroundHalfWidth = 12.0;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_density(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// Mass of a unit Gaussian centred at +-8 inside [-16, 16].
double truncated_mode_mass() {
  return normal_cdf(kBimodalHalfWidth - kModeOffset) -
         normal_cdf(-kBimodalHalfWidth - kModeOffset);
}

// Beta(3/2, 3/2): with t = sin^2(theta), the CDF is (2 theta - sin(4 theta)/2) / pi.
double beta15_cdf(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double theta = std::asin(std::sqrt(u));
  return (2.0 * theta - 0.5 * std::sin(4.0 * theta)) / std::numbers::pi;
}

double beta15_density(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 8.0 / std::numbers::pi * std::sqrt(u * (1.0 - u));
}

}  // namespace

double zeta(int k, double x) {
  if (k == 0 || x <= 0.0 || x >= 1.0) return std::clamp(x, 0.0, 1.0);
  const double ak = std::abs(static_cast<double>(k));
  return x - std::sin(std::numbers::pi * static_cast<double>(k) * x) /
                 (ak * std::numbers::pi);
}

KLaw KLaw::point_mass(int k) { return KLaw(Kind::point_mass, k); }

KLaw KLaw::poisson_sign(double mean) {
  if (!(mean > 0.0)) throw ValidationError("Poisson mean must be positive");
  return KLaw(Kind::poisson_sign, mean);
}

KLaw KLaw::symmetric_pair(int k) { return KLaw(Kind::symmetric_pair, std::abs(k)); }

int KLaw::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::point_mass:
      return static_cast<int>(parameter_);
    case Kind::poisson_sign: {
      std::poisson_distribution<int> magnitude(parameter_);
      const int v1 = magnitude(rng);
      const bool negative = std::bernoulli_distribution(0.5)(rng);
      return negative ? -v1 : v1;
    }
    case Kind::symmetric_pair: {
      const bool negative = std::bernoulli_distribution(0.5)(rng);
      const int k = static_cast<int>(parameter_);
      return negative ? -k : k;
    }
  }
  return 0;
}

double SineWarp::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (std::all_of(ks.begin(), ks.end(), [](int k) { return k == 0; })) return x;
  double y = 0.0;
  for (std::size_t j = 0; j < ks.size(); ++j) y += weights[j] * zeta(ks[j], x);
  return std::clamp(y, 0.0, 1.0);
}

WarpMap SineWarp::to_map(const Interval& domain, std::size_t grid_size) const {
  const AffineMap to_unit(domain, kUnitInterval);
  const AffineMap from_unit(kUnitInterval, domain);
  return WarpMap::from_function(domain, grid_size, [&](double x) {
    return from_unit((*this)(to_unit(x)));
  });
}

SineWarp sample_sine_warp(const SineWarpConfig& config, Rng& rng) {
  if (config.J < 1) throw ValidationError("sine warp mixture needs J >= 1");
  const auto J = static_cast<std::size_t>(config.J);
  SineWarp warp;
  warp.ks.resize(J);
  for (auto& k : warp.ks) k = config.k_law.sample(rng);
  std::vector<double> u(J - 1);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (auto& v : u) v = uniform(rng);
  std::sort(u.begin(), u.end());
  warp.weights.resize(J);
  double previous = 0.0;
  for (std::size_t j = 0; j + 1 < J; ++j) {
    warp.weights[j] = u[j] - previous;
    previous = u[j];
  }
  warp.weights[J - 1] = 1.0 - previous;
  return warp;
}

PointPattern sample_poisson_pattern(const DiffuseMeasure& lambda, double tau,
                                    Rng& rng) {
  if (!(tau > 0.0)) throw ValidationError("Poisson intensity must be positive");
  std::poisson_distribution<long long> count_law(tau);
  const long long count = count_law(rng);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> points(static_cast<std::size_t>(count));
  for (double& x : points) x = lambda.quantile(uniform(rng));
  return PointPattern(lambda.domain(), std::move(points));
}

double bimodal_density(double x, double epsilon) {
  if (std::abs(x) > kBimodalHalfWidth) return 0.0;
  const double modes = (normal_density(x - kModeOffset) +
                        normal_density(x + kModeOffset)) /
                       truncated_mode_mass();
  const double width = 2.0 * kBackgroundHalfWidth;
  const double background =
      beta15_density((x + kBackgroundHalfWidth) / width) / width;
  return 0.5 * (1.0 - epsilon) * modes + epsilon * background;
}

double bimodal_cdf(double x, double epsilon) {
  x = std::clamp(x, -kBimodalHalfWidth, kBimodalHalfWidth);
  const double lo = -kBimodalHalfWidth;
  const double mass = truncated_mode_mass();
  const double right = (normal_cdf(x - kModeOffset) - normal_cdf(lo - kModeOffset)) / mass;
  const double left = (normal_cdf(x + kModeOffset) - normal_cdf(lo + kModeOffset)) / mass;
  const double background =
      beta15_cdf((x + kBackgroundHalfWidth) / (2.0 * kBackgroundHalfWidth));
  return 0.5 * (1.0 - epsilon) * (left + right) + epsilon * background;
}

DiffuseMeasure bimodal_measure(double epsilon, std::size_t grid_size) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ValidationError("background strength must lie in [0, 1]");
  }
  return DiffuseMeasure::from_cdf(BimodalScenarioConfig::domain(), grid_size,
                                  [epsilon](double x) { return bimodal_cdf(x, epsilon); });
}

double triangular_density(double t, double h) {
  if (std::abs(t) > h) return 0.0;
  return (1.0 - std::abs(t) / h) / h;
}

double triangular_cdf(double t, double h) {
  if (!(h > 0.0)) throw ValidationError("triangular half-width must be positive");
  if (t <= -h) return 0.0;
  if (t >= h) return 1.0;
  if (t <= 0.0) return (t + h) * (t + h) / (2.0 * h * h);
  return 1.0 - (h - t) * (h - t) / (2.0 * h * h);
}

DiffuseMeasure triangular_measure(double h, double bound, std::size_t grid_size) {
  if (!(h > 0.0 && h <= bound)) {
    throw ValidationError("triangular support must fit inside the domain");
  }
  return DiffuseMeasure::from_cdf(Interval(-bound, bound), grid_size,
                                  [h](double t) { return triangular_cdf(t, h); });
}

double TriangularScenarioConfig::sample_scale(Rng& rng) const {
  const bool narrow = std::bernoulli_distribution(alpha)(rng);
  std::uniform_real_distribution<double> u(h_min, narrow ? h_narrow : h_wide);
  return u(rng);
}

std::string scenario_name(const ScenarioConfig& config) {
  if (std::holds_alternative<BimodalScenarioConfig>(config)) return "bimodal";
  if (std::holds_alternative<TriangularScenarioConfig>(config)) return "triangular";
  return "uniform";
}

std::size_t scenario_size(const ScenarioConfig& config) {
  return std::visit([](const auto& c) { return c.n; }, config);
}

std::uint64_t scenario_seed(const ScenarioConfig& config) {
  return std::visit([](const auto& c) { return c.seed; }, config);
}

namespace {

void validate_common(std::size_t n, double tau) {
  if (n == 0) throw ValidationError("scenario needs n >= 1 processes");
  if (!(tau > 0.0)) throw ValidationError("scenario needs tau > 0");
}

ScenarioData simulate_sine(std::string name, const Interval& domain, DiffuseMeasure lambda,
                           std::size_t n, double tau, const SineWarpConfig& warp_config,
                           std::uint64_t seed, std::size_t grid_size,
                           std::uint64_t replicate) {
  validate_common(n, tau);
  ScenarioData data{std::move(name), domain, std::move(lambda), {}, {}, {}, {}};
  std::vector<std::optional<WarpMap>> warps(n);
  data.unwarped.resize(n);
  data.warped.resize(n);
  parallel_for(n, [&](std::size_t i) {
    Rng warp_rng = make_stream(seed, {replicate, i, 0});
    Rng point_rng = make_stream(seed, {replicate, i, 1});
    const SineWarp warp = sample_sine_warp(warp_config, warp_rng);
    warps[i] = warp.to_map(domain, grid_size);
    data.unwarped[i] = sample_poisson_pattern(data.lambda, tau, point_rng);
    const AffineMap to_unit(domain, kUnitInterval);
    const AffineMap from_unit(kUnitInterval, domain);
    std::vector<double> moved;
    moved.reserve(data.unwarped[i].size());
    for (double x : data.unwarped[i].points()) moved.push_back(from_unit(warp(to_unit(x))));
    data.warped[i] = PointPattern(domain, std::move(moved));
  });
  for (auto& w : warps) data.warps.push_back(std::move(*w));
  return data;
}

ScenarioData simulate(const BimodalScenarioConfig& cfg, std::uint64_t replicate) {
  return simulate_sine("bimodal", BimodalScenarioConfig::domain(),
                       bimodal_measure(cfg.epsilon, cfg.grid_size), cfg.n, cfg.tau, cfg.warp,
                       cfg.seed, cfg.grid_size, replicate);
}

ScenarioData simulate(const UniformScenarioConfig& cfg, std::uint64_t replicate) {
  return simulate_sine("uniform", UniformScenarioConfig::domain(),
                       DiffuseMeasure::from_cdf(kUnitInterval, cfg.grid_size,
                                                [](double x) { return x; }),
                       cfg.n, cfg.tau, cfg.warp, cfg.seed, cfg.grid_size, replicate);
}

ScenarioData simulate(const TriangularScenarioConfig& cfg, std::uint64_t replicate) {
  validate_common(cfg.n, cfg.tau);
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
    throw ValidationError("mixture weight alpha must lie in [0, 1]");
  }
  if (!(cfg.h_min > 0.0 && cfg.h_min < cfg.h_narrow && cfg.h_narrow <= cfg.h_wide)) {
    throw ValidationError("need 0 < h_min < h_narrow <= h_wide");
  }
  if (cfg.h_wide > cfg.bound) {
    throw ValidationError("domain bound must cover the widest warped support");
  }
  const Interval domain = cfg.domain();
  ScenarioData data{"triangular", domain,
                    triangular_measure(1.0, cfg.bound, cfg.grid_size), {}, {}, {}, {}};
  std::vector<std::optional<WarpMap>> warps(cfg.n);
  data.scales.resize(cfg.n);
  data.unwarped.resize(cfg.n);
  data.warped.resize(cfg.n);
  parallel_for(cfg.n, [&](std::size_t i) {
    Rng warp_rng = make_stream(cfg.seed, {replicate, i, 0});
    Rng point_rng = make_stream(cfg.seed, {replicate, i, 1});
    const double h = cfg.sample_scale(warp_rng);
    data.scales[i] = h;
    warps[i] = WarpMap::from_function(domain, cfg.grid_size,
                                      [h](double x) { return h * x; });
    data.unwarped[i] = sample_poisson_pattern(data.lambda, cfg.tau, point_rng);
    std::vector<double> moved;
    moved.reserve(data.unwarped[i].size());
    for (double x : data.unwarped[i].points()) moved.push_back(domain.clamp(h * x));
    data.warped[i] = PointPattern(domain, std::move(moved));
  });
  for (auto& w : warps) data.warps.push_back(std::move(*w));
  return data;
}

}  // namespace

ScenarioData simulate_scenario(const ScenarioConfig& config, std::uint64_t replicate) {
  return std::visit([replicate](const auto& c) { return simulate(c, replicate); },
                    config);
}

}  // namespace phasereg
