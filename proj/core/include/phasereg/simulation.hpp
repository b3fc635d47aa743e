#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "phasereg/measure.hpp"
#include "phasereg/random.hpp"
#include "phasereg/warp_map.hpp"

namespace phasereg {

/// zeta_0(x) = x, zeta_k(x) = x - sin(pi k x) / (|k| pi). Strictly increasing
/// on [0, 1] with zeta_k(0) = 0 and zeta_k(1) = 1.
double zeta(int k, double x);

/// Integer law symmetric about zero.
class KLaw {
 public:
  enum class Kind { point_mass, poisson_sign, symmetric_pair };

  /// K = k almost surely. Symmetric only for k == 0.
  static KLaw point_mass(int k);
  /// K = V1 V2 with V1 ~ Poisson(mean) and V2 = +-1 equiprobable.
  static KLaw poisson_sign(double mean);
  /// K = +-k equiprobable.
  static KLaw symmetric_pair(int k);

  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  int sample(Rng& rng) const;

 private:
  KLaw(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}
  Kind kind_;
  double parameter_;
};

struct SineWarpConfig {
  int J = 2;
  KLaw k_law = KLaw::poisson_sign(3.0);
};

/// Random convex mixture of zeta maps on [0, 1].
struct SineWarp {
  std::vector<double> weights;
  std::vector<int> ks;

  double operator()(double x) const;
  /// Sampled on a uniform grid of `domain`, through the affine map that sends
  /// [0, 1] onto `domain`.
  WarpMap to_map(const Interval& domain,
                 std::size_t grid_size = kDefaultGridSize) const;
};

/// Draws K_1..K_J i.i.d. and the order statistics of J - 1 uniforms; weights
/// are the spacings U_(1), U_(2) - U_(1), ..., 1 - U_(J-1).
SineWarp sample_sine_warp(const SineWarpConfig& config, Rng& rng);

/// Poisson(tau) many i.i.d. draws from `lambda` by inverse-CDF sampling.
PointPattern sample_poisson_pattern(const DiffuseMeasure& lambda, double tau,
                                    Rng& rng);

/// Two unit-variance Gaussians at +-8 truncated to [-16, 16] plus a
/// Beta(1.5, 1.5) background on [-12, 12] of weight epsilon; each component is
/// renormalized after truncation.
double bimodal_density(double x, double epsilon);
double bimodal_cdf(double x, double epsilon);
DiffuseMeasure bimodal_measure(double epsilon,
                               std::size_t grid_size = kDefaultGridSize);

/// Triangular law on [-h, h] with peak 1/h at zero.
double triangular_density(double t, double h);
double triangular_cdf(double t, double h);
DiffuseMeasure triangular_measure(double h, double bound,
                                  std::size_t grid_size = kDefaultGridSize);

struct BimodalScenarioConfig {
  std::size_t n = 30;
  double tau = 93.0;
  double epsilon = 0.1;
  SineWarpConfig warp{2, KLaw::poisson_sign(3.0)};
  std::uint64_t seed = 1;
  std::size_t grid_size = kDefaultGridSize;

  static Interval domain() { return {-16.0, 16.0}; }
};

/// Linear warps x -> h x of a triangular structural mean (h = 1), with
/// h ~ alpha U[h_min, h_narrow] + (1 - alpha) U[h_min, h_wide].
struct TriangularScenarioConfig {
  std::size_t n = 30;
  double tau = 93.0;
  double bound = 3.0;  ///< domain is [-bound, bound]
  double alpha = 0.675;
  double h_min = 0.35;
  double h_narrow = 1.0;
  double h_wide = 3.0;
  std::uint64_t seed = 1;
  std::size_t grid_size = kDefaultGridSize;

  Interval domain() const { return {-bound, bound}; }
  double mean_scale() const {
    return alpha * 0.5 * (h_min + h_narrow) + (1.0 - alpha) * 0.5 * (h_min + h_wide);
  }
  double sample_scale(Rng& rng) const;
};

/// Uniform structural mean on [0, 1] under sine warps. Every quantile is
/// well identified, so the warp CLT applies without degenerate directions.
struct UniformScenarioConfig {
  std::size_t n = 30;
  double tau = 93.0;
  SineWarpConfig warp{2, KLaw::poisson_sign(3.0)};
  std::uint64_t seed = 1;
  std::size_t grid_size = kDefaultGridSize;

  static Interval domain() { return kUnitInterval; }
};

using ScenarioConfig =
    std::variant<BimodalScenarioConfig, TriangularScenarioConfig, UniformScenarioConfig>;

std::string scenario_name(const ScenarioConfig& config);
std::size_t scenario_size(const ScenarioConfig& config);
std::uint64_t scenario_seed(const ScenarioConfig& config);

/// Ground truth and observations of one simulated experiment.
struct ScenarioData {
  std::string name;
  Interval domain;
  DiffuseMeasure lambda;                ///< structural mean
  std::vector<WarpMap> warps;           ///< true warp maps T_i
  std::vector<double> scales;           ///< h_i (triangular scenario only)
  std::vector<PointPattern> unwarped;   ///< Pi_i
  std::vector<PointPattern> warped;     ///< T_i # Pi_i
};

/// Deterministic given (config seed, replicate). Process i draws from its own
/// substream, so generation order does not affect the result.
ScenarioData simulate_scenario(const ScenarioConfig& config,
                               std::uint64_t replicate = 0);

}  // namespace phasereg
