#include <doctest.h>

#include <cmath>
#include <random>

#include "phasereg/error.hpp"
#include "phasereg/measure.hpp"
#include "phasereg/random.hpp"
#include "phasereg/simulation.hpp"
#include "phasereg/smoothing.hpp"

using namespace phasereg;

TEST_CASE("interval rejects degenerate endpoints") {
  CHECK_THROWS_AS(Interval(1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(Interval(2.0, 1.0), ValidationError);
  CHECK_THROWS_AS(Interval(0.0, INFINITY), ValidationError);
  const Interval d(-16.0, 16.0);
  CHECK(d.width() == 32.0);
  CHECK(d.clamp(20.0) == 16.0);
}

TEST_CASE("uniform grid hits both endpoints exactly") {
  const auto g = uniform_grid(Interval(-3.0, 3.0), 4097);
  CHECK(g.size() == 4097);
  CHECK(g.front() == -3.0);
  CHECK(g.back() == 3.0);
  CHECK(g[2048] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("point patterns are sorted and keep duplicates") {
  const PointPattern p(kUnitInterval, {0.9, 0.1, 0.1, 0.5});
  REQUIRE(p.size() == 4);
  CHECK(p.points()[0] == 0.1);
  CHECK(p.points()[1] == 0.1);
  CHECK(p.points()[3] == 0.9);
  CHECK_THROWS_AS(PointPattern(kUnitInterval, {1.5}), ValidationError);
  CHECK_THROWS_AS(PointPattern(kUnitInterval, {NAN}), ValidationError);
}

TEST_CASE("cdf evaluation") {
  const auto u = DiffuseMeasure::uniform_on_grid(kUnitInterval, 4097);
  CHECK(u.cdf(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(u.cdf(1.0) == 1.0);
  CHECK(u.cdf(-1.0) == 0.0);
  CHECK(u.cdf(2.0) == 1.0);

  const auto tri = triangular_measure(1.0, 3.0);
  CHECK(tri.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(tri.cdf(3.0) == 1.0);
}

TEST_CASE("quantile evaluation") {
  const auto u = DiffuseMeasure::uniform(kUnitInterval);
  CHECK(u.quantile(0.25) == doctest::Approx(0.25).epsilon(1e-15));

  // (t + 1)^2 / 2 = 1/8 at t = -1/2
  const auto tri = triangular_measure(1.0, 3.0);
  CHECK(tri.quantile(0.125) == doctest::Approx(-0.5).epsilon(1e-6));

  Rng rng(11);
  std::uniform_real_distribution<double> x(0.0, 1.0);
  const auto smooth = smooth_pattern(PointPattern(kUnitInterval, {0.2, 0.3, 0.8}),
                                     KernelSpec(0.1));
  for (int k = 0; k < 200; ++k) {
    const double v = x(rng);
    CHECK(smooth.quantile(smooth.cdf(v)) == doctest::Approx(v).epsilon(1e-9));
  }
}

TEST_CASE("flat segments resolve to the left endpoint") {
  // Mass on [0, 0.25] and [0.75, 1]; flat in between.
  const std::vector<double> xs{0.0, 0.25, 0.75, 1.0};
  const std::vector<double> ps{0.0, 0.5, 0.5, 1.0};
  const auto m = DiffuseMeasure::from_nodes(kUnitInterval, xs, ps);
  CHECK(m.quantile(0.5) == doctest::Approx(0.25));
  CHECK(m.quantile(0.5 + 1e-9) > 0.75);
  const std::vector<double> probs{0.25, 0.5, 0.75};
  const auto qs = m.quantiles(probs);
  CHECK(qs[1] == doctest::Approx(0.25));
  CHECK(qs[2] == doctest::Approx(0.875));
}

TEST_CASE("measure construction validates its cdf") {
  CHECK_THROWS_AS(DiffuseMeasure(kUnitInterval, {0.0, 1.0}, {0.1, 1.0}), ValidationError);
  CHECK_THROWS_AS(DiffuseMeasure(kUnitInterval, {0.0, 0.5, 1.0}, {0.0, 0.6, 0.5}),
                  ValidationError);
  CHECK_THROWS_AS(DiffuseMeasure(kUnitInterval, {0.0, 0.0, 1.0}, {0.0, 0.5, 1.0}),
                  ValidationError);
  CHECK_THROWS_AS(DiffuseMeasure(kUnitInterval, {0.1, 1.0}, {0.0, 1.0}), ValidationError);
}

TEST_CASE("empirical cdf and quantile") {
  const EmpiricalMeasure two(PointPattern(kUnitInterval, {0.2, 0.8}));
  CHECK(two.cdf(0.5) == 0.5);
  CHECK(two.cdf(0.1) == 0.0);
  const EmpiricalMeasure dup(PointPattern(kUnitInterval, {0.1, 0.1, 0.9}));
  CHECK(dup.cdf(0.1) == doctest::Approx(2.0 / 3.0));
  CHECK(dup.quantile(0.5) == 0.1);
  CHECK(dup.quantile(0.7) == 0.9);
  CHECK(dup.quantile(0.0) == 0.1);
  CHECK_THROWS_AS(EmpiricalMeasure(PointPattern(kUnitInterval)), ValidationError);

  double previous = 0.0;
  for (double x = -0.1; x <= 1.1; x += 0.01) {
    const double f = dup.cdf(x);
    CHECK(f >= previous);
    CHECK(f <= 1.0);
    previous = f;
  }
}

TEST_CASE("rescale_affine") {
  const Interval wide(-16.0, 16.0);
  const PointPattern p(wide, {0.0});
  CHECK(rescale_affine(p, wide, kUnitInterval).points()[0] == 0.5);
  CHECK_THROWS_AS(rescale_affine(p, kUnitInterval, wide), ValidationError);

  const auto m = smooth_pattern(PointPattern(kUnitInterval, {0.3, 0.4}), KernelSpec(0.05));
  CHECK(rescale_affine(m, kUnitInterval, kUnitInterval).grid().size() == m.size());

  const auto there = rescale_affine(m, kUnitInterval, wide);
  const auto back = rescale_affine(there, wide, kUnitInterval);
  REQUIRE(back.size() == m.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    CHECK(std::abs(back.grid()[j] - m.grid()[j]) <= 1e-12);
    CHECK(back.cdf_values()[j] == m.cdf_values()[j]);
  }

  Rng rng(3);
  std::uniform_real_distribution<double> u(-16.0, 16.0);
  std::vector<double> pts(50);
  for (double& x : pts) x = u(rng);
  const PointPattern q(wide, pts);
  const auto round = rescale_affine(rescale_affine(q, wide, kUnitInterval), kUnitInterval, wide);
  for (std::size_t k = 0; k < q.size(); ++k) {
    CHECK(std::abs(round.points()[k] - q.points()[k]) <= 1e-12 * wide.width());
  }
}

TEST_CASE("cdf and quantile are inverse within the grid tolerance") {
  Rng rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto lambda = bimodal_measure(0.1);
  const auto unit = rescale_affine(lambda, lambda.domain(), kUnitInterval);
  const double tol = grid_tolerance(kDefaultGridSize);
  for (int k = 0; k < 1000; ++k) {
    const double p = u(rng);
    CHECK(std::abs(unit.cdf(unit.quantile(p)) - p) <= tol);
  }
}

TEST_CASE("from_cdf normalizes and from_nodes merges ties") {
  const auto m = DiffuseMeasure::from_cdf(kUnitInterval, 101,
                                          [](double x) { return 2.0 + 3.0 * x * x; });
  CHECK(m.cdf(0.5) == doctest::Approx(0.25));
  const std::vector<double> xs{0.5, 0.5, 0.7};
  const std::vector<double> ps{0.2, 0.4, 0.9};
  const auto n = DiffuseMeasure::from_nodes(kUnitInterval, xs, ps);
  CHECK(n.cdf(0.5) == doctest::Approx(0.4));
}
