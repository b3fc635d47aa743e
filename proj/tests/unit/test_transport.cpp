#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "phasereg/error.hpp"
#include "phasereg/random.hpp"
#include "phasereg/simulation.hpp"
#include "phasereg/smoothing.hpp"
#include "phasereg/transport.hpp"
#include "phasereg/warp_map.hpp"

using namespace phasereg;

namespace {

const double kGridTol = grid_tolerance(kDefaultGridSize);

DiffuseMeasure half_uniform() {
  return DiffuseMeasure::uniform(kUnitInterval, Interval(0.0, 0.5));
}

DiffuseMeasure random_measure(Rng& rng) {
  std::uniform_int_distribution<int> count(1, 30);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> s(0.01, 0.25);
  std::vector<double> pts(static_cast<std::size_t>(count(rng)));
  for (double& x : pts) x = u(rng) * u(rng);
  return smooth_pattern(PointPattern(kUnitInterval, pts), KernelSpec(s(rng)));
}

PointPattern random_pattern(Rng& rng, std::size_t m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pts(m);
  for (double& x : pts) x = u(rng);
  return PointPattern(kUnitInterval, pts);
}

}  // namespace

TEST_CASE("wasserstein2 examples") {
  const auto u = DiffuseMeasure::uniform(kUnitInterval);
  CHECK(wasserstein2(u, u) == 0.0);
  CHECK(wasserstein2(u, half_uniform()) == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-12));
  CHECK(wasserstein2(half_uniform(), u) == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-12));

  const EmpiricalMeasure a(PointPattern(kUnitInterval, {0.1, 0.5}));
  const EmpiricalMeasure b(PointPattern(kUnitInterval, {0.3, 0.7}));
  CHECK(wasserstein2(a, b) == doctest::Approx(0.2).epsilon(1e-12));

  // Point mass at 1/2 against U[0,1]: integral of (p - 1/2)^2.
  const EmpiricalMeasure atom(PointPattern(kUnitInterval, {0.5}));
  CHECK(wasserstein2(u, atom) == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-12));
  CHECK(wasserstein2(atom, u) == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-12));

  CHECK_THROWS_AS(wasserstein2(u, DiffuseMeasure::uniform(Interval(0.0, 2.0))), ValidationError);
}

TEST_CASE("sorted matching oracle") {
  const EmpiricalMeasure p(PointPattern(kUnitInterval, {0.0, 1.0}));
  const EmpiricalMeasure q(PointPattern(kUnitInterval, {1.0, 0.0}));
  CHECK(wasserstein2_empirical_oracle(p, p) == 0.0);
  CHECK(wasserstein2_empirical_oracle(p, q) == 0.0);
  const EmpiricalMeasure r(PointPattern(kUnitInterval, {0.0, 0.5, 1.0}));
  const EmpiricalMeasure s(PointPattern(kUnitInterval, {0.1, 0.6, 0.9}));
  CHECK(wasserstein2_empirical_oracle(r, s) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(wasserstein2_empirical_oracle(p, r), ValidationError);
}

TEST_CASE("exact and grid paths agree with the oracle") {
  Rng rng(21);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  for (int k = 0; k < 200; ++k) {
    const std::size_t m = size(rng);
    const EmpiricalMeasure a(random_pattern(rng, m));
    const EmpiricalMeasure b(random_pattern(rng, m));
    const double oracle = wasserstein2_empirical_oracle(a, b);
    CHECK(std::abs(wasserstein2(a, b) - oracle) <= 1e-8);
    CHECK(std::abs(wasserstein2(a.to_diffuse(), b.to_diffuse()) - oracle) <= 3.0 * kGridTol);
  }
}

TEST_CASE("wasserstein1 examples and W2^2 <= W1 on the unit interval") {
  const auto u = DiffuseMeasure::uniform(kUnitInterval);
  CHECK(wasserstein1(u, u) == 0.0);
  CHECK(wasserstein1(u, half_uniform()) == doctest::Approx(0.25).epsilon(1e-12));

  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const auto a = random_measure(rng);
    const auto b = random_measure(rng);
    const double w2 = wasserstein2(a, b);
    CHECK(w2 * w2 <= wasserstein1(a, b) + 1e-12);
    const EmpiricalMeasure e(random_pattern(rng, 7));
    const double w2e = wasserstein2(a, e);
    CHECK(w2e * w2e <= wasserstein1(a, e) + 1e-12);
    CHECK(wasserstein1(a, e) == doctest::Approx(wasserstein1(e, a)).epsilon(1e-12));
  }
}

TEST_CASE("triangle inequality and symmetry") {
  Rng rng(9);
  for (int k = 0; k < 100; ++k) {
    const auto a = random_measure(rng);
    const auto b = random_measure(rng);
    const auto c = random_measure(rng);
    CHECK(wasserstein2(a, c) <= wasserstein2(a, b) + wasserstein2(b, c) + 1e-9);
    CHECK(wasserstein2(a, b) == doctest::Approx(wasserstein2(b, a)).epsilon(1e-12));
  }
}

TEST_CASE("optimal map examples") {
  const auto u = DiffuseMeasure::uniform(kUnitInterval);
  const WarpMap id = optimal_map(u, u);
  for (double x = 0.0; x <= 1.0; x += 0.05) CHECK(id(x) == doctest::Approx(x).epsilon(1e-12));

  const WarpMap half = optimal_map(u, half_uniform());
  CHECK_FALSE(half.onto());
  for (double x = 0.0; x <= 1.0; x += 0.05) CHECK(half(x) == doctest::Approx(x / 2).epsilon(1e-12));

  // Recovering a strictly increasing warp from lambda and its push-forward.
  const auto lambda = smooth_pattern(PointPattern(kUnitInterval, {0.2, 0.5, 0.6}), KernelSpec(0.1));
  const WarpMap t = WarpMap::from_function(kUnitInterval, kDefaultGridSize,
                                           [](double x) { return zeta(2, x); });
  const WarpMap recovered = optimal_map(lambda, push_forward(lambda, t));
  for (double x = 0.0; x <= 1.0; x += 0.01) {
    CHECK(std::abs(recovered(x) - t(x)) <= 5.0 * kGridTol);
  }
}

TEST_CASE("optimal maps in both directions are mutual inverses") {
  Rng rng(13);
  for (int k = 0; k < 25; ++k) {
    const auto a = random_measure(rng);
    const auto b = random_measure(rng);
    const WarpMap ab = optimal_map(a, b);
    const WarpMap ba = optimal_map(b, a);
    // inverse holds a-almost everywhere, i.e. off the flat stretches of F_a
    for (double p = 0.005; p < 1.0; p += 0.01) {
      const double x = a.quantile(p);
      CHECK(std::abs(ba(ab(x)) - x) <= 5.0 * kGridTol);
    }
    CHECK(wasserstein2(push_forward(a, ab), b) <= 5.0 * kGridTol);
  }
}

TEST_CASE("push forward") {
  const PointPattern p(kUnitInterval, {0.2, 0.8});
  const auto moved = push_forward(p, WarpMap::identity(kUnitInterval));
  CHECK(moved.points()[0] == 0.2);
  const WarpMap half(kUnitInterval, {0.0, 1.0}, {0.0, 0.5});
  const auto squeezed = push_forward(p, half);
  REQUIRE(squeezed.size() == 2);
  CHECK(squeezed.points()[0] == doctest::Approx(0.1));
  CHECK(squeezed.points()[1] == doctest::Approx(0.4));

  const auto u = DiffuseMeasure::uniform(kUnitInterval);
  CHECK(wasserstein2(push_forward(u, WarpMap::identity(kUnitInterval)), u) == 0.0);

  // F of zeta_1 # U[0,1] is zeta_1^{-1}: F(zeta_1(x)) = x.
  const WarpMap z1 = WarpMap::from_function(kUnitInterval, kDefaultGridSize,
                                            [](double x) { return zeta(1, x); });
  const auto pushed = push_forward(u, z1);
  for (double x = 0.0; x <= 1.0; x += 0.01) {
    CHECK(std::abs(pushed.cdf(zeta(1, x)) - x) <= kGridTol);
  }
}

TEST_CASE("geodesics") {
  const auto u = DiffuseMeasure::uniform(kUnitInterval);
  const auto h = half_uniform();
  CHECK(wasserstein2(geodesic(u, h, 0.0), u) <= kGridTol);
  CHECK(wasserstein2(geodesic(u, h, 1.0), h) <= kGridTol);
  const auto mid = geodesic(u, h, 0.5);
  CHECK(wasserstein2(mid, DiffuseMeasure::uniform(kUnitInterval, Interval(0.0, 0.75))) <= 1e-12);
  CHECK_THROWS_AS(geodesic(u, h, 1.5), ValidationError);

  Rng rng(2);
  std::uniform_real_distribution<double> tt(0.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    const auto a = random_measure(rng);
    const auto b = random_measure(rng);
    const double t = tt(rng);
    CHECK(std::abs(wasserstein2(a, geodesic(a, b, t)) - t * wasserstein2(a, b)) <= 1e-3);
  }
}

TEST_CASE("warp maps") {
  const WarpMap id = WarpMap::identity(Interval(-2.0, 2.0));
  CHECK(id.onto());
  CHECK(id(1.25) == 1.25);
  CHECK_THROWS_AS(WarpMap(kUnitInterval, {0.0, 0.5, 1.0}, {0.0, 0.7, 0.6}), ValidationError);
  CHECK_THROWS_AS(WarpMap(kUnitInterval, {0.0, 1.0}, {0.0, 1.5}), ValidationError);

  const WarpMap z = WarpMap::from_function(kUnitInterval, 1025, [](double x) { return zeta(3, x); });
  const WarpMap zi = z.inverse();
  CHECK(zi.onto());
  for (double x = 0.0; x <= 1.0; x += 0.01) {
    CHECK(zi(z(x)) == doctest::Approx(x).epsilon(1e-12));
  }

  // Not onto: the inverse maps the gap to the last preimage.
  const WarpMap half(kUnitInterval, {0.0, 1.0}, {0.0, 0.5});
  const WarpMap hi = half.inverse();
  CHECK(hi(0.25) == doctest::Approx(0.5));
  CHECK(hi(0.75) <= 1.0);

  const WarpMap b = blend(WarpMap::identity(kUnitInterval), half, 0.5);
  CHECK(b(1.0) == doctest::Approx(0.75));

  const Interval wide(-16.0, 16.0);
  const WarpMap zw = rescale_affine(z, kUnitInterval, wide);
  CHECK(zw.onto());
  CHECK(zw(0.0) == doctest::Approx(32.0 * zeta(3, 0.5) - 16.0).epsilon(1e-12));
}
