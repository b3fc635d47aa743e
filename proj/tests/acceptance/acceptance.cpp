// Acceptance gate: one PASS/FAIL line per criterion.
//   acceptance            run all criteria
//   acceptance 3 5        run the listed criteria only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "phasereg/evaluation.hpp"
#include "phasereg/frechet.hpp"
#include "phasereg/smoothing.hpp"
#include "phasereg/transport.hpp"

using namespace phasereg;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

PointPattern random_pattern(Rng& rng, std::size_t min_m, std::size_t max_m) {
  std::uniform_int_distribution<std::size_t> count(min_m, max_m);
  std::uniform_real_distribution<double> shape(0.5, 4.0);
  std::gamma_distribution<double> ga(shape(rng), 1.0);
  std::gamma_distribution<double> gb(shape(rng), 1.0);
  const std::size_t m = count(rng);
  std::vector<double> pts(m);
  for (double& x : pts) {
    const double a = ga(rng);
    x = a / (a + gb(rng));
  }
  return PointPattern(kUnitInterval, std::move(pts));
}

Outcome criterion_1() {
  Rng rng = make_stream(1, {1});
  std::uniform_int_distribution<std::size_t> size(1, 400);
  std::uniform_real_distribution<double> lo(-50.0, 0.0);
  double worst = 0.0;
  for (int pair = 0; pair < 200; ++pair) {
    const Interval domain(lo(rng), lo(rng) + 100.0);
    std::uniform_real_distribution<double> u(domain.lo(), domain.hi());
    const std::size_t m = size(rng);
    std::vector<double> a(m);
    std::vector<double> b(m);
    for (std::size_t k = 0; k < m; ++k) {
      a[k] = u(rng);
      b[k] = u(rng) * 0.5 + domain.lo() * 0.5;
    }
    const PointPattern pa(domain, a);
    const PointPattern pb(domain, b);
    const double exact = wasserstein2(EmpiricalMeasure(pa), EmpiricalMeasure(pb));
    worst = std::max(worst, std::abs(exact - wasserstein2_empirical_oracle(EmpiricalMeasure(pa), EmpiricalMeasure(pb))));
  }
  return {worst <= 1e-8, fmt("200 pairs, max |W2 - oracle| = %.3e (tol 1e-8)", worst)};
}

Outcome criterion_2() {
  Rng rng = make_stream(1, {2});
  const double sigmas[] = {0.01, 0.05, 0.1, 0.25};
  std::size_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (int p = 0; p < 100; ++p) {
    const PointPattern pattern = random_pattern(rng, 1, 300);
    const EmpiricalMeasure empirical(pattern);
    for (double sigma : sigmas) {
      const KernelSpec kernel(sigma, KernelKind::gaussian);
      const double d = wasserstein2(smooth_pattern(pattern, kernel), empirical);
      const double slack = lemma_bound(kernel) - d * d;
      min_slack = std::min(min_slack, slack);
      if (slack < 0.0) ++violations;
    }
  }
  return {violations == 0,
          fmt("400 fits, violations = %zu, min slack = %.3e", violations, min_slack)};
}

Outcome criterion_3() {
  Rng rng = make_stream(1, {3});
  std::uniform_real_distribution<double> step(0.02, 1.0);
  const SineWarpConfig warp_config;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int triple = 0; triple < 50; ++triple) {
    std::vector<DiffuseMeasure> measures;
    for (int k = 0; k < 3; ++k) {
      measures.push_back(
          smooth_pattern(random_pattern(rng, 5, 60), KernelSpec(0.05, KernelKind::gaussian)));
    }
    const BarycenterResult bary = barycenter(measures);
    const double best = frechet_functional(bary.mean, measures);
    for (int w = 0; w < 100; ++w) {
      const WarpMap warp = blend(WarpMap::identity(kUnitInterval),
                                 sample_sine_warp(warp_config, rng).to_map(kUnitInterval),
                                 step(rng));
      const double value = frechet_functional(push_forward(bary.mean, warp), measures);
      worst_margin = std::min(worst_margin, value - best);
    }
  }
  return {worst_margin >= -1e-9,
          fmt("5000 perturbations, min margin = %.3e (tol -1e-9)", worst_margin)};
}

Outcome criterion_4() {
  const std::vector<double> xs = interior_grid();
  std::string detail;
  bool ok = true;
  for (int j : {2, 10}) {
    const SineWarpConfig config{j, KLaw::poisson_sign(3.0)};
    const UnbiasednessReport report = unbiasedness_mc(config, 10000, xs, 4);
    double worst = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      worst = std::max(worst, std::abs(report.mean[k] - xs[k]) / report.standard_error[k]);
    }
    ok = ok && report.passed();
    detail += fmt("J=%d max |mean - x|/SE = %.2f; ", j, worst);
  }
  return {ok, detail + "tol 4 SE"};
}

Outcome criterion_5() {
  const std::vector<std::pair<std::size_t, double>> cells{{10, 100.0}, {30, 400.0}, {100, 2500.0}};
  StudyOptions options;
  options.replicates = 20;
  options.seed = 5;
  const StudyReport report = run_study(BimodalScenarioConfig{}, cells, options);
  bool ok = true;
  std::string detail;
  for (const auto& [name, field] :
       {std::pair{"d(lambda_hat,lambda)", &ReplicateMetrics::lambda_error},
        std::pair{"sup warp error", &ReplicateMetrics::warp_error},
        std::pair{"registration l2", &ReplicateMetrics::registration_l2}}) {
    std::vector<double> med;
    for (const auto& cell : report.cells) med.push_back(cell.median_of(field));
    const bool decreasing = med[0] > med[1] && med[1] > med[2];
    ok = ok && decreasing;
    detail += fmt("%s %.4f, %.4f, %.4f %s; ", name, med[0], med[1], med[2],
                  decreasing ? "decreasing" : "NOT decreasing");
  }
  // not gated: the per-point scale of the registration error
  std::vector<double> per_point;
  for (const auto& cell : report.cells) {
    per_point.push_back(cell.median_of(&ReplicateMetrics::registration_w2));
  }
  detail += fmt("(l2/sqrt(m) %.4f, %.4f, %.4f)", per_point[0], per_point[1], per_point[2]);
  return {ok, detail};
}

Outcome criterion_6() {
  const std::vector<std::size_t> ns{8, 16, 32, 64};
  StudyOptions options;
  options.replicates = 20;
  options.seed = 6;
  const StudyReport report =
      rate_study(BimodalScenarioConfig{}, ns,
                 [](std::size_t n) { return static_cast<double>(n * n); }, options);
  std::string medians;
  for (const auto& cell : report.cells) {
    medians += fmt(" %.4f", cell.median_of(&ReplicateMetrics::lambda_error));
  }
  const double slope = *report.slope;
  return {slope >= -0.7 && slope <= -0.3,
          fmt("slope = %.3f (want [-0.7, -0.3]); medians", slope) + medians};
}

Outcome criterion_7() {
  StudyOptions options;
  options.seed = 7;
  const CovarianceReport report =
      clt_covariance_check(UniformScenarioConfig{}, 20, 400.0, 300, options);
  return {report.max_relative_error <= 0.25,
          fmt("max relative error = %.3f over %zu entries (tol 0.25), sign agreement %.2f",
              report.max_relative_error, report.thresholded_entries, report.sign_agreement)};
}

Outcome criterion_8() {
  StudyOptions options;
  options.replicates = 20;
  options.seed = 8;
  options.bandwidth.sigma = 0.025;
  const BimodalFigureReport report = bimodal_figure_check(BimodalScenarioConfig{}, options);
  return {report.fraction_barycenter_better >= 0.9 && report.fraction_modes_found >= 0.8,
          fmt("barycenter better in %.0f%% (want >= 90%%), modes found in %.0f%% (want >= 80%%)",
              100.0 * report.fraction_barycenter_better, 100.0 * report.fraction_modes_found)};
}

Outcome criterion_9() {
  StudyOptions options;
  options.replicates = 20;
  options.seed = 9;
  options.bandwidth.alpha = kRosenblattExponent;
  const TriangularScenarioConfig config;
  const TriangularFigureReport report = triangular_linearity_check(config, options);
  const double tol = 0.05 * config.domain().width();
  const double worst = *std::max_element(report.max_deviation.begin(), report.max_deviation.end());
  const double r = median(report.correlation);
  return {worst <= tol && r >= 0.9,
          fmt("max deviation = %.4f (tol %.2f), median r = %.3f (want >= 0.9)", worst, tol, r)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9};
  const double budgets[] = {5, 30, 60, 30, 600, 600, 900, 600, 600};

  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
  if (selected.empty()) {
    for (int c = 1; c <= static_cast<int>(criteria.size()); ++c) selected.push_back(c);
  }

  bool all = true;
  for (int c : selected) {
    if (c < 1 || c > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion %d\n", c);
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[c - 1]();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double budget = budgets[c - 1];
    const bool ok = outcome.passed && seconds < budget;
    all = all && ok;
    std::printf("criterion %d: %s  %s  [%.1fs of %.0fs]\n", c, ok ? "PASS" : "FAIL",
                outcome.detail.c_str(), seconds, budget);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
