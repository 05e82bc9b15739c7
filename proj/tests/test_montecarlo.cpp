#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rmt/errors.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/rng.hpp"

using namespace rmt;

namespace {

ExperimentConfig goe_config(int n, int replicas, TestFunctionSpec fn) {
  ExperimentConfig c;
  c.ensemble = EnsembleSpec::goe(n);
  c.test_function = std::move(fn);
  c.replicas = replicas;
  c.base_seed = 1234;
  return c;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); }

}  // namespace

TEST_CASE("parallel_for visits every index once and rethrows the lowest failure") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  try {
    parallel_for(50, 3, [](std::size_t i) {
      if (i == 17 || i == 31) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "17");
  }
  CHECK_THROWS_AS(parallel_for(3, 0, [](std::size_t) {}), ArgumentError);
  CHECK(hardware_workers() >= 1);
}

TEST_CASE("results do not depend on the worker count") {
  auto cfg = goe_config(24, 40, {"gauss_bump", {{"center", 0.1}}});
  cfg.n_grid = {8, 24};
  cfg.workers = 1;
  const auto one = run_experiment(cfg);
  for (int w : {4, 8}) {
    cfg.workers = w;
    const auto other = run_experiment(cfg);
    REQUIRE(other.sizes.size() == 2);
    for (std::size_t s = 0; s < 2; ++s) CHECK(other.sizes[s].values == one.sizes[s].values);
  }
  cfg.base_seed = 99;
  CHECK(run_experiment(cfg).sizes[0].values != one.sizes[0].values);

  const auto spectra_a = sample_spectra(EnsembleSpec::goe(16), 10, 5, 1);
  const auto spectra_b = sample_spectra(EnsembleSpec::goe(16), 10, 5, 3);
  for (std::size_t r = 0; r < 10; ++r) {
    CHECK(spectra_a[r].eigenvalues == spectra_b[r].eigenvalues);
    CHECK(spectra_a[r].seed == mix_seed(5, 16, r));
  }
}

TEST_CASE("GOE trace has variance 2 w^2 at every n") {
  const auto cfg = goe_config(16, 2000, {"monomial", {{"k", 1}}});
  const auto res = run_experiment(cfg);
  const auto rep = clt_report(res.sizes[0].values, theory_variance(cfg.ensemble, cfg.test_function.make()), 16);
  CHECK(std::abs(rep.theory.total - 2.0) < 1e-10);
  CHECK(std::abs(rep.sample_variance - 2.0) < 3 * rep.variance_se);
  CHECK(std::abs(rep.sample_mean) < 3 * std::sqrt(2.0 / 2000));
  CHECK(rep.distributional);
  CHECK(rep.ks_pvalue > 0.001);
}

TEST_CASE("constant test function is degenerate") {
  auto cfg = goe_config(10, 40, {"const", {{"value", 0.5}}});
  const auto res = run_experiment(cfg);
  for (double v : res.sizes[0].values) CHECK(std::abs(v - 5.0) < 1e-12);
  const auto reps = clt_reports(cfg, res);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].degenerate);
  CHECK_FALSE(reps[0].distributional);
  CHECK(reps[0].sample_variance < 1e-25);
}

TEST_CASE("Rademacher lambda^2 is degenerate despite round-off in the theory") {
  ExperimentConfig cfg;
  cfg.ensemble = EnsembleSpec::wigner(20, EntryDistribution::rademacher());
  cfg.test_function = {"monomial", {{"k", 2}}};
  cfg.replicas = 40;
  const auto reps = clt_reports(cfg, run_experiment(cfg));
  CHECK(reps[0].degenerate);
  CHECK(reps[0].sample_variance < 1e-20);
}

TEST_CASE("KS statistic and p-value") {
  const std::vector<double> one{0.0};
  CHECK(ks_statistic(one, 0.0, 1.0) == doctest::Approx(0.5));
  CHECK(ks_pvalue(0.0, 100) == 1.0);
  CHECK(ks_pvalue(0.5, 100) < 1e-10);
  // Asymptotic 5% critical value.
  CHECK(ks_pvalue(1.358 / (std::sqrt(1e6) + 0.12 + 0.11 / 1e3), 1000000) == doctest::Approx(0.05).epsilon(0.01));
  CHECK_THROWS_AS(ks_statistic(one, 0.0, 0.0), ArgumentError);

  // Under the null, p < 0.05 about 5% of the time.
  Rng rng(77);
  int rejections = 0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> s(100);
    for (double& x : s) x = 1.0 + 2.0 * rng.normal();
    if (ks_pvalue(ks_statistic(s, 1.0, 4.0), s.size()) < 0.05) ++rejections;
  }
  CHECK(rejections >= 4);
  CHECK(rejections <= 40);
}

TEST_CASE("clt_report summary statistics") {
  Rng rng(3);
  std::vector<double> s(5000);
  for (double& x : s) x = 0.5 + 1.5 * rng.normal();
  VarianceResult theory;
  theory.total = 2.25;
  const auto rep = clt_report(s, theory, 7);
  CHECK(rep.n == 7);
  CHECK(std::abs(rep.sample_mean - 0.5) < 0.07);
  CHECK(std::abs(rep.sample_variance - 2.25) < 3 * rep.variance_se);
  CHECK(rep.variance_se == doctest::Approx(rep.sample_variance * std::sqrt(2.0 / 4999)));
  CHECK(std::abs(rep.excess_kurtosis) < 0.25);
  CHECK(rep.ecf_deviation < 5 / std::sqrt(5000.0));
  CHECK_THROWS_AS(clt_report(std::vector<double>{1.0}, theory), ArgumentError);
}

TEST_CASE("Lindeberg functionals") {
  const auto g = EntryDistribution::gaussian(1.0);
  const double a = 1.0;  // tau sqrt(n) for tau = 0.1, n = 100
  const double l2 = 2 * a * normal_pdf(a) + std::erfc(a / std::sqrt(2.0));
  const double l4 = 2 * normal_pdf(a) * (a * a * a + 3 * a) + 3 * std::erfc(a / std::sqrt(2.0));
  const auto rec = lindeberg_diagnostics(g, 100, std::nullopt, 0.1);
  CHECK(rec.L2 == doctest::Approx(l2).epsilon(1e-9));
  CHECK(rec.L4 == doctest::Approx(l4).epsilon(1e-9));
  const auto cov = lindeberg_diagnostics(g, 100, 300, 0.1);
  CHECK(cov.L2 == doctest::Approx(3 * l2).epsilon(1e-9));
  const auto rad = lindeberg_diagnostics(EntryDistribution::rademacher(), 100, std::nullopt, 0.2);
  CHECK(rad.L2 == 0.0);
  CHECK(rad.L4 == 0.0);
  // Vanishes as n grows.
  CHECK(lindeberg_diagnostics(g, 10000, std::nullopt, 0.1).L2 < 1e-20);
  CHECK_THROWS_AS(lindeberg_diagnostics(g, 100, std::nullopt, 0.0), ArgumentError);
}

TEST_CASE("a-priori variance bound") {
  auto cfg = goe_config(32, 200, {"gauss_bump", {{"center", 0.0}, {"width", 0.5}}});
  const auto res = run_experiment(cfg);
  const auto reps = clt_reports(cfg, res);
  REQUIRE(reps[0].bound_check);
  const auto& bc = *reps[0].bound_check;
  const auto sup = cfg.test_function.make().sup_derivative();
  REQUIRE(sup);
  CHECK(bc.applicable);
  CHECK(bc.bound == doctest::Approx(2.0 * (*sup) * (*sup)));
  CHECK(bc.holds);

  const auto wig = EnsembleSpec::wigner(32, EntryDistribution::rademacher());
  CHECK_FALSE(apriori_bound_check(reps[0], cfg.test_function.make(), wig).applicable);
  const auto with_c = apriori_bound_check(reps[0], cfg.test_function.make(), wig, 1.0);
  CHECK(with_c.applicable);
  CHECK(with_c.bound == doctest::Approx(*fourier_norm(cfg.test_function.make(), 3) * *fourier_norm(cfg.test_function.make(), 3)));
}

TEST_CASE("complex test functions give re and im reports") {
  auto cfg = goe_config(12, 40, {"exponential", {{"t0", 1.0}}});
  const auto res = run_experiment(cfg);
  REQUIRE(res.sizes[0].imag_values.size() == 40);
  const auto reps = clt_reports(cfg, res);
  REQUIRE(reps.size() == 2);
  CHECK(reps[0].part == "re");
  CHECK(reps[1].part == "im");
  CHECK(reps[0].outside_hypotheses);
  const auto spectra = sample_spectra(cfg.ensemble, 40, cfg.base_seed);
  for (int r = 0; r < 40; ++r) {
    const auto value = trace_exponential(spectra[r], 1.0);
    CHECK(std::abs(value.real() - res.sizes[0].values[r]) < 1e-10);
    CHECK(std::abs(value.imag() - res.sizes[0].imag_values[r]) < 1e-10);
  }
}

TEST_CASE("empirical Y obeys the Poincare bound") {
  const auto spectra = sample_spectra(EnsembleSpec::goe(40), 300, 11);
  const auto phi = builtin("gauss_bump", {{"center", 0.2}});
  CHECK(std::abs(empirical_Y(spectra, phi, 1.0, 0.0)) < 1e-9);
  for (double t : {0.5, 1.0, 2.0, 4.0})
    CHECK(std::abs(empirical_Y(spectra, phi, 1.0, t)) <= 1.25 * std::sqrt(2.0) * t);
  CHECK_THROWS_AS(empirical_Y(std::span(spectra).first(1), phi, 1.0, 1.0), ArgumentError);
}

TEST_CASE("theory variance dispatch") {
  const auto lin = builtin("monomial", {{"k", 1}});
  CHECK(theory_variance(EnsembleSpec::wishart(50, 100), lin).total == doctest::Approx(4.0));
  CHECK(theory_variance(EnsembleSpec::wigner(50, EntryDistribution::rademacher()), builtin("monomial", {{"k", 2}})).total <
        1e-10);
  CHECK_THROWS_AS(theory_variance(EnsembleSpec::wishart(100, 50), lin), ArgumentError);
}

TEST_CASE("experiment validation") {
  auto cfg = goe_config(8, 1, {"monomial", {}});
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg.replicas = 4;
  cfg.n_grid = {16, 8};
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg.n_grid = {};
  cfg.test_function = {"nope", {}};
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
}
