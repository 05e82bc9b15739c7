#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "rmt/ensembles.hpp"
#include "rmt/errors.hpp"
#include "rmt/spectra.hpp"
#include "rmt/testfns.hpp"

using namespace rmt;

namespace {

SymmetricMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  SymmetricMatrix m(static_cast<int>(rows.size()));
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

std::vector<double> eigen_reference(const SymmetricMatrix& m) {
  Eigen::MatrixXd a(m.size(), m.size());
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) a(i, j) = m(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

TEST_CASE("small exact spectra") {
  const auto d = eigenvalues_symmetric(from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}}));
  CHECK(d == std::vector<double>{1.0, 2.0, 3.0});
  const auto s = eigenvalues_symmetric(from_rows({{0, 1}, {1, 0}}));
  CHECK(s[0] == doctest::Approx(-1.0));
  CHECK(s[1] == doctest::Approx(1.0));
  CHECK(eigenvalues_symmetric(from_rows({{7.5}}))[0] == 7.5);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(eigenvalues_symmetric(from_rows({{0, 1}, {2, 0}})), ArgumentError);
  CHECK_THROWS_AS(eigenvalues_symmetric(from_rows({{0, 1}, {1, 0}}), 1e-18), ArgumentError);
  CHECK_THROWS_AS(eigenvalues_symmetric(from_rows({{NAN, 0}, {0, 1}})), ArgumentError);
}

TEST_CASE("agrees with an independent solver on random ensembles") {
  for (int n : {2, 3, 17, 64, 150}) {
    Rng rng(n);
    const auto m = sample_matrix(EnsembleSpec::goe(n), rng);
    const auto ev = eigenvalues_symmetric(m);
    const auto ref = eigen_reference(m);
    REQUIRE(ev.size() == ref.size());
    for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - ref[i]) < 1e-11 * 4.0);
    CHECK(std::is_sorted(ev.begin(), ev.end()));
  }
  Rng rng(77);
  const auto w = sample_matrix(EnsembleSpec::wishart(40, 25), rng);
  const auto ev = eigenvalues_symmetric(w);
  const auto ref = eigen_reference(w);
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - ref[i]) < 1e-11 * 10.0);
}

TEST_CASE("trace invariants") {
  const int n = 64;
  Rng rng(64);
  const auto m = sample_matrix(EnsembleSpec::goe(n), rng);
  const auto ev = eigenvalues_symmetric(m);
  double s1 = 0, s2 = 0;
  for (double l : ev) {
    s1 += l;
    s2 += l * l;
  }
  const double norm = m.frobenius_norm();
  CHECK(std::abs(s1 - m.trace()) <= 1e-10 * n * norm);
  CHECK(std::abs(s2 - m.trace_of_square()) <= 1e-9 * n * norm * norm);
}

TEST_CASE("degenerate and structured spectra") {
  SymmetricMatrix eye(20);
  for (int i = 0; i < 20; ++i) eye(i, i) = 2.0;
  for (double l : eigenvalues_symmetric(eye)) CHECK(l == doctest::Approx(2.0));
  // Path-graph Laplacian-like tridiagonal: eigenvalues 2 cos(pi k / (n + 1)).
  const int n = 30;
  SymmetricMatrix t(n);
  for (int i = 0; i + 1 < n; ++i) t(i, i + 1) = t(i + 1, i) = 1.0;
  const auto ev = eigenvalues_symmetric(t);
  for (int k = 1; k <= n; ++k)
    CHECK(ev[n - k] == doctest::Approx(2.0 * std::cos(std::numbers::pi * k / (n + 1))).epsilon(1e-12));
  const auto td = tridiagonal_eigenvalues(std::vector<double>(n, 0.0), std::vector<double>(n - 1, 1.0));
  for (int i = 0; i < n; ++i) CHECK(td[i] == doctest::Approx(ev[i]).epsilon(1e-12));
}

TEST_CASE("orthogonal invariance under Householder reflectors") {
  const int n = 40;
  Rng rng(123);
  const auto m = sample_matrix(EnsembleSpec::goe(n), rng);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = m(i, j);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  for (int r = 0; r < 3; ++r) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
    v.normalize();
    q = (Eigen::MatrixXd::Identity(n, n) - 2.0 * v * v.transpose()) * q;
  }
  const Eigen::MatrixXd b = q * a * q.transpose();
  SymmetricMatrix mb(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mb(i, j) = 0.5 * (b(i, j) + b(j, i));
  const auto e1 = eigenvalues_symmetric(m);
  const auto e2 = eigenvalues_symmetric(mb);
  for (int i = 0; i < n; ++i) CHECK(std::abs(e1[i] - e2[i]) < 1e-9);
}

TEST_CASE("householder reduction preserves the spectrum") {
  Rng rng(8);
  const auto m = sample_matrix(EnsembleSpec::goe(12), rng);
  std::vector<double> d, e;
  householder_tridiagonalize(m, d, e);
  CHECK(d.size() == 12);
  CHECK(e.size() == 11);
  const auto ev = tridiagonal_eigenvalues(d, e);
  const auto ref = eigen_reference(m);
  for (int i = 0; i < 12; ++i) CHECK(std::abs(ev[i] - ref[i]) < 1e-12);
}

TEST_CASE("linear statistics") {
  Rng rng(31);
  const auto m = sample_matrix(EnsembleSpec::goe(50), rng);
  const auto s = make_spectrum(m, 31, 0);
  CHECK(linear_statistic(s, builtin("const", {{"value", 1.0}})).real() == doctest::Approx(50.0));
  CHECK(std::abs(linear_statistic(s, builtin("monomial", {{"k", 1}})).real() - m.trace()) < 1e-10);
  const auto phi = builtin("poisson", {{"E", 0.3}, {"eta", 0.5}});
  const auto psi = builtin("gauss_bump");
  const auto combo = phi.scaled(2.5) + psi;
  const auto lhs = linear_statistic(s, combo);
  const auto rhs = 2.5 * linear_statistic(s, phi) + linear_statistic(s, psi);
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
}

TEST_CASE("linear statistic at a pole raises an evaluation error") {
  SpectrumSample s;
  s.eigenvalues = {-1.0, 0.0, 1.0};
  CHECK_THROWS_AS(linear_statistic(s, builtin("resolvent", {{"re", 0.0}, {"im", 0.0}})), std::exception);
  const auto pole = TestFunction("pole", FunctionClass::bounded_smooth,
                                 [](double l) { return std::complex<double>(1.0 / l, 0.0); },
                                 [](double l) { return std::complex<double>(-1.0 / (l * l), 0.0); });
  CHECK_THROWS_AS(linear_statistic(s, pole), EvaluationError);
}

TEST_CASE("GOE second moment of the spectrum") {
  const int n = 512, reps = 40;
  double sum = 0, sum2 = 0;
  const auto phi = builtin("monomial", {{"k", 2}});
  for (int r = 0; r < reps; ++r) {
    Rng rng(1000 + r);
    const double v = linear_statistic(make_spectrum(sample_matrix(EnsembleSpec::goe(n), rng)), phi).real() / n;
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum2 / reps - mean * mean) / (reps - 1));
  // E n^{-1} Tr M^2 = 1 + 1/n; the 1/n bias is far below 3 SE here.
  CHECK(std::abs(mean - 1.0) < 3.0 * se + 1.0 / n);
}

TEST_CASE("trace exponential") {
  SpectrumSample one;
  one.eigenvalues = {0.7};
  CHECK(std::abs(trace_exponential(one, 2.0) - std::polar(1.0, 1.4)) < 1e-15);
  Rng rng(2);
  const auto s = make_spectrum(sample_matrix(EnsembleSpec::goe(30), rng));
  CHECK(trace_exponential(s, 0.0).real() == doctest::Approx(30.0));
  for (double t : {0.1, 1.0, 10.0}) {
    CHECK(std::abs(trace_exponential(s, t)) <= 30.0 + 1e-12);
    CHECK(std::abs(trace_exponential(s, -t) - std::conj(trace_exponential(s, t))) < 1e-12);
  }
}

TEST_CASE("empirical Stieltjes transform") {
  SpectrumSample zero;
  zero.eigenvalues = {0.0};
  CHECK(std::abs(stieltjes_empirical(zero, {0.0, 1.0}) - std::complex<double>(0.0, 1.0)) < 1e-15);
  CHECK_THROWS_AS(stieltjes_empirical(zero, {1.0, 0.0}), ArgumentError);
  Rng rng(3);
  const auto s = make_spectrum(sample_matrix(EnsembleSpec::goe(40), rng));
  for (auto z : {std::complex<double>(0.0, 2.0), {1.0, -0.5}, {-3.0, 0.1}}) {
    const auto g = stieltjes_empirical(s, z);
    CHECK(std::abs(g) <= 1.0 / std::abs(z.imag()) + 1e-12);
    CHECK(g.imag() * z.imag() > 0.0);
  }
}

TEST_CASE("empirical measure") {
  SpectrumSample s;
  s.eigenvalues = {-1.0, 1.0};
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<double> halves{-inf, 0.0, inf};
  const auto mass = empirical_measure(s, halves);
  CHECK(mass == std::vector<double>{0.5, 0.5});
  const std::vector<double> all{-1.0, 1.0};
  CHECK(empirical_measure(s, all) == std::vector<double>{1.0});
  const std::vector<double> short_cover{-0.5, 2.0};
  CHECK_THROWS_AS(empirical_measure(s, short_cover), ArgumentError);
  const std::vector<double> overlapping{-2.0, 1.0, 0.0, 2.0};
  CHECK_THROWS_AS(empirical_measure(s, overlapping), ArgumentError);
}
