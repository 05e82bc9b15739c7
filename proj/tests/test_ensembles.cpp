#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "rmt/ensembles.hpp"
#include "rmt/errors.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/spectra.hpp"

using namespace rmt;

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(EnsembleSpec::goe(1), ArgumentError);
  EnsembleSpec s = EnsembleSpec::wishart(10, 20);
  s.m = 0;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  CHECK(EnsembleSpec::wishart(10, 20).aspect_ratio() == doctest::Approx(2.0));
  CHECK(family_from_string("SampleCovariance") == Family::sample_covariance);
  CHECK_THROWS_AS(family_from_string("GUE"), ArgumentError);
}

TEST_CASE("wigner diagonal defaults to the off-diagonal law at variance 2 w2") {
  const auto s = EnsembleSpec::wigner(8, EntryDistribution::uniform(std::sqrt(3.0)));
  CHECK(s.w2 == doctest::Approx(1.0));
  CHECK(s.diag_law().variance() == doctest::Approx(2.0));
  CHECK(s.diag_law().kind() == EntryKind::uniform);
  CHECK(s.kappa4() == doctest::Approx(-1.2));
  CHECK(EnsembleSpec::goe(8).kappa4() == 0.0);
}

TEST_CASE("sampled matrices are exactly symmetric and deterministic") {
  const auto spec = EnsembleSpec::goe(30);
  Rng a(3), b(3);
  const auto ma = sample_matrix(spec, a);
  const auto mb = sample_matrix(spec, b);
  CHECK(ma.max_asymmetry() == 0.0);
  for (std::size_t i = 0; i < ma.data().size(); ++i) CHECK(ma.data()[i] == mb.data()[i]);
}

TEST_CASE("GOE second moment: E n^{-1} Tr M^2 = (1 + 1/n) w2") {
  const int n = 200, reps = 40;
  const auto spec = EnsembleSpec::goe(n, 1.5);
  double sum = 0, sum2 = 0;
  for (int r = 0; r < reps; ++r) {
    Rng rng(mix_seed(17, n, r));
    const double v = sample_matrix(spec, rng).trace_of_square() / n;
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum2 / reps - mean * mean) / (reps - 1));
  CHECK(std::abs(mean - (1.0 + 1.0 / n) * 1.5) < 4.0 * se + 1e-12);
}

TEST_CASE("GOE entry variances w2/n off the diagonal and 2 w2/n on it") {
  const int n = 6, reps = 20000;
  const auto spec = EnsembleSpec::goe(n);
  double off = 0, diag = 0;
  for (int r = 0; r < reps; ++r) {
    Rng rng(mix_seed(5, n, r));
    const auto m = sample_matrix(spec, rng);
    off += m(0, 1) * m(0, 1);
    diag += m(2, 2) * m(2, 2);
  }
  CHECK(off / reps == doctest::Approx(1.0 / n).epsilon(0.04));
  CHECK(diag / reps == doctest::Approx(2.0 / n).epsilon(0.04));
}

TEST_CASE("covariance matrices are positive semidefinite") {
  const auto spec = EnsembleSpec::sample_covariance(40, 30, EntryDistribution::rademacher());
  Rng rng(9);
  const auto m = sample_matrix(spec, rng);
  const auto ev = eigenvalues_symmetric(m);
  CHECK(ev.front() >= -1e-10 * m.frobenius_norm());
  // m < n: at least n - m zero eigenvalues.
  CHECK(std::abs(ev[9]) < 1e-10 * m.frobenius_norm());
}

TEST_CASE("Gram assembly matches n^{-1} X^T X") {
  const auto spec = EnsembleSpec::wishart(5, 7);
  Rng rng(4);
  const auto raw = sample_raw_entries(spec, rng);
  CHECK(raw.rows == 7);
  CHECK(raw.cols == 5);
  const auto m = assemble_matrix(spec, raw);
  for (int j = 0; j < 5; ++j)
    for (int k = 0; k < 5; ++k) {
      double s = 0;
      for (int a = 0; a < 7; ++a) s += raw.values[a * 5 + j] * raw.values[a * 5 + k];
      CHECK(m(j, k) == doctest::Approx(s / 5.0).epsilon(1e-14));
    }
}

TEST_CASE("rademacher Wigner: Tr M^2 fixed by the diagonal") {
  const int n = 50;
  const auto spec = EnsembleSpec::wigner(n, EntryDistribution::rademacher(),
                                         EntryDistribution::gaussian(2.0));
  Rng rng(21);
  const auto raw = sample_raw_entries(spec, rng);
  double diag2 = 0;
  for (int j = 0; j < n; ++j) diag2 += raw.values[j * n + j] * raw.values[j * n + j];
  const auto m = assemble_matrix(spec, raw);
  CHECK(m.trace_of_square() == doctest::Approx((diag2 + n * (n - 1.0)) / n).epsilon(1e-13));
}

TEST_CASE("truncation caps entries") {
  std::vector<double> v{5.0, -5.0, 1.0, -0.5};
  truncate_entries(v, 4, 1.0);  // cap tau sqrt(n) = 2
  CHECK(v == std::vector<double>{2.0, -2.0, 1.0, -0.5});
  auto again = v;
  truncate_entries(again, 4, 1.0);
  CHECK(again == v);  // idempotent
  std::vector<double> small{0.1, -0.3};
  truncate_entries(small, 100, 1.0);
  CHECK(small == std::vector<double>{0.1, -0.3});
  CHECK_THROWS_AS(truncate_entries(v, 4, 0.0), ArgumentError);
}

TEST_CASE("gaussian truncation changes entries rarely, consistent with the Lindeberg bound") {
  const int n = 100;
  const double tau = 1.0;  // cap at 10 for n = 100
  const auto spec = EnsembleSpec::goe(n);
  Rng rng(1);
  const auto raw = sample_raw_entries(spec, rng);
  const auto cut = truncate_matrix(raw, n, tau);
  int changed = 0;
  for (std::size_t i = 0; i < raw.values.size(); ++i) changed += raw.values[i] != cut.values[i];
  // P{W != W^tau} <= tau^{-4} L4; for N(0,1) entries at 10 sd this is ~1e-17 per matrix.
  const auto l = lindeberg_diagnostics(EntryDistribution::gaussian(1.0), n, std::nullopt, tau);
  CHECK(std::pow(tau, -4) * l.L4 < 1e-10);
  CHECK(changed == 0);
}

TEST_CASE("resized keeps the aspect ratio") {
  const auto s = EnsembleSpec::wishart(100, 200).resized(64);
  CHECK(s.n == 64);
  CHECK(s.m == 128);
}

TEST_CASE("matrix CSV dump") {
  SymmetricMatrix m(2);
  m(0, 0) = 1;
  m(0, 1) = m(1, 0) = 2;
  m(1, 1) = 3;
  const auto path = std::filesystem::temp_directory_path() / "rmt_matrix_dump.csv";
  write_matrix_csv(m, path.string());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "1,2");
  std::filesystem::remove(path);
}
