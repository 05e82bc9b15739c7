#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmt/ensembles.hpp"
#include "rmt/spectra.hpp"
#include "rmt/testfns.hpp"
#include "rmt/variance.hpp"

namespace rmt {

/// A builtin test function by name and parameters.
struct TestFunctionSpec {
  std::string name = "monomial";
  FunctionParams params;

  TestFunction make() const { return builtin(name, params); }
};

struct ExperimentConfig {
  EnsembleSpec ensemble;
  TestFunctionSpec test_function;
  int replicas = 2;
  /// Matrix sizes to run; empty means {ensemble.n}.
  std::vector<int> n_grid;
  std::uint64_t base_seed = 0;
  int workers = 1;
  /// Quadrature order for the theory variance.
  int order = 128;

  void validate() const;
  std::vector<int> sizes() const;
};

/// Statistic values for one matrix size, indexed by replica.
struct SizeResult {
  int n = 0;
  EnsembleSpec ensemble;
  /// Re N_n[phi] per replica.
  std::vector<double> values;
  /// Im N_n[phi] per replica; empty for real-valued phi.
  std::vector<double> imag_values;
};

struct ExperimentResult {
  std::vector<SizeResult> sizes;
};

/// Runs body(i) for i in [0, count) on `workers` threads. Each index is
/// processed exactly once; the exception of the lowest failing index is
/// rethrown after all threads join.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

/// Number of hardware threads, at least 1.
int hardware_workers();

/// Spectra of `replicas` independent matrices; replica r uses the seed
/// mix_seed(base_seed, n, r), so results do not depend on `workers`.
std::vector<SpectrumSample> sample_spectra(const EnsembleSpec& spec, int replicas,
                                           std::uint64_t base_seed, int workers = 1);

/// N_n[phi] for every (n, replica). Eigensolver failures are rethrown as
/// NumericError tagged with n and the replica index.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Limiting variance matching the ensemble family, with c = m / n for covariance families.
VarianceResult theory_variance(const EnsembleSpec& spec, const TestFunction& phi, int order = 128);

struct BoundCheck {
  bool applicable = false;
  double bound = 0.0;
  /// bound (1 + 3 relative SE) - sample variance; >= 0 iff the check holds.
  double margin = 0.0;
  bool holds = false;
  std::string note;
};

struct CltReport {
  int n = 0;
  /// "" for a real test function, "re" or "im" for the parts of a complex one.
  std::string part;
  /// The test function lacks an integrable Fourier transform, so the CLT
  /// theorems do not literally cover it (monomials, trig functions).
  bool outside_hypotheses = false;
  int replicas = 0;
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  /// sample_variance sqrt(2 / (R - 1)); Gaussian-limit approximation.
  double variance_se = 0.0;
  VarianceResult theory;
  /// Theory variance is zero up to quadrature round-off, 1e-10 (1 + gaussian part):
  /// distributional tests are skipped.
  bool degenerate = false;
  /// Distributional fields are filled (R >= 30 and not degenerate).
  bool distributional = false;
  double ks_statistic = 0.0;
  double ks_pvalue = 0.0;
  double excess_kurtosis = 0.0;
  /// sup over x in [-3, 3] of |Zhat(x) - exp(-x^2 V / 2)|.
  double ecf_deviation = 0.0;
  std::optional<BoundCheck> bound_check;
};

CltReport clt_report(std::span<const double> samples, const VarianceResult& theory, int n = 0);

/// Kolmogorov-Smirnov distance of the samples to N(mean, variance).
double ks_statistic(std::span<const double> samples, double mean, double variance);
/// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
double ks_pvalue(double statistic, std::size_t count);

/// CLT reports for every size of an experiment, one per real part of phi,
/// with the theory variance and the a-priori bound check filled in.
std::vector<CltReport> clt_reports(const ExperimentConfig& config, const ExperimentResult& result);

struct LindebergRecord {
  double L2 = 0.0;
  double L4 = 0.0;
};

/// Lindeberg functionals n^{-2} sum over entries of E[X^p; |X| > tau sqrt(n)], p = 2, 4,
/// for identically distributed entries: n x n for Wigner (m empty), m x n for covariance.
LindebergRecord lindeberg_diagnostics(const EntryDistribution& dist, int n,
                                      std::optional<int> m, double tau);

/// Poincare-type bound on Var N_n[phi]:
///   GOE 2 w^2 sup|phi'|^2, Wishart 4 a^4 (m/n) sup|phi'|^2,
///   Wigner / sample covariance C (integral (1 + |t|^3) |phi_hat|)^2 with a caller-supplied C.
BoundCheck apriori_bound_check(const CltReport& report, const TestFunction& phi,
                               const EnsembleSpec& spec,
                               std::optional<double> fourier_constant = std::nullopt);

/// Y_n(x, t) = E{u_n(t) e_n°(x)} estimated over replicas: u_n(t) = Tr exp(i t M),
/// e_n(x) = exp(i x N_n°[phi]) with centering by sample means.
std::complex<double> empirical_Y(std::span<const SpectrumSample> spectra, const TestFunction& phi,
                                 double x, double t);

}  // namespace rmt
