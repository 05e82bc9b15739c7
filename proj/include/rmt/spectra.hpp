#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmt/ensembles.hpp"

namespace rmt {

class TestFunction;

/// Full spectrum of a real symmetric matrix, ascending.
///
/// Householder reduction to tridiagonal form followed by implicitly shifted
/// QL. Eigenvalues come out with absolute error of order eps * ||A||;
/// `tol` states the accuracy the caller relies on and must be >= 64 eps.
/// Throws ArgumentError if A is not symmetric to 1e-12 relative and
/// NumericError if the QL iteration does not converge.
std::vector<double> eigenvalues_symmetric(const SymmetricMatrix& a, double tol = 1e-11);

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// sub-diagonal `offdiag` (length n - 1). Both inputs are consumed.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                            std::vector<double> offdiag);

/// Reduces a symmetric matrix to tridiagonal form (diagonal, sub-diagonal).
void householder_tridiagonalize(SymmetricMatrix a, std::vector<double>& diag,
                                std::vector<double>& offdiag);

struct SpectrumSample {
  std::vector<double> eigenvalues;  // ascending
  std::optional<EnsembleSpec> ensemble;
  std::uint64_t seed = 0;
  std::int64_t replica = -1;

  int n() const { return static_cast<int>(eigenvalues.size()); }
};

SpectrumSample make_spectrum(const SymmetricMatrix& m, std::uint64_t seed = 0,
                             std::int64_t replica = -1);

/// N_n[phi] = sum_l phi(lambda_l), compensated summation in ascending order.
/// Throws EvaluationError where phi is not finite at an eigenvalue.
std::complex<double> linear_statistic(const SpectrumSample& sample, const TestFunction& phi);

/// u_n(t) = sum_l exp(i t lambda_l).
std::complex<double> trace_exponential(const SpectrumSample& sample, double t);

/// g_n(z) = n^{-1} sum_l (lambda_l - z)^{-1}; Im z must be nonzero.
std::complex<double> stieltjes_empirical(const SpectrumSample& sample, std::complex<double> z);

/// Bin masses for bins (e_0, e_1], (e_1, e_2], ...; the first bin also
/// contains e_0. Edges must be strictly increasing and cover the spectrum;
/// infinite outer edges are allowed.
std::vector<double> empirical_measure(const SpectrumSample& sample, std::span<const double> edges);

void write_eigenvalues_csv(std::span<const SpectrumSample> samples, const std::string& path);

/// Neumaier compensated accumulator.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if constexpr (std::is_same_v<T, double>) {
      comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    } else {
      comp_ += std::abs(sum_.real()) >= std::abs(x.real())
                   ? T((sum_.real() - t.real()) + x.real(), 0.0)
                   : T((x.real() - t.real()) + sum_.real(), 0.0);
      comp_ += std::abs(sum_.imag()) >= std::abs(x.imag())
                   ? T(0.0, (sum_.imag() - t.imag()) + x.imag())
                   : T(0.0, (x.imag() - t.imag()) + sum_.imag());
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

}  // namespace rmt
