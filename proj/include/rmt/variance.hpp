#pragma once

#include <functional>
#include <string>

namespace rmt {

class TestFunction;

enum class FormulaTag { goe, wigner, wishart, sample_covariance };

std::string to_string(FormulaTag tag);

/// Limiting variance of the centered linear statistic, split into the
/// Gaussian-ensemble part and the fourth-cumulant correction.
struct VarianceResult {
  double total = 0.0;
  double gaussian_part = 0.0;
  double kappa4_part = 0.0;
  FormulaTag formula = FormulaTag::goe;
  int quadrature_order = 0;
  /// |V(N) - V(2N)| for the Gaussian part.
  double est_error = 0.0;
  /// Set when a tiny negative total (roundoff) was reported as 0.
  bool clamped = false;
};

/// (pi / N) sum_k g(center + radius cos theta_k), theta_k = pi (k - 1/2) / N:
/// Gauss-Chebyshev rule for integral g(lambda) / sqrt(radius^2 - (lambda - center)^2).
double chebyshev_weighted_integral(const std::function<double(double)>& g, double center,
                                   double radius, int order);

VarianceResult variance_goe(const TestFunction& phi, double w, int order = 128);

/// B = (1 / pi w^4) integral phi(mu) (2 w^2 - mu^2) / sqrt(4 w^2 - mu^2) d mu.
double kappa4_constant_B(const TestFunction& phi, double w, int order = 128);

/// GOE part plus kappa4 B^2 / 2.
VarianceResult variance_wigner(const TestFunction& phi, double w, double kappa4, int order = 128);

/// Requires c >= 1.
VarianceResult variance_wishart(const TestFunction& phi, double a, double c, int order = 128);

/// C[phi] = (1 / 2 pi a^4) integral phi(mu) (mu - a_m) / sqrt(4 a^4 c - (mu - a_m)^2) d mu.
double kappa4_constant_C(const TestFunction& phi, double a, double c, int order = 128);

/// Wishart part plus (kappa4 / 4 c pi^2 a^8) I^2, I = 2 pi a^4 C[phi].
VarianceResult variance_sample_covariance(const TestFunction& phi, double a, double c,
                                          double kappa4, int order = 128);

}  // namespace rmt
