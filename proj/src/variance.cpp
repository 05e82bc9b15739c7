#include "rmt/variance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rmt/errors.hpp"
#include "rmt/testfns.hpp"

namespace rmt {

namespace {

constexpr double kPi = std::numbers::pi;

void require_real(const TestFunction& phi) {
  if (!phi.is_real())
    throw ArgumentError("variance formulas need a real test function; got '" + phi.name() + "'");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError(std::string(what) + " must be positive");
}

void require_order(int order) {
  if (order < 16) throw ArgumentError("variance quadrature order must be >= 16");
}

void require_c(double c) {
  if (!(c >= 1.0) || !std::isfinite(c))
    throw ArgumentError("covariance variance formulas require c >= 1 (m/n -> c >= 1)");
}

// (1 / 2 pi^2) double integral of (dphi / dlambda)^2 (r^2 - (l1 - c)(l2 - c)) against the
// product Chebyshev weight, by the N x N tensor rule.
double tensor_variance(const TestFunction& phi, double center, double radius, int n) {
  std::vector<double> x(n), f(n), df(n);
  for (int k = 0; k < n; ++k) {
    x[k] = radius * std::cos(kPi * (k + 0.5) / n);
    f[k] = phi.real(center + x[k]);
    df[k] = phi.derivative(center + x[k]).real();
  }
  const double r2 = radius * radius;
  const double tiny = 1e-8 * radius;
  double off = 0.0, diag = 0.0;
  for (int j = 0; j < n; ++j) {
    diag += df[j] * df[j] * (r2 - x[j] * x[j]);
    double row = 0.0;
    for (int k = j + 1; k < n; ++k) {
      const double dx = x[j] - x[k];
      const double q = std::abs(dx) < tiny ? phi.derivative(center + 0.5 * (x[j] + x[k])).real()
                                           : (f[j] - f[k]) / dx;
      row += q * q * (r2 - x[j] * x[k]);
    }
    off += row;
  }
  const double h = kPi / n;
  return (diag + 2.0 * off) * h * h / (2.0 * kPi * kPi);
}

VarianceResult finish(FormulaTag tag, double gaussian, double est, double kappa4_part, int order) {
  VarianceResult r;
  r.formula = tag;
  r.quadrature_order = order;
  r.est_error = est;
  // The Gaussian part is a weighted square integral; roundoff can only push it below 0 slightly.
  r.gaussian_part = std::max(gaussian, 0.0);
  r.kappa4_part = kappa4_part;
  r.total = r.gaussian_part + kappa4_part;
  if (r.total < 0.0) {
    if (r.total >= -1e-10 * (1.0 + r.gaussian_part)) {
      r.total = 0.0;
      r.clamped = true;
    } else {
      throw NumericError("negative limiting variance " + std::to_string(r.total) + " for " +
                         to_string(tag) + " (kappa4 too negative for this test function?)");
    }
  }
  return r;
}

VarianceResult gaussian_result(FormulaTag tag, const TestFunction& phi, double center,
                               double radius, int order) {
  const double v = tensor_variance(phi, center, radius, order);
  const double v2 = tensor_variance(phi, center, radius, 2 * order);
  return finish(tag, v, std::abs(v - v2), 0.0, order);
}

}  // namespace

std::string to_string(FormulaTag tag) {
  switch (tag) {
    case FormulaTag::goe: return "GOE";
    case FormulaTag::wigner: return "Wigner";
    case FormulaTag::wishart: return "Wishart";
    case FormulaTag::sample_covariance: return "SampleCovariance";
  }
  return "?";
}

double chebyshev_weighted_integral(const std::function<double(double)>& g, double center,
                                   double radius, int order) {
  if (!(radius > 0.0)) throw ArgumentError("chebyshev_weighted_integral: radius must be > 0");
  if (order < 2) throw ArgumentError("chebyshev_weighted_integral: order must be >= 2");
  double acc = 0.0;
  for (int k = 0; k < order; ++k) acc += g(center + radius * std::cos(kPi * (k + 0.5) / order));
  return acc * kPi / order;
}

VarianceResult variance_goe(const TestFunction& phi, double w, int order) {
  require_real(phi);
  require_positive(w, "w");
  require_order(order);
  return gaussian_result(FormulaTag::goe, phi, 0.0, 2.0 * w, order);
}

double kappa4_constant_B(const TestFunction& phi, double w, int order) {
  require_real(phi);
  require_positive(w, "w");
  const double w2 = w * w;
  const double integral = chebyshev_weighted_integral(
      [&](double mu) { return phi.real(mu) * (2.0 * w2 - mu * mu); }, 0.0, 2.0 * w, order);
  return integral / (kPi * w2 * w2);
}

VarianceResult variance_wigner(const TestFunction& phi, double w, double kappa4, int order) {
  VarianceResult g = variance_goe(phi, w, order);
  const double b = kappa4_constant_B(phi, w, order);
  VarianceResult r = finish(FormulaTag::wigner, g.gaussian_part, g.est_error,
                            0.5 * kappa4 * b * b, order);
  return r;
}

VarianceResult variance_wishart(const TestFunction& phi, double a, double c, int order) {
  require_real(phi);
  require_positive(a, "a");
  require_c(c);
  require_order(order);
  const double a2 = a * a;
  return gaussian_result(FormulaTag::wishart, phi, a2 * (1.0 + c), 2.0 * a2 * std::sqrt(c), order);
}

namespace {

// I = integral phi(mu) (mu - a_m) / sqrt(4 a^4 c - (mu - a_m)^2) d mu.
double covariance_integral(const TestFunction& phi, double a, double c, int order) {
  const double a2 = a * a;
  const double am = a2 * (1.0 + c);
  return chebyshev_weighted_integral([&](double mu) { return phi.real(mu) * (mu - am); }, am,
                                     2.0 * a2 * std::sqrt(c), order);
}

}  // namespace

double kappa4_constant_C(const TestFunction& phi, double a, double c, int order) {
  require_real(phi);
  require_positive(a, "a");
  require_c(c);
  const double a4 = a * a * a * a;
  return covariance_integral(phi, a, c, order) / (2.0 * kPi * a4);
}

VarianceResult variance_sample_covariance(const TestFunction& phi, double a, double c,
                                          double kappa4, int order) {
  VarianceResult g = variance_wishart(phi, a, c, order);
  const double i = covariance_integral(phi, a, c, order);
  const double a8 = std::pow(a, 8);
  const double k4 = kappa4 / (4.0 * c * kPi * kPi * a8) * i * i;
  return finish(FormulaTag::sample_covariance, g.gaussian_part, g.est_error, k4, order);
}

}  // namespace rmt
