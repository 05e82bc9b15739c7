#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "rmt/laws.hpp"

namespace rmt {

class TestFunction;

/// Samples of a function of t >= 0 on the uniform grid t_k = k h, k = 0..K.
class GridFunction {
 public:
  using Scalar = std::complex<double>;

  GridFunction(double step, std::vector<Scalar> values, bool real_valued = false);

  /// Samples f on [0, horizon]; horizon / step must be an integer to 1e-12.
  static GridFunction sample(const std::function<Scalar(double)>& f, double step, double horizon,
                             bool real_valued = false);

  double step() const { return step_; }
  std::size_t size() const { return values_.size(); }
  double horizon() const { return step_ * static_cast<double>(values_.size() - 1); }
  double time(std::size_t k) const { return step_ * static_cast<double>(k); }
  bool is_real() const { return real_; }
  const Scalar& operator[](std::size_t k) const { return values_[k]; }
  const std::vector<Scalar>& values() const { return values_; }

 private:
  double step_;
  std::vector<Scalar> values_;
  bool real_;
};

/// i^{-1} integral_0^T exp(-i z t) f(t) dt by the trapezoid rule, Im z < 0.
/// Throws ArgumentError when exp(Im z T) sup|f| >= 1e-8 (horizon too short).
std::complex<double> generalized_fourier(const GridFunction& f, std::complex<double> z);

/// Solves P(t) + integral_0^t dt1 integral_0^t1 Q1(t1 - t2) P(t2) dt2 = R(t).
/// The inner integral is folded into Q(t) = integral_0^t Q1 and both
/// integrals use the trapezoid rule, marching explicitly in t: O(h^2).
GridFunction solve_volterra(const GridFunction& q1, const GridFunction& r);

/// A(t) = -(1/pi) integral_0^t dt1 integral exp(i t1 lambda) phi'(lambda) sqrt(r^2 - (lambda - c)^2) d lambda
/// for the semicircle (c = 0, r = 2w) or MP (c = a_m, r = 2 a^2 sqrt(c)) support.
/// The t1-integral is done exactly, the lambda-integral by the Chebyshev rule.
std::complex<double> A_function(double t, const TestFunction& phi, const LimitLaw& law,
                                int order = 128);
GridFunction A_grid(const TestFunction& phi, const LimitLaw& law, double step, double horizon,
                    int order = 128);

/// Y(x, t) = (i x Z / pi^2) double integral (e^{it lambda} - e^{it mu}) / (lambda - mu)
///           phi'(lambda) sqrt(4w^2 - lambda^2) / sqrt(4w^2 - mu^2) d lambda d mu.
std::complex<double> closed_form_Y(double x, double t, const TestFunction& phi, double w,
                                   double z_value, int order = 128);
GridFunction closed_form_Y_grid(double x, const TestFunction& phi, double w, double z_value,
                                double step, double horizon, int order = 128);

/// Volterra data for the GOE/Wigner Y-equation at fixed x:
/// kernel Q1 = 2 w^2 v and forcing R = x Z (A(t) + i kappa4 B I(t)), I(t) = (1 - v(t)) / w^2.
struct VolterraProblem {
  GridFunction kernel;
  GridFunction forcing;
};
VolterraProblem wigner_volterra_problem(const TestFunction& phi, double w, double x,
                                        double z_value, double kappa4, double step,
                                        double horizon, int order = 128);

/// Z(x) = exp(-x^2 V / 2).
double limiting_Z(double x, double variance);
/// |Z(x) - 1 + V integral_0^x y Z(y) dy| by Gauss-Kronrod quadrature.
double limiting_Z_residual(double x, double variance);

/// i integral phi_hat(t) Y(x, t) dt over [-T, T], with Y(x, -t) = -conj Y(x, t)
/// (Y real-linear in x Z). Approximates Z'(x).
double z_derivative_from_Y(const GridFunction& y, const TestFunction& phi);

}  // namespace rmt
