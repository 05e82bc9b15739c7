#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace rmt {

enum class FunctionClass { polynomial, bounded_smooth, poisson_kernel, trig };

std::string to_string(FunctionClass cls);

/// A test function phi with its derivative and, when it exists as an
/// integrable function, its Fourier transform
///   phi_hat(t) = (2 pi)^{-1} integral exp(-i t lambda) phi(lambda) d lambda,
/// so that phi(lambda) = integral exp(i t lambda) phi_hat(t) dt.
class TestFunction {
 public:
  using Scalar = std::complex<double>;
  using Fn = std::function<Scalar(double)>;

  TestFunction(std::string name, FunctionClass cls, Fn value, Fn derivative,
               std::optional<Fn> fourier = std::nullopt,
               std::optional<double> sup_derivative = std::nullopt, bool real_valued = true);

  const std::string& name() const { return name_; }
  FunctionClass function_class() const { return class_; }
  bool is_real() const { return real_valued_; }

  Scalar operator()(double lambda) const { return value_(lambda); }
  /// Real part of phi(lambda).
  double real(double lambda) const { return value_(lambda).real(); }
  Scalar derivative(double lambda) const { return derivative_(lambda); }
  bool has_fourier() const { return fourier_.has_value(); }
  /// phi_hat(t); throws ArgumentError when no integrable transform exists.
  Scalar fourier(double t) const;
  /// sup over the real line of |phi'|, if finite and known.
  std::optional<double> sup_derivative() const { return sup_derivative_; }

  /// Re phi and Im phi as separate real test functions.
  TestFunction real_part() const;
  TestFunction imag_part() const;

  TestFunction scaled(double alpha) const;
  /// phi(s lambda).
  TestFunction dilated(double s) const;

  friend TestFunction operator+(const TestFunction& a, const TestFunction& b);

 private:
  std::string name_;
  FunctionClass class_;
  Fn value_;
  Fn derivative_;
  std::optional<Fn> fourier_;
  std::optional<double> sup_derivative_;
  bool real_valued_;
};

using FunctionParams = std::map<std::string, double, std::less<>>;

/// Named test functions:
///   const(value), monomial(k), gauss_bump(center, width), poisson(E, eta),
///   cosine(t0), exponential(t0), chebyshev(k, scale), resolvent(re, im).
/// Missing parameters take documented defaults; unknown names or parameter
/// keys throw ArgumentError.
TestFunction builtin(std::string_view name, const FunctionParams& params = {});

/// integral (1 + |t|^k) |phi_hat(t)| dt for k in {2, 3, 4, 5}; nullopt when
/// phi has no integrable Fourier transform (polynomials, pure exponentials).
std::optional<double> fourier_norm(const TestFunction& phi, int k);

}  // namespace rmt
