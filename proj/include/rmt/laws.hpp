#pragma once

#include <complex>
#include <functional>
#include <string>

namespace rmt {

/// Limiting spectral law: semicircle (w2) or Marchenko-Pastur (a2, c).
///
/// MP is the law of n^{-1} X^T X with X of size m x n, m/n -> c. For c < 1
/// it carries an atom of mass 1 - c at zero.
struct LimitLaw {
  enum class Kind { semicircle, marchenko_pastur };

  Kind kind = Kind::semicircle;
  double w2 = 1.0;
  double a2 = 1.0;
  double c = 1.0;

  static LimitLaw semicircle(double w2);
  static LimitLaw marchenko_pastur(double a2, double c);

  /// Midpoint of the continuous support: 0 or a_m = a2 (1 + c).
  double center() const;
  /// Half-width of the support: 2 w or 2 a2 sqrt(c).
  double radius() const;
  double lower_edge() const { return center() - radius(); }
  double upper_edge() const { return center() + radius(); }
  double atom_mass() const;
  std::string describe() const;
};

/// Density of the continuous part; zero outside the support.
double density(const LimitLaw& law, double lambda);

/// integral g(lambda) over the continuous part of the law, with the edge
/// substitution lambda = center + radius cos(theta) and the midpoint rule in
/// theta. `nodes` = 0 picks a count from the oscillation of g implied by
/// `frequency` (|t| for g = exp(i t lambda)).
std::complex<double> law_expectation(const LimitLaw& law,
                                     const std::function<std::complex<double>(double)>& g,
                                     int nodes = 0, double frequency = 0.0);

/// Closed-form Stieltjes transform integral dLaw(lambda) / (lambda - z).
std::complex<double> stieltjes_limit(const LimitLaw& law, std::complex<double> z);

/// Residual of the quadratic self-consistent equation at (z, f):
///   semicircle: f + 1/z + w2 f^2 / z,
///   MP:         z a2 f^2 + (z + a2 (1 - c)) f + 1.
std::complex<double> self_consistency_residual(const LimitLaw& law, std::complex<double> z,
                                               std::complex<double> f);

/// v(t) = integral exp(i t lambda) dLaw(lambda); MP requires c >= 1.
std::complex<double> v_kernel(const LimitLaw& law, double t);

/// (v * v)(t) = -(i / 2 pi w^4) integral exp(i t mu) mu sqrt(4 w^2 - mu^2) d mu.
std::complex<double> vconv_kernel(double t, double w);

/// Integrated-by-parts form of (v * v)(t) for t != 0:
///   (pi t w^4)^{-1} integral exp(i t mu) (2 w^2 - mu^2) / sqrt(4 w^2 - mu^2) d mu.
std::complex<double> vconv_kernel_by_parts(double t, double w);

/// T1(t) = -(1/pi) integral exp(i lambda t) / sqrt(4 w^2 - lambda^2) d lambda = -J0(2 w t).
double resolvent_kernel_T1(double t, double w);

/// A_kappa4(t) = (1 / 2 pi a^4) integral exp(i mu t) sqrt(4 a^4 c - (mu - a_m)^2) d mu, c >= 1.
std::complex<double> a_kappa4_kernel(double t, double a, double c);

/// Bessel function of the first kind, order 0 or 1.
double bessel_j(int order, double x);

}  // namespace rmt
