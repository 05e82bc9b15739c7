#include "rmt/laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

int auto_nodes(double radius, double frequency) {
  return 64 + 2 * static_cast<int>(std::ceil(radius * std::abs(frequency)));
}

// (pi / N) sum_k fn(lambda_k, sin^2 theta_k) over midpoint nodes theta_k = pi (k - 1/2) / N.
template <class F>
cplx theta_sum(double center, double radius, int n, F&& fn) {
  cplx acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double theta = kPi * (k + 0.5) / n;
    const double s = std::sin(theta);
    acc += fn(center + radius * std::cos(theta), s * s);
  }
  return acc * (kPi / n);
}

void check_scale(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw ArgumentError(std::string(what) + " must be positive and finite");
}

}  // namespace

LimitLaw LimitLaw::semicircle(double w2) {
  check_scale(w2, "w2");
  LimitLaw law;
  law.kind = Kind::semicircle;
  law.w2 = w2;
  return law;
}

LimitLaw LimitLaw::marchenko_pastur(double a2, double c) {
  check_scale(a2, "a2");
  check_scale(c, "aspect ratio c");
  LimitLaw law;
  law.kind = Kind::marchenko_pastur;
  law.a2 = a2;
  law.c = c;
  return law;
}

double LimitLaw::center() const {
  return kind == Kind::semicircle ? 0.0 : a2 * (1.0 + c);
}

double LimitLaw::radius() const {
  return kind == Kind::semicircle ? 2.0 * std::sqrt(w2) : 2.0 * a2 * std::sqrt(c);
}

double LimitLaw::atom_mass() const {
  return kind == Kind::semicircle ? 0.0 : std::max(0.0, 1.0 - c);
}

std::string LimitLaw::describe() const {
  std::ostringstream os;
  if (kind == Kind::semicircle)
    os << "semicircle(w2=" << w2 << ")";
  else
    os << "marchenko_pastur(a2=" << a2 << ", c=" << c << ")";
  return os.str();
}

double density(const LimitLaw& law, double lambda) {
  const double d = lambda - law.center();
  const double r = law.radius();
  if (std::abs(d) >= r) return 0.0;
  const double root = std::sqrt((r - d) * (r + d));
  if (law.kind == LimitLaw::Kind::semicircle) return root / (2.0 * kPi * law.w2);
  return root / (2.0 * kPi * law.a2 * lambda);
}

cplx law_expectation(const LimitLaw& law, const std::function<cplx(double)>& g, int nodes,
                     double frequency) {
  const double r = law.radius();
  const int n = nodes > 0 ? nodes : auto_nodes(r, frequency);
  // rho(lambda) d lambda = r^2 sin^2(theta) / (2 pi w2) d theta, or / (2 pi a2 lambda) for MP.
  if (law.kind == LimitLaw::Kind::semicircle) {
    const double scale = r * r / (2.0 * kPi * law.w2);
    return theta_sum(0.0, r, n, [&](double l, double s2) { return g(l) * (scale * s2); });
  }
  const double scale = r * r / (2.0 * kPi * law.a2);
  return theta_sum(law.center(), r, n, [&](double l, double s2) { return g(l) * (scale * s2 / l); });
}

cplx stieltjes_limit(const LimitLaw& law, cplx z) {
  if (z.imag() == 0.0) throw ArgumentError("stieltjes_limit needs Im z != 0");
  const double lo = law.lower_edge();
  const double hi = law.upper_edge();
  // The product of principal roots behaves like z at infinity off the cut.
  const cplx root = std::sqrt(z - hi) * std::sqrt(z - lo);
  if (law.kind == LimitLaw::Kind::semicircle) return (root - z) / (2.0 * law.w2);
  return (root - (z + law.a2 * (1.0 - law.c))) / (2.0 * law.a2 * z);
}

cplx self_consistency_residual(const LimitLaw& law, cplx z, cplx f) {
  if (law.kind == LimitLaw::Kind::semicircle) return f + 1.0 / z + law.w2 * f * f / z;
  return z * law.a2 * f * f + (z + law.a2 * (1.0 - law.c)) * f + 1.0;
}

cplx v_kernel(const LimitLaw& law, double t) {
  if (law.kind == LimitLaw::Kind::marchenko_pastur && law.c < 1.0)
    throw ArgumentError("v_kernel for Marchenko-Pastur requires c >= 1");
  return law_expectation(law, [t](double l) { return cplx(std::cos(t * l), std::sin(t * l)); }, 0,
                         t);
}

cplx vconv_kernel(double t, double w) {
  check_scale(w, "w");
  const double r = 2.0 * w;
  const double w4 = w * w * w * w;
  const cplx sum = theta_sum(0.0, r, auto_nodes(r, t), [&](double mu, double s2) {
    return cplx(std::cos(t * mu), std::sin(t * mu)) * (mu * r * r * s2);
  });
  return cplx(0.0, -1.0 / (2.0 * kPi * w4)) * sum;
}

cplx vconv_kernel_by_parts(double t, double w) {
  check_scale(w, "w");
  if (t == 0.0) throw ArgumentError("integrated-by-parts form needs t != 0");
  const double r = 2.0 * w;
  const double w4 = w * w * w * w;
  const cplx sum = theta_sum(0.0, r, auto_nodes(r, t), [&](double mu, double) {
    return cplx(std::cos(t * mu), std::sin(t * mu)) * (2.0 * w * w - mu * mu);
  });
  return sum / (kPi * t * w4);
}

double resolvent_kernel_T1(double t, double w) {
  check_scale(w, "w");
  const double r = 2.0 * w;
  const cplx sum = theta_sum(0.0, r, auto_nodes(r, t), [&](double l, double) {
    return cplx(std::cos(t * l), std::sin(t * l));
  });
  return -sum.real() / kPi;
}

cplx a_kappa4_kernel(double t, double a, double c) {
  check_scale(a, "a");
  check_scale(c, "aspect ratio c");
  if (c < 1.0) throw ArgumentError("a_kappa4_kernel requires c >= 1");
  const double a2 = a * a;
  const double r = 2.0 * a2 * std::sqrt(c);
  const cplx sum = theta_sum(a2 * (1.0 + c), r, auto_nodes(r, t), [&](double mu, double s2) {
    return cplx(std::cos(t * mu), std::sin(t * mu)) * (r * r * s2);
  });
  return sum / (2.0 * kPi * a2 * a2);
}

}  // namespace rmt
