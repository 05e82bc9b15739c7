#include "rmt/charflow.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "rmt/errors.hpp"
#include "rmt/testfns.hpp"
#include "rmt/variance.hpp"

namespace rmt {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

std::size_t grid_steps(double step, double horizon) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("grid step must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ArgumentError("grid horizon must be positive");
  const double ratio = horizon / step;
  const double k = std::round(ratio);
  if (k < 1.0 || std::abs(k * step - horizon) > 1e-12 * std::max(1.0, horizon))
    throw ArgumentError("grid horizon must be an integer multiple of the step");
  return static_cast<std::size_t>(k);
}

// Nodes lambda_k = c + r cos theta_k and weights phi'(lambda_k) r^2 sin^2 theta_k for
// integral F(lambda) phi'(lambda) sqrt(r^2 - (lambda - c)^2) d lambda = sum F(lambda_k) g_k (pi / N).
struct WeightedNodes {
  std::vector<double> lambda;
  std::vector<double> g;
};

WeightedNodes derivative_nodes(const TestFunction& phi, double center, double radius, int n) {
  WeightedNodes out;
  out.lambda.resize(n);
  out.g.resize(n);
  for (int k = 0; k < n; ++k) {
    const double theta = kPi * (k + 0.5) / n;
    const double s = std::sin(theta);
    out.lambda[k] = center + radius * std::cos(theta);
    out.g[k] = phi.derivative(out.lambda[k]).real() * radius * radius * s * s;
  }
  return out;
}

// Enough nodes to resolve exp(i t lambda) over the support.
int resolved_order(int order, double radius, double t) {
  if (order < 2) throw ArgumentError("quadrature order must be >= 2");
  return std::max(order, 32 + 2 * static_cast<int>(std::ceil(radius * std::abs(t))));
}

void require_real_derivative(const TestFunction& phi) {
  if (!phi.is_real()) throw ArgumentError("characteristic-function routines need a real test function");
}

cplx a_from_nodes(const WeightedNodes& nodes, double t) {
  // (e^{it lambda} - 1) / (i lambda) = t e^{it lambda / 2} sinc(t lambda / 2), stable at lambda = 0.
  cplx acc = 0.0;
  for (std::size_t k = 0; k < nodes.lambda.size(); ++k) {
    const double half = 0.5 * t * nodes.lambda[k];
    acc += nodes.g[k] * t * sinc(half) * cplx(std::cos(half), std::sin(half));
  }
  const double h = kPi / static_cast<double>(nodes.lambda.size());
  return -acc * h / kPi;
}

// Precomputed tensor rule for closed_form_Y: Y(t) = pref sum_k E_k(t) (u_k + i t g_k),
// using (E_k - E_j) / (lambda_k - lambda_j) summed over j != k, and the limit i t E_k on k = j.
struct YRule {
  WeightedNodes nodes;
  std::vector<double> u;
};

YRule make_y_rule(const TestFunction& phi, double w, int n) {
  YRule rule{derivative_nodes(phi, 0.0, 2.0 * w, n), std::vector<double>(n, 0.0)};
  const auto& lam = rule.nodes.lambda;
  const auto& g = rule.nodes.g;
  const double tiny = 1e-8 * 2.0 * w;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      const double d = lam[k] - lam[j];
      if (std::abs(d) < tiny) throw NumericError("closed_form_Y: coincident quadrature nodes");
      const double inv = 1.0 / d;
      rule.u[k] += g[k] * inv;  // E_k g_k / (lambda_k - lambda_j)
      rule.u[j] -= g[k] * inv;  // -E_j g_k / (lambda_k - lambda_j)
    }
  }
  return rule;
}

cplx y_from_rule(const YRule& rule, double x, double z_value, double t) {
  const auto& lam = rule.nodes.lambda;
  const auto& g = rule.nodes.g;
  cplx acc = 0.0;
  for (std::size_t k = 0; k < lam.size(); ++k) {
    const cplx e(std::cos(t * lam[k]), std::sin(t * lam[k]));
    acc += e * cplx(rule.u[k], t * g[k]);
  }
  const double h = kPi / static_cast<double>(lam.size());
  return kI * (x * z_value / (kPi * kPi)) * h * h * acc;
}

}  // namespace

GridFunction::GridFunction(double step, std::vector<Scalar> values, bool real_valued)
    : step_(step), values_(std::move(values)), real_(real_valued) {
  if (!(step_ > 0.0) || !std::isfinite(step_)) throw ArgumentError("grid step must be positive");
  if (values_.size() < 2) throw ArgumentError("grid function needs at least two samples");
}

GridFunction GridFunction::sample(const std::function<Scalar(double)>& f, double step,
                                  double horizon, bool real_valued) {
  const std::size_t k = grid_steps(step, horizon);
  std::vector<Scalar> values(k + 1);
  for (std::size_t i = 0; i <= k; ++i) values[i] = f(step * static_cast<double>(i));
  return GridFunction(step, std::move(values), real_valued);
}

cplx generalized_fourier(const GridFunction& f, cplx z) {
  if (!(z.imag() < 0.0)) throw ArgumentError("generalized_fourier needs Im z < 0");
  double sup = 0.0;
  for (const auto& v : f.values()) sup = std::max(sup, std::abs(v));
  if (std::exp(z.imag() * f.horizon()) * sup >= 1e-8)
    throw ArgumentError("generalized_fourier: horizon too short for the truncated tail at this z");
  const std::size_t last = f.size() - 1;
  cplx acc = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    const cplx term = std::exp(-kI * z * f.time(k)) * f[k];
    acc += (k == 0 || k == last) ? 0.5 * term : term;
  }
  return -kI * acc * f.step();
}

GridFunction solve_volterra(const GridFunction& q1, const GridFunction& r) {
  if (q1.size() != r.size() || std::abs(q1.step() - r.step()) > 1e-15 * r.step())
    throw ArgumentError("solve_volterra: kernel and forcing must share the grid");
  const std::size_t n = r.size();
  const double h = r.step();
  // Q(t) = integral_0^t Q1, cumulative trapezoid; Q(0) = 0 makes the march explicit.
  std::vector<cplx> q(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) q[k] = q[k - 1] + 0.5 * h * (q1[k - 1] + q1[k]);
  std::vector<cplx> p(n);
  p[0] = r[0];
  for (std::size_t k = 1; k < n; ++k) {
    cplx conv = 0.5 * q[k] * p[0];
    for (std::size_t j = 1; j < k; ++j) conv += q[k - j] * p[j];
    p[k] = r[k] - h * conv;
  }
  return GridFunction(h, std::move(p), q1.is_real() && r.is_real());
}

cplx A_function(double t, const TestFunction& phi, const LimitLaw& law, int order) {
  require_real_derivative(phi);
  const int n = resolved_order(order, law.radius(), t);
  return a_from_nodes(derivative_nodes(phi, law.center(), law.radius(), n), t);
}

GridFunction A_grid(const TestFunction& phi, const LimitLaw& law, double step, double horizon,
                    int order) {
  require_real_derivative(phi);
  const std::size_t k = grid_steps(step, horizon);
  const int n = resolved_order(order, law.radius(), horizon);
  const WeightedNodes nodes = derivative_nodes(phi, law.center(), law.radius(), n);
  std::vector<cplx> values(k + 1);
  for (std::size_t i = 0; i <= k; ++i) values[i] = a_from_nodes(nodes, step * static_cast<double>(i));
  return GridFunction(step, std::move(values));
}

cplx closed_form_Y(double x, double t, const TestFunction& phi, double w, double z_value,
                   int order) {
  require_real_derivative(phi);
  if (!(w > 0.0)) throw ArgumentError("w must be positive");
  const YRule rule = make_y_rule(phi, w, resolved_order(order, 2.0 * w, t));
  return y_from_rule(rule, x, z_value, t);
}

GridFunction closed_form_Y_grid(double x, const TestFunction& phi, double w, double z_value,
                                double step, double horizon, int order) {
  require_real_derivative(phi);
  if (!(w > 0.0)) throw ArgumentError("w must be positive");
  const std::size_t k = grid_steps(step, horizon);
  const YRule rule = make_y_rule(phi, w, resolved_order(order, 2.0 * w, horizon));
  std::vector<cplx> values(k + 1);
  for (std::size_t i = 0; i <= k; ++i)
    values[i] = y_from_rule(rule, x, z_value, step * static_cast<double>(i));
  return GridFunction(step, std::move(values));
}

VolterraProblem wigner_volterra_problem(const TestFunction& phi, double w, double x,
                                        double z_value, double kappa4, double step,
                                        double horizon, int order) {
  const LimitLaw law = LimitLaw::semicircle(w * w);
  const std::size_t k = grid_steps(step, horizon);
  std::vector<cplx> v(k + 1);
  for (std::size_t i = 0; i <= k; ++i) v[i] = v_kernel(law, step * static_cast<double>(i));

  std::vector<cplx> kernel(k + 1);
  for (std::size_t i = 0; i <= k; ++i) kernel[i] = 2.0 * w * w * v[i];

  const GridFunction a = A_grid(phi, law, step, horizon, order);
  const double b = kappa4 == 0.0 ? 0.0 : kappa4_constant_B(phi, w, order);
  std::vector<cplx> forcing(k + 1);
  for (std::size_t i = 0; i <= k; ++i) {
    const cplx integral = (1.0 - v[i]) / (w * w);
    forcing[i] = x * z_value * (a[i] + kI * kappa4 * b * integral);
  }
  return {GridFunction(step, std::move(kernel)), GridFunction(step, std::move(forcing))};
}

double limiting_Z(double x, double variance) {
  if (!(variance >= 0.0)) throw ArgumentError("limiting_Z needs V >= 0");
  return std::exp(-0.5 * x * x * variance);
}

double limiting_Z_residual(double x, double variance) {
  const double z = limiting_Z(x, variance);
  if (x == 0.0) return std::abs(z - 1.0);
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [variance](double y) { return y * limiting_Z(y, variance); }, 0.0, x, 0, 1e-14);
  return std::abs(z - 1.0 + variance * integral);
}

double z_derivative_from_Y(const GridFunction& y, const TestFunction& phi) {
  const std::size_t last = y.size() - 1;
  cplx acc = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    const double t = y.time(k);
    cplx term = phi.fourier(t) * y[k];
    if (k > 0) term += phi.fourier(-t) * (-std::conj(y[k]));
    acc += (k == last) ? 0.5 * term : term;
  }
  // The k = 0 sample appears once with full weight: the two half-weights of [-T, 0] and [0, T].
  return (kI * acc * y.step()).real();
}

}  // namespace rmt
