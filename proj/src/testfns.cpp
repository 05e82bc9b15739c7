#include "rmt/testfns.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <numbers>
#include <cstdio>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

using Scalar = TestFunction::Scalar;
constexpr Scalar kI{0.0, 1.0};

double param(const FunctionParams& p, std::string_view key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void check_keys(std::string_view name, const FunctionParams& p,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : p) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok)
      throw ArgumentError("test function '" + std::string(name) + "' has no parameter '" + key + "'");
    if (!std::isfinite(value))
      throw ArgumentError("test function parameter '" + key + "' must be finite");
  }
}

int integer_param(const FunctionParams& p, std::string_view key, int fallback) {
  const double v = param(p, key, fallback);
  if (v < 0 || v != std::floor(v) || v > 64)
    throw ArgumentError("parameter '" + std::string(key) + "' must be an integer in 0..64");
  return static_cast<int>(v);
}

std::string format_name(std::string_view base, const FunctionParams& p) {
  std::string out(base);
  if (p.empty()) return out;
  out += '(';
  bool first = true;
  for (const auto& [k, v] : p) {
    if (!first) out += ',';
    first = false;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%g", k.c_str(), v);
    out += buf;
  }
  out += ')';
  return out;
}

// Chebyshev T_k(x) and T_k'(x) by the three-term recurrences (valid on all of R).
std::pair<double, double> chebyshev_t(int k, double x) {
  if (k == 0) return {1.0, 0.0};
  double t_prev = 1.0, t_cur = x;      // T_0, T_1
  double u_prev = 1.0, u_cur = 2 * x;  // U_0, U_1
  for (int j = 1; j < k; ++j) {
    const double t_next = 2 * x * t_cur - t_prev;
    t_prev = t_cur;
    t_cur = t_next;
    const double u_next = 2 * x * u_cur - u_prev;
    u_prev = u_cur;
    u_cur = u_next;
  }
  // T_k' = k U_{k-1}; after the loop u_prev = U_{k-1}.
  return {t_cur, k * u_prev};
}

}  // namespace

std::string to_string(FunctionClass cls) {
  switch (cls) {
    case FunctionClass::polynomial: return "polynomial";
    case FunctionClass::bounded_smooth: return "bounded-smooth";
    case FunctionClass::poisson_kernel: return "poisson-kernel";
    case FunctionClass::trig: return "trig";
  }
  return "unknown";
}

TestFunction::TestFunction(std::string name, FunctionClass cls, Fn value, Fn derivative,
                           std::optional<Fn> fourier, std::optional<double> sup_derivative,
                           bool real_valued)
    : name_(std::move(name)),
      class_(cls),
      value_(std::move(value)),
      derivative_(std::move(derivative)),
      fourier_(std::move(fourier)),
      sup_derivative_(sup_derivative),
      real_valued_(real_valued) {}

Scalar TestFunction::fourier(double t) const {
  if (!fourier_) throw ArgumentError("test function '" + name_ + "' has no integrable Fourier transform");
  return (*fourier_)(t);
}

TestFunction TestFunction::real_part() const {
  if (real_valued_) return *this;
  auto v = value_;
  auto d = derivative_;
  std::optional<Fn> f;
  if (fourier_) {
    auto g = *fourier_;
    f = [g](double t) { return 0.5 * (g(t) + std::conj(g(-t))); };
  }
  return TestFunction("Re " + name_, class_, [v](double x) { return Scalar(v(x).real(), 0.0); },
                      [d](double x) { return Scalar(d(x).real(), 0.0); }, f, sup_derivative_, true);
}

TestFunction TestFunction::imag_part() const {
  auto v = value_;
  auto d = derivative_;
  std::optional<Fn> f;
  if (fourier_) {
    auto g = *fourier_;
    f = [g](double t) { return (g(t) - std::conj(g(-t))) / (2.0 * kI); };
  }
  return TestFunction("Im " + name_, class_, [v](double x) { return Scalar(v(x).imag(), 0.0); },
                      [d](double x) { return Scalar(d(x).imag(), 0.0); }, f, sup_derivative_, true);
}

TestFunction TestFunction::scaled(double alpha) const {
  auto v = value_;
  auto d = derivative_;
  std::optional<Fn> f;
  if (fourier_) {
    auto g = *fourier_;
    f = [g, alpha](double t) { return alpha * g(t); };
  }
  std::optional<double> sup;
  if (sup_derivative_) sup = std::abs(alpha) * *sup_derivative_;
  return TestFunction(std::to_string(alpha) + "*" + name_, class_,
                      [v, alpha](double x) { return alpha * v(x); },
                      [d, alpha](double x) { return alpha * d(x); }, f, sup, real_valued_);
}

TestFunction TestFunction::dilated(double s) const {
  if (s == 0.0) throw ArgumentError("dilation factor must be nonzero");
  auto v = value_;
  auto d = derivative_;
  std::optional<Fn> f;
  if (fourier_) {
    auto g = *fourier_;
    f = [g, s](double t) { return g(t / s) / std::abs(s); };
  }
  std::optional<double> sup;
  if (sup_derivative_) sup = std::abs(s) * *sup_derivative_;
  return TestFunction(name_ + "(" + std::to_string(s) + "x)", class_,
                      [v, s](double x) { return v(s * x); },
                      [d, s](double x) { return s * d(s * x); }, f, sup, real_valued_);
}

TestFunction operator+(const TestFunction& a, const TestFunction& b) {
  std::optional<TestFunction::Fn> f;
  if (a.fourier_ && b.fourier_) {
    auto fa = *a.fourier_;
    auto fb = *b.fourier_;
    f = [fa, fb](double t) { return fa(t) + fb(t); };
  }
  std::optional<double> sup;
  if (a.sup_derivative_ && b.sup_derivative_) sup = *a.sup_derivative_ + *b.sup_derivative_;
  FunctionClass cls = a.class_ == b.class_ ? a.class_ : FunctionClass::bounded_smooth;
  if (a.class_ == FunctionClass::polynomial || b.class_ == FunctionClass::polynomial)
    cls = FunctionClass::polynomial;
  auto va = a.value_, vb = b.value_, da = a.derivative_, db = b.derivative_;
  return TestFunction(a.name_ + "+" + b.name_, cls, [va, vb](double x) { return va(x) + vb(x); },
                      [da, db](double x) { return da(x) + db(x); }, f, sup,
                      a.real_valued_ && b.real_valued_);
}

TestFunction builtin(std::string_view name, const FunctionParams& p) {
  const std::string label = format_name(name, p);
  if (name == "const") {
    check_keys(name, p, {"value"});
    const double c = param(p, "value", 1.0);
    return TestFunction(label, FunctionClass::polynomial, [c](double) { return Scalar(c); },
                        [](double) { return Scalar(0.0); }, std::nullopt, 0.0);
  }
  if (name == "monomial") {
    check_keys(name, p, {"k"});
    const int k = integer_param(p, "k", 1);
    std::optional<double> sup;
    if (k == 0) sup = 0.0;
    if (k == 1) sup = 1.0;
    return TestFunction(
        label, FunctionClass::polynomial, [k](double x) { return Scalar(std::pow(x, k)); },
        [k](double x) { return Scalar(k == 0 ? 0.0 : k * std::pow(x, k - 1)); }, std::nullopt, sup);
  }
  if (name == "gauss_bump") {
    check_keys(name, p, {"center", "width"});
    const double c = param(p, "center", 0.0);
    const double s = param(p, "width", 1.0);
    if (!(s > 0.0)) throw ArgumentError("gauss_bump width must be > 0");
    return TestFunction(
        label, FunctionClass::bounded_smooth,
        [c, s](double x) { return Scalar(std::exp(-0.5 * (x - c) * (x - c) / (s * s))); },
        [c, s](double x) {
          return Scalar(-(x - c) / (s * s) * std::exp(-0.5 * (x - c) * (x - c) / (s * s)));
        },
        [c, s](double t) {
          return s / std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * s * s * t * t) *
                 std::exp(-kI * t * c);
        },
        std::exp(-0.5) / s);
  }
  if (name == "poisson") {
    check_keys(name, p, {"E", "eta"});
    const double e = param(p, "E", 0.0);
    const double eta = param(p, "eta", 1.0);
    if (!(eta > 0.0)) throw ArgumentError("poisson eta must be > 0");
    return TestFunction(
        label, FunctionClass::poisson_kernel,
        [e, eta](double x) { return Scalar(eta / ((x - e) * (x - e) + eta * eta)); },
        [e, eta](double x) {
          const double q = (x - e) * (x - e) + eta * eta;
          return Scalar(-2.0 * (x - e) * eta / (q * q));
        },
        [e, eta](double t) { return 0.5 * std::exp(-eta * std::abs(t)) * std::exp(-kI * t * e); },
        3.0 * std::sqrt(3.0) / (8.0 * eta * eta));
  }
  if (name == "cosine") {
    check_keys(name, p, {"t0"});
    const double t0 = param(p, "t0", 1.0);
    return TestFunction(label, FunctionClass::trig, [t0](double x) { return Scalar(std::cos(t0 * x)); },
                        [t0](double x) { return Scalar(-t0 * std::sin(t0 * x)); }, std::nullopt,
                        std::abs(t0));
  }
  if (name == "exponential") {
    check_keys(name, p, {"t0"});
    const double t0 = param(p, "t0", 1.0);
    return TestFunction(
        label, FunctionClass::trig, [t0](double x) { return std::exp(kI * t0 * x); },
        [t0](double x) { return kI * t0 * std::exp(kI * t0 * x); }, std::nullopt, std::abs(t0),
        false);
  }
  if (name == "chebyshev") {
    check_keys(name, p, {"k", "scale"});
    const int k = integer_param(p, "k", 2);
    const double scale = param(p, "scale", 2.0);
    if (!(scale > 0.0)) throw ArgumentError("chebyshev scale must be > 0");
    return TestFunction(
        label, FunctionClass::polynomial,
        [k, scale](double x) { return Scalar(chebyshev_t(k, x / scale).first); },
        [k, scale](double x) { return Scalar(chebyshev_t(k, x / scale).second / scale); },
        std::nullopt, k == 0 ? std::optional<double>(0.0) : std::nullopt);
  }
  if (name == "resolvent") {
    check_keys(name, p, {"re", "im"});
    const Scalar z(param(p, "re", 0.0), param(p, "im", 1.0));
    std::optional<TestFunction::Fn> f;
    if (z.imag() > 0.0) {
      f = [z](double t) { return t < 0.0 ? kI * std::exp(-kI * t * z) : Scalar(0.0); };
    } else if (z.imag() < 0.0) {
      f = [z](double t) { return t > 0.0 ? -kI * std::exp(-kI * t * z) : Scalar(0.0); };
    }
    std::optional<double> sup;
    if (z.imag() != 0.0) sup = 1.0 / (z.imag() * z.imag());
    return TestFunction(
        label, FunctionClass::bounded_smooth, [z](double x) { return 1.0 / (x - z); },
        [z](double x) { return -1.0 / ((x - z) * (x - z)); }, f, sup, false);
  }
  throw ArgumentError("unknown test function '" + std::string(name) + "'");
}

std::optional<double> fourier_norm(const TestFunction& phi, int k) {
  if (k < 2 || k > 5) throw ArgumentError("fourier_norm order k must be in {2, 3, 4, 5}");
  if (!phi.has_fourier()) return std::nullopt;
  boost::math::quadrature::exp_sinh<double> integrator;
  auto weight = [k](double t) { return 1.0 + std::pow(std::abs(t), k); };
  // exp_sinh probes t = inf, where phase factors turn into NaN.
  auto term = [&](double t) {
    if (!std::isfinite(t)) return 0.0;
    const double a = std::abs(phi.fourier(t));
    return a == 0.0 ? 0.0 : weight(t) * a;
  };
  auto right = [&](double t) { return term(t); };
  auto left = [&](double t) { return term(-t); };
  const double tol = 1e-12;
  return integrator.integrate(right, tol) + integrator.integrate(left, tol);
}

}  // namespace rmt
