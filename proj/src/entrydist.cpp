#include "rmt/entrydist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Upper tail of the standard normal, P{X > u}.
double normal_upper_tail(double u) { return 0.5 * std::erfc(u / std::numbers::sqrt2); }

double normal_pdf(double u) {
  return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

std::string to_string(EntryKind kind) {
  switch (kind) {
    case EntryKind::gaussian: return "gaussian";
    case EntryKind::rademacher: return "rademacher";
    case EntryKind::uniform: return "uniform";
    case EntryKind::table: return "table";
  }
  return "unknown";
}

EntryDistribution EntryDistribution::gaussian(double variance) {
  if (!(variance > 0.0)) throw ArgumentError("gaussian entry law needs variance > 0");
  EntryDistribution d;
  d.kind_ = EntryKind::gaussian;
  d.parameter_ = variance;
  d.moments_.assign(kStoredMoments, 0.0);
  double double_factorial = 1.0;
  for (int k = 1; 2 * k <= kStoredMoments; ++k) {
    double_factorial *= (2 * k - 1);
    d.moments_[2 * k - 1] = double_factorial * std::pow(variance, k);
  }
  d.check_invariants();
  return d;
}

EntryDistribution EntryDistribution::rademacher(double variance) {
  if (!(variance > 0.0)) throw ArgumentError("rademacher entry law needs variance > 0");
  EntryDistribution d;
  d.kind_ = EntryKind::rademacher;
  d.parameter_ = variance;
  d.moments_.assign(kStoredMoments, 0.0);
  for (int k = 1; 2 * k <= kStoredMoments; ++k) d.moments_[2 * k - 1] = std::pow(variance, k);
  d.bound_ = std::sqrt(variance);
  d.atoms_ = {{-std::sqrt(variance), 0.5}, {std::sqrt(variance), 0.5}};
  d.check_invariants();
  return d;
}

EntryDistribution EntryDistribution::uniform(double halfwidth) {
  if (!(halfwidth > 0.0)) throw ArgumentError("uniform entry law needs halfwidth > 0");
  EntryDistribution d;
  d.kind_ = EntryKind::uniform;
  d.parameter_ = halfwidth;
  d.moments_.assign(kStoredMoments, 0.0);
  for (int k = 1; 2 * k <= kStoredMoments; ++k)
    d.moments_[2 * k - 1] = std::pow(halfwidth, 2 * k) / (2 * k + 1);
  d.bound_ = halfwidth;
  d.check_invariants();
  return d;
}

EntryDistribution EntryDistribution::table(std::vector<std::pair<double, double>> atoms) {
  if (atoms.empty()) throw ArgumentError("table entry law needs at least one atom");
  double total = 0.0;
  for (const auto& [x, p] : atoms) {
    if (!std::isfinite(x) || !(p >= 0.0)) throw ArgumentError("table atoms need finite values and p >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ArgumentError("table probabilities must sum to 1");
  EntryDistribution d;
  d.kind_ = EntryKind::table;
  d.moments_.assign(kStoredMoments, 0.0);
  double b = 0.0;
  for (const auto& [x, p] : atoms) {
    double xp = 1.0;
    for (int j = 0; j < kStoredMoments; ++j) {
      xp *= x;
      d.moments_[j] += p * xp;
    }
    b = std::max(b, std::abs(x));
  }
  if (std::abs(d.moments_[0]) > 1e-12 * std::max(1.0, b))
    throw ArgumentError("table entry law must have mean zero");
  d.moments_[0] = 0.0;
  if (!(d.moments_[1] > 0.0)) throw ArgumentError("table entry law must have positive variance");
  d.bound_ = b;
  d.cumulative_.reserve(atoms.size());
  double acc = 0.0;
  for (const auto& a : atoms) {
    acc += a.second;
    d.cumulative_.push_back(acc);
  }
  d.cumulative_.back() = 1.0;
  d.atoms_ = std::move(atoms);
  d.parameter_ = d.moments_[1];
  d.check_invariants();
  return d;
}

void EntryDistribution::check_invariants() const {
  const double mu2 = moments_[1];
  const double mu4 = moments_[3];
  if (moments_[0] != 0.0) throw ArgumentError("entry law must be centred");
  if (!(mu2 > 0.0)) throw ArgumentError("entry law must have positive variance");
  if (mu4 < mu2 * mu2 * (1.0 - 1e-12)) throw ArgumentError("inconsistent moments: mu4 < mu2^2");
  if (bound_) {
    for (int j = 1; j <= kStoredMoments; ++j) {
      if (std::abs(moments_[j - 1]) > std::pow(*bound_, j) * (1.0 + 1e-12))
        throw ArgumentError("moment exceeds support bound");
    }
  }
}

double EntryDistribution::moment(int j) const {
  if (j == 0) return 1.0;
  if (j < 0 || j > kStoredMoments) throw ArgumentError("moment order out of range");
  return moments_[j - 1];
}

double EntryDistribution::abs_moment(int j) const {
  if (j < 0) throw ArgumentError("absolute moment order must be >= 0");
  switch (kind_) {
    case EntryKind::gaussian:
      return std::pow(2.0 * parameter_, 0.5 * j) * std::tgamma(0.5 * (j + 1)) /
             std::sqrt(std::numbers::pi);
    case EntryKind::uniform:
      return std::pow(parameter_, j) / (j + 1);
    case EntryKind::rademacher:
    case EntryKind::table: {
      double s = 0.0;
      for (const auto& [x, p] : atoms_) s += p * std::pow(std::abs(x), j);
      return s;
    }
  }
  return 0.0;
}

double EntryDistribution::kappa4() const {
  return cumulants_from_moments(moments_, 4)[3];
}

EntryDistribution EntryDistribution::with_variance(double v) const {
  if (!(v > 0.0)) throw ArgumentError("target variance must be > 0");
  switch (kind_) {
    case EntryKind::gaussian: return gaussian(v);
    case EntryKind::rademacher: return rademacher(v);
    case EntryKind::uniform: return uniform(std::sqrt(3.0 * v));
    case EntryKind::table: {
      const double s = std::sqrt(v / variance());
      auto scaled = atoms_;
      for (auto& a : scaled) a.first *= s;
      return table(std::move(scaled));
    }
  }
  throw ArgumentError("unknown entry kind");
}

double EntryDistribution::tail_moment(int power, double threshold) const {
  if (power < 0) throw ArgumentError("tail moment power must be >= 0");
  if (threshold < 0.0) threshold = 0.0;
  switch (kind_) {
    case EntryKind::gaussian: {
      // 2 * integral_u^inf sigma^k s^k phi(s) ds, via the recursion
      // I_k(u) = u^{k-1} phi(u) + (k-1) I_{k-2}(u).
      const double sigma = std::sqrt(parameter_);
      const double u = threshold / sigma;
      double i_prev = normal_upper_tail(u);  // I_0
      double i_cur = normal_pdf(u);          // I_1
      if (power == 0) return 2.0 * i_prev;
      for (int k = 2; k <= power; ++k) {
        const double next = std::pow(u, k - 1) * normal_pdf(u) + (k - 1) * i_prev;
        i_prev = i_cur;
        i_cur = next;
      }
      return 2.0 * std::pow(sigma, power) * i_cur;
    }
    case EntryKind::uniform: {
      const double h = parameter_;
      if (threshold >= h) return 0.0;
      return (std::pow(h, power + 1) - std::pow(threshold, power + 1)) / ((power + 1) * h);
    }
    case EntryKind::rademacher:
    case EntryKind::table: {
      double s = 0.0;
      for (const auto& [x, p] : atoms_)
        if (std::abs(x) > threshold) s += p * std::pow(std::abs(x), power);
      return s;
    }
  }
  return 0.0;
}

double EntryDistribution::sample(Rng& rng) const {
  switch (kind_) {
    case EntryKind::gaussian: return std::sqrt(parameter_) * rng.normal();
    case EntryKind::rademacher: return std::sqrt(parameter_) * rng.sign();
    case EntryKind::uniform: return parameter_ * (2.0 * rng.uniform() - 1.0);
    case EntryKind::table: {
      const double u = rng.uniform();
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      const auto idx = std::min<std::size_t>(it - cumulative_.begin(), atoms_.size() - 1);
      return atoms_[idx].first;
    }
  }
  return 0.0;
}

void EntryDistribution::sample(Rng& rng, std::span<double> out) const {
  for (double& x : out) x = sample(rng);
}

std::string EntryDistribution::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(var=" << variance() << ", kappa4=" << kappa4() << ")";
  return os.str();
}

std::vector<double> sample_entries(const EntryDistribution& dist, Rng& rng,
                                   std::size_t count) {
  std::vector<double> out(count);
  dist.sample(rng, out);
  return out;
}

std::vector<double> cumulants_from_moments(std::span<const double> moments, int order) {
  if (order < 1 || order > 6) throw ArgumentError("cumulant order must be in 1..6");
  if (static_cast<std::size_t>(order) > moments.size())
    throw ArgumentError("not enough moments for the requested cumulant order");
  auto mu = [&](int j) { return j == 0 ? 1.0 : moments[j - 1]; };
  std::vector<double> kappa(order);
  for (int r = 0; r < order; ++r) {
    double s = mu(r + 1);
    for (int j = 0; j < r; ++j) s -= binomial(r, j) * kappa[j] * mu(r - j);
    kappa[r] = s;
  }
  return kappa;
}

std::vector<double> moments_from_cumulants(std::span<const double> cumulants, int order) {
  if (order < 1 || static_cast<std::size_t>(order) > cumulants.size())
    throw ArgumentError("not enough cumulants for the requested moment order");
  std::vector<double> mu(order + 1);
  mu[0] = 1.0;
  for (int r = 0; r < order; ++r) {
    double s = 0.0;
    for (int j = 0; j <= r; ++j) s += binomial(r, j) * cumulants[j] * mu[r - j];
    mu[r + 1] = s;
  }
  mu.erase(mu.begin());
  return mu;
}

SmoothFunction sine_function() {
  return {"sin",
          [](int l, double x) {
            switch (l % 4) {
              case 0: return std::sin(x);
              case 1: return std::cos(x);
              case 2: return -std::sin(x);
              default: return -std::cos(x);
            }
          },
          [](int) { return 1.0; }};
}

SmoothFunction polynomial_function(std::vector<double> coeffs) {
  const int degree = static_cast<int>(coeffs.size()) - 1;
  auto derivative = [coeffs](int l, double x) {
    // Horner on the l-th derivative coefficients.
    double acc = 0.0;
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= l; --i) {
      double falling = 1.0;
      for (int k = 0; k < l; ++k) falling *= (i - k);
      acc = acc * x + coeffs[i] * falling;
    }
    return acc;
  };
  auto sup = [coeffs, degree](int l) {
    if (l > degree) return 0.0;
    if (l == degree) {
      double f = 1.0;
      for (int k = 2; k <= degree; ++k) f *= k;
      return std::abs(coeffs[degree]) * f;
    }
    return std::numeric_limits<double>::infinity();
  };
  return {"polynomial", derivative, sup};
}

double decoupling_constant(int p) {
  return (1.0 + std::pow(3.0 + 2.0 * p, p + 2)) / factorial(p + 1);
}

DecouplingCheck verify_decoupling(const EntryDistribution& dist, const SmoothFunction& phi,
                                  int p, std::size_t samples, Rng& rng) {
  if (p < 0) throw ArgumentError("decoupling order p must be >= 0");
  if (p + 2 > EntryDistribution::kStoredMoments || p + 1 > 6)
    throw ArgumentError("decoupling order p exceeds the available moments");
  if (samples < 2) throw ArgumentError("decoupling check needs at least two samples");

  const auto kappa = cumulants_from_moments(dist.moments(), p + 1);
  std::vector<double> weight(p + 1);
  for (int l = 0; l <= p; ++l) weight[l] = kappa[l] / factorial(l);

  // Welford accumulators for lhs terms and paired differences.
  double mean_a = 0.0, m2_a = 0.0, mean_b = 0.0, mean_d = 0.0, m2_d = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double xi = dist.sample(rng);
    const double a = xi * phi.derivative(0, xi);
    double b = 0.0;
    for (int l = 0; l <= p; ++l) b += weight[l] * phi.derivative(l, xi);
    const double d = a - b;
    const double k = static_cast<double>(i + 1);
    const double da = a - mean_a;
    mean_a += da / k;
    m2_a += da * (a - mean_a);
    mean_b += (b - mean_b) / k;
    const double dd = d - mean_d;
    mean_d += dd / k;
    m2_d += dd * (d - mean_d);
  }
  const double nn = static_cast<double>(samples);
  DecouplingCheck out;
  out.lhs = mean_a;
  out.rhs = mean_b;
  out.gap = std::abs(mean_d);
  out.lhs_se = std::sqrt(m2_a / (nn - 1.0) / nn);
  out.gap_se = std::sqrt(m2_d / (nn - 1.0) / nn);
  out.bound = decoupling_constant(p) * dist.abs_moment(p + 2) * phi.sup_abs_derivative(p + 1);
  return out;
}

}  // namespace rmt
