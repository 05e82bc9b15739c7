#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmt/rng.hpp"

namespace rmt {

enum class EntryKind { gaussian, rademacher, uniform, table };

std::string to_string(EntryKind kind);

/// A centred scalar law for matrix entries with exact moment bookkeeping.
///
/// Raw moments mu_1..mu_8 are stored exactly (closed forms for the
/// parametric kinds, finite sums for tables). Every instance has mean zero.
class EntryDistribution {
 public:
  static constexpr int kStoredMoments = 8;

  static EntryDistribution gaussian(double variance);
  /// Symmetric two-point law +-sqrt(variance).
  static EntryDistribution rademacher(double variance = 1.0);
  /// Uniform on [-halfwidth, halfwidth].
  static EntryDistribution uniform(double halfwidth);
  /// Finite discrete law from (value, probability) atoms. Probabilities must
  /// sum to one and the mean must vanish.
  static EntryDistribution table(std::vector<std::pair<double, double>> atoms);

  EntryKind kind() const { return kind_; }
  double variance() const { return moments_[1]; }
  /// mu_j for 1 <= j <= kStoredMoments.
  double moment(int j) const;
  std::span<const double> moments() const { return moments_; }
  /// E|xi|^j for j >= 0 (closed form or exact sum).
  double abs_moment(int j) const;
  /// Support bound when the law is compactly supported.
  std::optional<double> bound() const { return bound_; }
  double kappa4() const;
  const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
  /// Kind-specific shape parameter: variance (gaussian, rademacher) or
  /// halfwidth (uniform). Unused for tables.
  double parameter() const { return parameter_; }

  /// Same family, rescaled to the requested variance.
  EntryDistribution with_variance(double variance) const;

  /// Tail moment: integral of |x|^power over |x| > threshold.
  double tail_moment(int power, double threshold) const;

  double sample(Rng& rng) const;
  void sample(Rng& rng, std::span<double> out) const;

  std::string describe() const;

 private:
  EntryDistribution() = default;
  void check_invariants() const;

  EntryKind kind_ = EntryKind::gaussian;
  double parameter_ = 1.0;
  std::vector<double> moments_;  // mu_1 .. mu_8
  std::optional<double> bound_;
  std::vector<std::pair<double, double>> atoms_;
  std::vector<double> cumulative_;  // table sampling
};

/// Draw `count` i.i.d. entries.
std::vector<double> sample_entries(const EntryDistribution& dist, Rng& rng,
                                   std::size_t count);

/// Cumulants kappa_1..kappa_order from raw moments mu_1..mu_p, order <= 6,
/// by inverting mu_{r+1} = sum_j binom(r, j) kappa_{j+1} mu_{r-j}.
std::vector<double> cumulants_from_moments(std::span<const double> moments,
                                           int order);

/// Raw moments mu_1..mu_order from cumulants (the forward recursion).
std::vector<double> moments_from_cumulants(std::span<const double> cumulants,
                                           int order);

/// A smooth scalar function given through its derivatives.
struct SmoothFunction {
  std::string name;
  /// derivative(l, x) = l-th derivative at x (l = 0 is the value).
  std::function<double(int, double)> derivative;
  /// sup over the real line of |l-th derivative|; may be +inf.
  std::function<double(int)> sup_abs_derivative;
};

SmoothFunction sine_function();
/// Polynomial sum_i coeffs[i] x^i.
SmoothFunction polynomial_function(std::vector<double> coeffs);

struct DecouplingCheck {
  double lhs = 0.0;     // MC estimate of E{xi Phi(xi)}
  double rhs = 0.0;     // sum_l kappa_{l+1}/l! E{Phi^(l)(xi)}
  double gap = 0.0;     // |lhs - rhs|
  double bound = 0.0;   // C_p E|xi|^{p+2} sup|Phi^(p+1)|
  double lhs_se = 0.0;  // standard error of lhs
  double gap_se = 0.0;  // standard error of lhs - rhs (paired samples)
};

/// Monte Carlo check of the cumulant expansion
/// E{xi Phi(xi)} = sum_{l<=p} kappa_{l+1}/l! E{Phi^(l)(xi)} + eps_p.
DecouplingCheck verify_decoupling(const EntryDistribution& dist,
                                  const SmoothFunction& phi, int p,
                                  std::size_t samples, Rng& rng);

/// Remainder constant C_p = (1 + (3 + 2p)^{p+2}) / (p+1)!.
double decoupling_constant(int p);

}  // namespace rmt
