#include <cmath>
#include <limits>
#include <numbers>

#include "rmt/errors.hpp"
#include "rmt/laws.hpp"

namespace rmt {

namespace {

// Below this the ascending series loses < 1e-11 to cancellation; above it the
// Hankel expansion's smallest term is below 1e-12.
constexpr double kSeriesLimit = 14.0;

double series(int order, double x) {
  const double half = 0.5 * x;
  const double q = -half * half;
  double term = order == 0 ? 1.0 : half;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + order));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// J_nu(x) ~ sqrt(2 / (pi x)) (P cos chi - Q sin chi), chi = x - (nu/2 + 1/4) pi,
// a_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! 8^k), mu = 4 nu^2.
double hankel(int order, double x) {
  const double mu = 4.0 * order * order;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 100; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) >= last) break;  // asymptotic series: stop at the smallest term
    last = std::abs(term);
    // k odd contributes to Q with sign (-1)^{(k-1)/2}; k even to P with sign (-1)^{k/2}.
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    } else {
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    }
    if (last < 1e-17) break;
  }
  const double chi = x - (0.5 * order + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j(int order, double x) {
  if (order != 0 && order != 1) throw ArgumentError("bessel_j supports orders 0 and 1");
  const double ax = std::abs(x);
  const double value = ax < kSeriesLimit ? series(order, ax) : hankel(order, ax);
  return (order == 1 && x < 0.0) ? -value : value;
}

}  // namespace rmt
