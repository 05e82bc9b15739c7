#include "rmt/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "rmt/errors.hpp"
#include "rmt/testfns.hpp"

namespace rmt {

SpectrumSample make_spectrum(const SymmetricMatrix& m, std::uint64_t seed, std::int64_t replica) {
  SpectrumSample s;
  s.eigenvalues = eigenvalues_symmetric(m);
  s.seed = seed;
  s.replica = replica;
  return s;
}

std::complex<double> linear_statistic(const SpectrumSample& sample, const TestFunction& phi) {
  CompensatedSum<std::complex<double>> acc;
  for (double lambda : sample.eigenvalues) {
    const auto v = phi(lambda);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw EvaluationError("test function '" + phi.name() + "' is not finite at eigenvalue " +
                            std::to_string(lambda));
    acc.add(v);
  }
  return acc.value();
}

std::complex<double> trace_exponential(const SpectrumSample& sample, double t) {
  CompensatedSum<std::complex<double>> acc;
  for (double lambda : sample.eigenvalues) acc.add({std::cos(t * lambda), std::sin(t * lambda)});
  return acc.value();
}

std::complex<double> stieltjes_empirical(const SpectrumSample& sample, std::complex<double> z) {
  if (z.imag() == 0.0) throw ArgumentError("stieltjes transform needs Im z != 0");
  if (sample.eigenvalues.empty()) throw ArgumentError("empty spectrum");
  CompensatedSum<std::complex<double>> acc;
  for (double lambda : sample.eigenvalues) acc.add(1.0 / (lambda - z));
  return acc.value() / static_cast<double>(sample.n());
}

std::vector<double> empirical_measure(const SpectrumSample& sample, std::span<const double> edges) {
  if (edges.size() < 2) throw ArgumentError("need at least one bin (two edges)");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw ArgumentError("bin edges must be strictly increasing");
  const auto& ev = sample.eigenvalues;
  if (ev.empty()) throw ArgumentError("empty spectrum");
  if (ev.front() < edges.front() || ev.back() > edges.back())
    throw ArgumentError("bins do not cover the spectrum");
  std::vector<double> mass(edges.size() - 1, 0.0);
  for (double lambda : ev) {
    // Bin i is (e_i, e_{i+1}]; the first bin is closed on the left.
    auto it = std::lower_bound(edges.begin() + 1, edges.end(), lambda);
    const std::size_t bin = static_cast<std::size_t>(it - edges.begin()) - 1;
    mass[bin] += 1.0;
  }
  for (double& m : mass) m /= static_cast<double>(ev.size());
  return mass;
}

void write_eigenvalues_csv(std::span<const SpectrumSample> samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "replica,index,eigenvalue\n" << std::setprecision(17);
  for (const auto& s : samples)
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
      out << s.replica << ',' << i << ',' << s.eigenvalues[i] << '\n';
}

}  // namespace rmt
