#include "rmt/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "rmt/errors.hpp"
#include "rmt/rng.hpp"

namespace rmt {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

void ExperimentConfig::validate() const {
  ensemble.validate();
  if (replicas < 2) throw ArgumentError("replicas must be >= 2");
  if (workers < 1) throw ArgumentError("workers must be >= 1");
  if (order < 16) throw ArgumentError("order must be >= 16");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ArgumentError("n_grid entries must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ArgumentError("n_grid must be strictly ascending");
  }
  test_function.make();
}

std::vector<int> ExperimentConfig::sizes() const {
  return n_grid.empty() ? std::vector<int>{ensemble.n} : n_grid;
}

int hardware_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  if (workers < 1) throw ArgumentError("workers must be >= 1");
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  if (threads <= 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<SpectrumSample> sample_spectra(const EnsembleSpec& spec, int replicas,
                                           std::uint64_t base_seed, int workers) {
  spec.validate();
  if (replicas < 1) throw ArgumentError("replicas must be >= 1");
  std::vector<SpectrumSample> out(static_cast<std::size_t>(replicas));
  parallel_for(out.size(), workers, [&](std::size_t r) {
    const std::uint64_t seed = mix_seed(base_seed, static_cast<std::uint64_t>(spec.n), r);
    Rng rng(seed);
    try {
      out[r] = make_spectrum(sample_matrix(spec, rng), seed, static_cast<std::int64_t>(r));
    } catch (const NumericError& e) {
      throw NumericError("n=" + std::to_string(spec.n) + " replica=" + std::to_string(r) + ": " +
                         e.what());
    }
    out[r].ensemble = spec;
  });
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const TestFunction phi = config.test_function.make();
  ExperimentResult result;
  for (int n : config.sizes()) {
    SizeResult size;
    size.n = n;
    size.ensemble = config.ensemble.resized(n);
    size.ensemble.validate();
    size.values.resize(static_cast<std::size_t>(config.replicas));
    if (!phi.is_real()) size.imag_values.resize(size.values.size());
    parallel_for(size.values.size(), config.workers, [&](std::size_t r) {
      Rng rng(mix_seed(config.base_seed, static_cast<std::uint64_t>(n), r));
      try {
        const SymmetricMatrix m = sample_matrix(size.ensemble, rng);
        SpectrumSample s;
        s.eigenvalues = eigenvalues_symmetric(m);
        const std::complex<double> value = linear_statistic(s, phi);
        size.values[r] = value.real();
        if (!size.imag_values.empty()) size.imag_values[r] = value.imag();
      } catch (const NumericError& e) {
        throw NumericError("n=" + std::to_string(n) + " replica=" + std::to_string(r) + ": " +
                           e.what());
      } catch (const EvaluationError& e) {
        throw EvaluationError("n=" + std::to_string(n) + " replica=" + std::to_string(r) + ": " +
                              e.what());
      }
    });
    result.sizes.push_back(std::move(size));
  }
  return result;
}

VarianceResult theory_variance(const EnsembleSpec& spec, const TestFunction& phi, int order) {
  switch (spec.family) {
    case Family::goe: return variance_goe(phi, std::sqrt(spec.w2), order);
    case Family::wigner: return variance_wigner(phi, std::sqrt(spec.w2), spec.kappa4(), order);
    case Family::wishart: return variance_wishart(phi, std::sqrt(spec.a2), spec.aspect_ratio(), order);
    case Family::sample_covariance:
      return variance_sample_covariance(phi, std::sqrt(spec.a2), spec.aspect_ratio(),
                                        spec.kappa4(), order);
  }
  throw ArgumentError("unknown ensemble family");
}

double ks_statistic(std::span<const double> samples, double mean, double variance) {
  if (samples.empty()) throw ArgumentError("ks_statistic: no samples");
  if (!(variance > 0.0)) throw ArgumentError("ks_statistic: variance must be positive");
  std::vector<double> z(samples.begin(), samples.end());
  std::sort(z.begin(), z.end());
  const double sd = std::sqrt(variance);
  const double count = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = normal_cdf((z[i] - mean) / sd);
    d = std::max({d, (static_cast<double>(i) + 1.0) / count - f, f - static_cast<double>(i) / count});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_pvalue(double statistic, std::size_t count) {
  const double sn = std::sqrt(static_cast<double>(count));
  const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

CltReport clt_report(std::span<const double> samples, const VarianceResult& theory, int n) {
  if (samples.size() < 2) throw ArgumentError("clt_report needs at least two samples");
  CltReport rep;
  rep.n = n;
  rep.replicas = static_cast<int>(samples.size());
  rep.theory = theory;
  const double count = static_cast<double>(samples.size());

  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= count;
  double m2 = 0.0, m4 = 0.0;
  for (double s : samples) {
    const double d = s - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  rep.sample_mean = mean;
  rep.sample_variance = m2 / (count - 1.0);
  rep.variance_se = rep.sample_variance * std::sqrt(2.0 / (count - 1.0));

  // Same round-off scale as the clamp of slightly negative totals.
  rep.degenerate = theory.total <= 1e-10 * (1.0 + std::abs(theory.gaussian_part));
  rep.distributional = !rep.degenerate && samples.size() >= 30;
  if (!rep.distributional) return rep;

  rep.ks_statistic = ks_statistic(samples, mean, theory.total);
  rep.ks_pvalue = ks_pvalue(rep.ks_statistic, samples.size());
  const double b2 = m2 / count;
  rep.excess_kurtosis = b2 > 0.0 ? (m4 / count) / (b2 * b2) - 3.0 : 0.0;
  double dev = 0.0;
  for (int i = -30; i <= 30; ++i) {
    const double x = 0.1 * i;
    std::complex<double> acc = 0.0;
    for (double s : samples) acc += std::polar(1.0, x * (s - mean));
    dev = std::max(dev, std::abs(acc / count - std::exp(-0.5 * x * x * theory.total)));
  }
  rep.ecf_deviation = dev;
  return rep;
}

std::vector<CltReport> clt_reports(const ExperimentConfig& config, const ExperimentResult& result) {
  const TestFunction phi = config.test_function.make();
  struct Part {
    std::string tag;
    TestFunction fn;
  };
  std::vector<Part> parts;
  if (phi.is_real()) {
    parts.push_back({"", phi});
  } else {
    parts.push_back({"re", phi.real_part()});
    parts.push_back({"im", phi.imag_part()});
  }
  std::vector<CltReport> reports;
  for (const auto& size : result.sizes) {
    const EnsembleSpec spec = config.ensemble.resized(size.n);
    for (const auto& part : parts) {
      const auto& values = part.tag == "im" ? size.imag_values : size.values;
      if (values.empty()) throw ArgumentError("missing imaginary parts for a complex test function");
      CltReport rep = clt_report(values, theory_variance(spec, part.fn, config.order), size.n);
      rep.part = part.tag;
      rep.outside_hypotheses = !part.fn.has_fourier();
      rep.bound_check = apriori_bound_check(rep, part.fn, spec);
      reports.push_back(std::move(rep));
    }
  }
  return reports;
}

LindebergRecord lindeberg_diagnostics(const EntryDistribution& dist, int n, std::optional<int> m,
                                      double tau) {
  if (!(tau > 0.0)) throw ArgumentError("lindeberg_diagnostics: tau must be positive");
  if (n < 1 || (m && *m < 1)) throw ArgumentError("lindeberg_diagnostics: sizes must be positive");
  // n^{-2} times the number of entries: 1 for n x n, m / n for m x n.
  const double entries = m ? static_cast<double>(*m) / n : 1.0;
  const double threshold = tau * std::sqrt(static_cast<double>(n));
  return {entries * dist.tail_moment(2, threshold), entries * dist.tail_moment(4, threshold)};
}

BoundCheck apriori_bound_check(const CltReport& report, const TestFunction& phi,
                               const EnsembleSpec& spec, std::optional<double> fourier_constant) {
  BoundCheck out;
  const auto sup = phi.sup_derivative();
  switch (spec.family) {
    case Family::goe:
      if (!sup) {
        out.note = "not applicable: sup|phi'| unavailable";
        return out;
      }
      out.bound = 2.0 * spec.w2 * (*sup) * (*sup);
      break;
    case Family::wishart:
      if (!sup) {
        out.note = "not applicable: sup|phi'| unavailable";
        return out;
      }
      out.bound = 4.0 * spec.a2 * spec.a2 * spec.aspect_ratio() * (*sup) * (*sup);
      break;
    case Family::wigner:
    case Family::sample_covariance: {
      const auto norm = fourier_norm(phi, 3);
      if (!norm || !fourier_constant) {
        out.note = !norm ? "not applicable: phi has no integrable Fourier transform"
                         : "not applicable: no constant supplied for the Fourier-norm bound";
        return out;
      }
      out.bound = *fourier_constant * (*norm) * (*norm);
      break;
    }
  }
  out.applicable = true;
  const double rel_se = std::sqrt(2.0 / (report.replicas - 1.0));
  out.margin = out.bound * (1.0 + 3.0 * rel_se) - report.sample_variance;
  out.holds = out.margin >= 0.0;
  return out;
}

std::complex<double> empirical_Y(std::span<const SpectrumSample> spectra, const TestFunction& phi,
                                 double x, double t) {
  if (spectra.size() < 2) throw ArgumentError("empirical_Y needs at least two replicas");
  const double count = static_cast<double>(spectra.size());
  std::vector<double> stat(spectra.size());
  double mean = 0.0;
  for (std::size_t r = 0; r < spectra.size(); ++r) {
    stat[r] = linear_statistic(spectra[r], phi).real();
    mean += stat[r];
  }
  mean /= count;
  std::vector<std::complex<double>> e(spectra.size());
  std::complex<double> e_mean = 0.0;
  for (std::size_t r = 0; r < spectra.size(); ++r) {
    e[r] = std::polar(1.0, x * (stat[r] - mean));
    e_mean += e[r];
  }
  e_mean /= count;
  std::complex<double> acc = 0.0;
  for (std::size_t r = 0; r < spectra.size(); ++r)
    acc += trace_exponential(spectra[r], t) * (e[r] - e_mean);
  return acc / count;
}

}  // namespace rmt
