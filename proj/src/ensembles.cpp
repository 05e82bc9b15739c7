#include "rmt/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "rmt/errors.hpp"

namespace rmt {

std::string to_string(Family family) {
  switch (family) {
    case Family::goe: return "GOE";
    case Family::wigner: return "Wigner";
    case Family::wishart: return "Wishart";
    case Family::sample_covariance: return "SampleCovariance";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "GOE") return Family::goe;
  if (name == "Wigner") return Family::wigner;
  if (name == "Wishart") return Family::wishart;
  if (name == "SampleCovariance") return Family::sample_covariance;
  throw ArgumentError("unknown ensemble family '" + name + "'");
}

EnsembleSpec EnsembleSpec::goe(int n, double w2) {
  EnsembleSpec s;
  s.family = Family::goe;
  s.n = n;
  s.w2 = w2;
  s.validate();
  return s;
}

EnsembleSpec EnsembleSpec::wigner(int n, const EntryDistribution& offdiag,
                                  std::optional<EntryDistribution> diag) {
  EnsembleSpec s;
  s.family = Family::wigner;
  s.n = n;
  s.w2 = offdiag.variance();
  s.offdiag_dist = offdiag;
  s.diag_dist = std::move(diag);
  s.validate();
  return s;
}

EnsembleSpec EnsembleSpec::wishart(int n, int m, double a2) {
  EnsembleSpec s;
  s.family = Family::wishart;
  s.n = n;
  s.m = m;
  s.a2 = a2;
  s.validate();
  return s;
}

EnsembleSpec EnsembleSpec::sample_covariance(int n, int m, const EntryDistribution& entry) {
  EnsembleSpec s;
  s.family = Family::sample_covariance;
  s.n = n;
  s.m = m;
  s.a2 = entry.variance();
  s.entry_dist = entry;
  s.validate();
  return s;
}

void EnsembleSpec::validate() const {
  if (n < 2) throw ArgumentError("ensemble needs n >= 2");
  if (is_covariance(family)) {
    if (m < 1) throw ArgumentError("covariance ensembles need m >= 1");
    if (!(a2 > 0.0)) throw ArgumentError("covariance ensembles need a2 > 0");
    if (family == Family::sample_covariance && entry_dist &&
        std::abs(entry_dist->variance() - a2) > 1e-12 * a2)
      throw ArgumentError("entry_dist variance must equal a2");
  } else {
    if (!(w2 > 0.0)) throw ArgumentError("Wigner ensembles need w2 > 0");
    if (family == Family::wigner && offdiag_dist &&
        std::abs(offdiag_dist->variance() - w2) > 1e-12 * w2)
      throw ArgumentError("offdiag_dist variance must equal w2");
  }
}

EntryDistribution EnsembleSpec::offdiag_law() const {
  if (family == Family::wigner && offdiag_dist) return *offdiag_dist;
  return EntryDistribution::gaussian(w2);
}

EntryDistribution EnsembleSpec::diag_law() const {
  if (family == Family::wigner) {
    if (diag_dist) return *diag_dist;
    return offdiag_law().with_variance(2.0 * w2);
  }
  return EntryDistribution::gaussian(2.0 * w2);
}

EntryDistribution EnsembleSpec::entry_law() const {
  if (family == Family::sample_covariance && entry_dist) return *entry_dist;
  return EntryDistribution::gaussian(a2);
}

double EnsembleSpec::kappa4() const {
  switch (family) {
    case Family::goe:
    case Family::wishart: return 0.0;
    case Family::wigner: return offdiag_law().kappa4();
    case Family::sample_covariance: return entry_law().kappa4();
  }
  return 0.0;
}

EnsembleSpec EnsembleSpec::resized(int new_n) const {
  EnsembleSpec s = *this;
  if (is_covariance(family)) {
    s.m = static_cast<int>(std::lround(aspect_ratio() * new_n));
  }
  s.n = new_n;
  s.validate();
  return s;
}

double SymmetricMatrix::trace() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += (*this)(i, i);
  return s;
}

double SymmetricMatrix::trace_of_square() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return s;
}

double SymmetricMatrix::frobenius_norm() const { return std::sqrt(trace_of_square()); }

double SymmetricMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  return worst;
}

RawEntries sample_raw_entries(const EnsembleSpec& spec, Rng& rng) {
  spec.validate();
  RawEntries raw;
  if (is_covariance(spec.family)) {
    const EntryDistribution law = spec.entry_law();
    raw.rows = spec.m;
    raw.cols = spec.n;
    raw.values.resize(static_cast<std::size_t>(spec.m) * spec.n);
    law.sample(rng, raw.values);
    return raw;
  }
  const EntryDistribution off = spec.offdiag_law();
  const EntryDistribution diag = spec.diag_law();
  const int n = spec.n;
  raw.rows = raw.cols = n;
  raw.values.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    raw.values[static_cast<std::size_t>(j) * n + j] = diag.sample(rng);
    for (int k = j + 1; k < n; ++k) {
      const double x = off.sample(rng);
      raw.values[static_cast<std::size_t>(j) * n + k] = x;
      raw.values[static_cast<std::size_t>(k) * n + j] = x;
    }
  }
  return raw;
}

namespace {

// Four independent partial sums; fixed association order keeps results
// reproducible while letting the compiler pipeline the loop.
double dot(const double* a, const double* b, std::size_t len) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < len; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

}  // namespace

SymmetricMatrix assemble_matrix(const EnsembleSpec& spec, const RawEntries& raw) {
  const int n = spec.n;
  SymmetricMatrix mat(n);
  if (is_covariance(spec.family)) {
    if (raw.rows != spec.m || raw.cols != n) throw ArgumentError("raw entries do not match spec shape");
    // Column-major copy of X so each Gram entry is a contiguous dot product.
    const int m = spec.m;
    std::vector<double> xt(static_cast<std::size_t>(n) * m);
    for (int a = 0; a < m; ++a)
      for (int j = 0; j < n; ++j) xt[static_cast<std::size_t>(j) * m + a] = raw.values[static_cast<std::size_t>(a) * n + j];
    const double scale = 1.0 / n;
    for (int j = 0; j < n; ++j) {
      const double* cj = xt.data() + static_cast<std::size_t>(j) * m;
      for (int k = j; k < n; ++k) {
        const double v = scale * dot(cj, xt.data() + static_cast<std::size_t>(k) * m, m);
        mat(j, k) = v;
        mat(k, j) = v;
      }
    }
    return mat;
  }
  if (raw.rows != n || raw.cols != n) throw ArgumentError("raw entries do not match spec shape");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      const double v = scale * raw.values[static_cast<std::size_t>(j) * n + k];
      mat(j, k) = v;
      mat(k, j) = v;
    }
  return mat;
}

SymmetricMatrix sample_matrix(const EnsembleSpec& spec, Rng& rng) {
  return assemble_matrix(spec, sample_raw_entries(spec, rng));
}

void truncate_entries(std::span<double> entries, int n, double tau) {
  if (!(tau > 0.0)) throw ArgumentError("truncation level tau must be > 0");
  if (n < 1) throw ArgumentError("truncation needs n >= 1");
  const double cap = tau * std::sqrt(static_cast<double>(n));
  for (double& e : entries) {
    if (std::abs(e) > cap) e = std::copysign(cap, e);
  }
}

RawEntries truncate_matrix(RawEntries raw, int n, double tau) {
  truncate_entries(raw.values, n, tau);
  return raw;
}

void write_matrix_csv(const SymmetricMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  for (int i = 0; i < matrix.size(); ++i) {
    for (int j = 0; j < matrix.size(); ++j) out << (j ? "," : "") << matrix(i, j);
    out << '\n';
  }
}

}  // namespace rmt
