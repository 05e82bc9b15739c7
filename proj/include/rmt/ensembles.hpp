#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmt/entrydist.hpp"
#include "rmt/rng.hpp"

namespace rmt {

enum class Family { goe, wigner, wishart, sample_covariance };

std::string to_string(Family family);
Family family_from_string(const std::string& name);
inline bool is_covariance(Family f) {
  return f == Family::wishart || f == Family::sample_covariance;
}

/// Which matrix family to sample and with which entry laws.
///
/// Wigner families: M = n^{-1/2} W with E W_jk^2 = (1 + delta_jk) w2.
/// Covariance families: M = n^{-1} X^T X with X of size m x n, E X^2 = a2.
/// GOE and Wishart fix Gaussian entries; the distribution fields are only
/// consulted for the general families.
struct EnsembleSpec {
  Family family = Family::goe;
  int n = 2;
  int m = 0;
  double w2 = 1.0;
  double a2 = 1.0;
  std::optional<EntryDistribution> offdiag_dist;
  std::optional<EntryDistribution> diag_dist;
  std::optional<EntryDistribution> entry_dist;

  static EnsembleSpec goe(int n, double w2 = 1.0);
  /// Off-diagonal law is rescaled to variance w2; the diagonal defaults to the
  /// same family at variance 2 w2.
  static EnsembleSpec wigner(int n, const EntryDistribution& offdiag,
                             std::optional<EntryDistribution> diag = std::nullopt);
  static EnsembleSpec wishart(int n, int m, double a2 = 1.0);
  static EnsembleSpec sample_covariance(int n, int m, const EntryDistribution& entry);

  /// Throws ArgumentError if the spec is not samplable.
  void validate() const;

  double aspect_ratio() const { return static_cast<double>(m) / n; }
  EntryDistribution offdiag_law() const;
  EntryDistribution diag_law() const;
  EntryDistribution entry_law() const;
  /// Fourth cumulant of the entries that drive the limiting variance.
  double kappa4() const;

  /// Copy with a different n; covariance families keep m/n fixed.
  EnsembleSpec resized(int new_n) const;
};

/// Dense symmetric matrix, row-major, full storage.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  std::span<double> row(int i) { return {data_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)}; }
  std::span<const double> row(int i) const { return {data_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)}; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double trace() const;
  /// Tr M^2 = sum_jk M_jk^2.
  double trace_of_square() const;
  double frobenius_norm() const;
  double max_asymmetry() const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

/// Unscaled entries: the symmetric W (n x n) for Wigner families or the data
/// matrix X (m x n) for covariance families, row-major.
struct RawEntries {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
};

/// Draws W or X in a fixed row-major order (upper triangle for W, mirrored).
RawEntries sample_raw_entries(const EnsembleSpec& spec, Rng& rng);

/// Applies the normalisation: n^{-1/2} W or n^{-1} X^T X.
SymmetricMatrix assemble_matrix(const EnsembleSpec& spec, const RawEntries& raw);

SymmetricMatrix sample_matrix(const EnsembleSpec& spec, Rng& rng);

/// Caps every entry at tau * sqrt(n) in absolute value, keeping its sign.
void truncate_entries(std::span<double> entries, int n, double tau);
RawEntries truncate_matrix(RawEntries raw, int n, double tau);

/// Writes a dense matrix as CSV (debug dump).
void write_matrix_csv(const SymmetricMatrix& matrix, const std::string& path);

}  // namespace rmt
