#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rmt/errors.hpp"
#include "rmt/spectra.hpp"

namespace rmt {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Row update A_i,j -= v_i w_j + w_i v_j over the slice, fused with the
// product of the updated row against `next`.
double update_row_and_dot(double* row, const double* v, const double* w, double vi, double wi,
                          const double* next, std::size_t len) {
  double s0 = 0.0, s1 = 0.0;
  std::size_t j = 0;
  for (; j + 2 <= len; j += 2) {
    const double a0 = row[j] - vi * w[j] - wi * v[j];
    const double a1 = row[j + 1] - vi * w[j + 1] - wi * v[j + 1];
    row[j] = a0;
    row[j + 1] = a1;
    s0 += a0 * next[j];
    s1 += a1 * next[j + 1];
  }
  for (; j < len; ++j) {
    const double a0 = row[j] - vi * w[j] - wi * v[j];
    row[j] = a0;
    s0 += a0 * next[j];
  }
  return s0 + s1;
}

void update_row(double* row, const double* v, const double* w, double vi, double wi,
                std::size_t len) {
  for (std::size_t j = 0; j < len; ++j) row[j] -= vi * w[j] + wi * v[j];
}

}  // namespace

void householder_tridiagonalize(SymmetricMatrix a, std::vector<double>& diag,
                                std::vector<double>& offdiag) {
  const int n = a.size();
  diag.assign(n, 0.0);
  offdiag.assign(std::max(n - 1, 0), 0.0);
  if (n == 0) return;

  // The rank-2 update of step k is deferred and applied row by row during
  // step k + 1, fused with the matrix-vector product that step needs.
  std::vector<double> v(n, 0.0), w(n, 0.0);
  std::vector<double> new_v(n, 0.0), pv(n, 0.0);
  bool pending = false;

  for (int k = 0; k + 2 < n; ++k) {
    const std::size_t len = static_cast<std::size_t>(n - k - 1);
    double* row_k = a.row(k).data();
    if (pending) update_row(row_k + k, v.data() + k, w.data() + k, v[k], w[k], len + 1);
    diag[k] = row_k[k];

    // Householder vector for x = A[k, k+1 .. n-1].
    const double* x = row_k + k + 1;
    double scale = 0.0;
    for (std::size_t j = 0; j < len; ++j) scale = std::max(scale, std::abs(x[j]));
    double sigma = 0.0;
    if (scale > 0.0) {
      double ss = 0.0;
      for (std::size_t j = 0; j < len; ++j) {
        const double y = x[j] / scale;
        ss += y * y;
      }
      sigma = scale * std::sqrt(ss);
    }

    double* vn = new_v.data();
    double beta = 0.0;
    double tail = 0.0;
    for (std::size_t j = 1; j < len; ++j) tail = std::max(tail, std::abs(x[j]));
    if (sigma == 0.0 || tail == 0.0) {
      offdiag[k] = x[0];
      for (std::size_t j = 0; j < len; ++j) vn[j] = 0.0;
    } else {
      const double alpha = -std::copysign(sigma, x[0]);
      for (std::size_t j = 0; j < len; ++j) vn[j] = x[j];
      vn[0] -= alpha;
      beta = 1.0 / (sigma * (sigma + std::abs(x[0])));
      offdiag[k] = alpha;
    }

    // Rows of the trailing block: apply the deferred update, then p = beta B v.
    for (std::size_t i = 0; i < len; ++i) {
      const int gi = k + 1 + static_cast<int>(i);
      double* row = a.row(gi).data() + k + 1;
      double dotv;
      if (pending) {
        dotv = update_row_and_dot(row, v.data() + k + 1, w.data() + k + 1, v[gi], w[gi],
                                  new_v.data(), len);
      } else {
        double s = 0.0;
        for (std::size_t j = 0; j < len; ++j) s += row[j] * new_v[j];
        dotv = s;
      }
      pv[i] = beta * dotv;
    }

    if (beta == 0.0) {
      pending = false;
      continue;
    }
    double ptv = 0.0;
    for (std::size_t j = 0; j < len; ++j) ptv += pv[j] * new_v[j];
    const double kk = 0.5 * beta * ptv;
    for (std::size_t j = 0; j < len; ++j) {
      v[k + 1 + j] = new_v[j];
      w[k + 1 + j] = pv[j] - kk * new_v[j];
    }
    pending = true;
  }

  // Final 2 x 2 (or 1 x 1) block.
  const int start = std::max(n - 2, 0);
  for (int i = start; i < n; ++i) {
    double* row = a.row(i).data();
    if (pending) update_row(row + start, v.data() + start, w.data() + start, v[i], w[i], n - start);
  }
  diag[start] = a(start, start);
  if (n >= 2) {
    offdiag[n - 2] = a(n - 2, n - 1);
    diag[n - 1] = a(n - 1, n - 1);
  }
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> sub) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return d;
  if (static_cast<int>(sub.size()) != n - 1) throw ArgumentError("sub-diagonal must have length n - 1");
  std::vector<double> e(n, 0.0);
  std::copy(sub.begin(), sub.end(), e.begin());

  constexpr int kMaxIterations = 60;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxIterations)
          throw NumericError("tridiagonal QL did not converge at index " + std::to_string(l));
        // Wilkinson-type shift from the leading 2 x 2 block.
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> eigenvalues_symmetric(const SymmetricMatrix& a, double tol) {
  if (!(tol >= 64.0 * kEps)) throw ArgumentError("eigenvalue tolerance must be >= 64 * machine epsilon");
  double amax = 0.0;
  for (double x : a.data()) {
    if (!std::isfinite(x)) throw ArgumentError("matrix has non-finite entries");
    amax = std::max(amax, std::abs(x));
  }
  if (a.max_asymmetry() > 1e-12 * amax) throw ArgumentError("matrix is not symmetric");
  std::vector<double> diag, sub;
  householder_tridiagonalize(a, diag, sub);
  return tridiagonal_eigenvalues(std::move(diag), std::move(sub));
}

}  // namespace rmt
