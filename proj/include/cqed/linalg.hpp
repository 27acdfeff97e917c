#pragma once

// Real symmetric eigensolvers. The tridiagonal path (implicit QL) and the dense path
// (cyclic Jacobi) share no numerical code so each can serve as the other's oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cqed/errors.hpp"

namespace cqed {

/// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  /// Largest absolute entry.
  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;  // length diag.size() - 1

  std::size_t size() const noexcept { return diag.size(); }

  void validate() const {
    if (diag.empty()) throw ValidationError("SymTridiagonal: empty diagonal");
    if (offdiag.size() + 1 != diag.size()) {
      throw ValidationError("SymTridiagonal: off-diagonal length " + std::to_string(offdiag.size()) +
                            " does not match diagonal length " + std::to_string(diag.size()));
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(diag.begin(), diag.end(), finite) || !std::all_of(offdiag.begin(), offdiag.end(), finite)) {
      throw ValidationError("SymTridiagonal: non-finite entry");
    }
  }

  Matrix to_dense() const {
    const std::size_t n = size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
    for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = offdiag[i];
    return m;
  }
};

/// Lowest-k eigenpairs, ascending. `vectors[i]` pairs with `values[i]`; empty when not requested.
struct EigenResult {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

namespace detail {

inline void sort_eigenpairs(std::vector<double>& values, Matrix* vecs_by_column, std::size_t k,
                            EigenResult& out) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  out.values.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.values[i] = values[order[i]];
  if (vecs_by_column != nullptr) {
    out.vectors.assign(k, std::vector<double>(n));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t r = 0; r < n; ++r) out.vectors[i][r] = (*vecs_by_column)(r, order[i]);
  }
}

inline void check_count(std::size_t k, std::size_t n, const char* who) {
  if (k < 1 || k > n) {
    throw DomainError(std::string(who) + ": requested " + std::to_string(k) + " eigenpairs of a " +
                      std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
}

}  // namespace detail

/// Residual ||A v - lambda v|| for a tridiagonal A.
inline double tridiagonal_residual(const SymTridiagonal& m, std::span<const double> v, double lambda) {
  const std::size_t n = m.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = (m.diag[i] - lambda) * v[i];
    if (i > 0) r += m.offdiag[i - 1] * v[i - 1];
    if (i + 1 < n) r += m.offdiag[i] * v[i + 1];
    s += r * r;
  }
  return std::sqrt(s);
}

inline double dense_residual(const Matrix& a, std::span<const double> v, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double r = -lambda * v[i];
    for (std::size_t j = 0; j < a.cols(); ++j) r += a(i, j) * v[j];
    s += r * r;
  }
  return std::sqrt(s);
}

/// Implicit-shift QL with Wilkinson shifts on the full spectrum, truncated to the k lowest.
/// With `want_vectors == false` only eigenvalues are computed (O(N^2)).
inline EigenResult eigh_tridiagonal(const SymTridiagonal& m, std::size_t k, bool want_vectors = true) {
  m.validate();
  const std::size_t n = m.size();
  detail::check_count(k, n, "eigh_tridiagonal");

  std::vector<double> d = m.diag;
  std::vector<double> e(n, 0.0);
  std::copy(m.offdiag.begin(), m.offdiag.end(), e.begin());  // e[i] couples i and i+1; e[n-1] = 0
  Matrix z = want_vectors ? Matrix::identity(n) : Matrix();

  constexpr int kMaxIterations = 60;
  constexpr double eps = 2.220446049250313e-16;
  for (std::size_t l = 0; l < n; ++l) {
    int iterations = 0;
    for (;;) {
      std::size_t mm = l;
      for (; mm + 1 < n; ++mm) {
        const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm]) <= eps * dd) break;
      }
      if (mm == l) break;
      if (++iterations > kMaxIterations) {
        double worst = 0.0;
        for (std::size_t i = l; i + 1 < n; ++i) worst = std::max(worst, std::abs(e[i]));
        throw ConvergenceError("eigh_tridiagonal: QL iteration did not converge", worst);
      }
      // Wilkinson shift from the leading 2x2 block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (std::size_t i = mm; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[mm] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (want_vectors) {
          for (std::size_t row = 0; row < n; ++row) {
            f = z(row, i + 1);
            z(row, i + 1) = s * z(row, i) + c * f;
            z(row, i) = c * z(row, i) - s * f;
          }
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[mm] = 0.0;
    }
  }

  EigenResult out;
  detail::sort_eigenpairs(d, want_vectors ? &z : nullptr, k, out);
  if (want_vectors) {
    double worst = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < k; ++i) {
      const double res = tridiagonal_residual(m, out.vectors[i], out.values[i]);
      worst = std::max(worst, res);
      if (res > 1e-10 * std::max(1.0, std::abs(out.values[i]))) ok = false;
    }
    if (!ok) throw ConvergenceError("eigh_tridiagonal: residual bound violated", worst);
  }
  return out;
}

/// Cyclic Jacobi rotations on a dense symmetric matrix; k lowest eigenpairs.
inline EigenResult eigh_dense(const Matrix& m, std::size_t k) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() != n) throw ValidationError("eigh_dense: matrix must be square and non-empty");
  detail::check_count(k, n, "eigh_dense");
  const double scale = m.max_abs();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!std::isfinite(m(i, j)) || !std::isfinite(m(j, i))) throw ValidationError("eigh_dense: non-finite entry");
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        throw ValidationError("eigh_dense: matrix is not symmetric at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      }
    }

  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  Matrix v = Matrix::identity(n);
  const double norm = a.frobenius_norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  double previous = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double current = off_norm();
    // Stop once well below target, or when rounding noise stalls further progress.
    if (current <= 1e-14 * norm || current >= previous) break;
    previous = current;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = a(p, r);
          const double aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }
  if (off_norm() > 1e-12 * std::max(norm, 1e-300)) {
    throw ConvergenceError("eigh_dense: Jacobi sweeps did not converge", off_norm());
  }

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  EigenResult out;
  detail::sort_eigenpairs(d, &v, k, out);
  return out;
}

}  // namespace cqed
