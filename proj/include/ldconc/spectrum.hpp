// Dense symmetric eigenvalues (cyclic Jacobi) and operator norms.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ldconc {

/// Row-major dense matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw std::invalid_argument("matrix data size mismatch");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<std::complex<double>>;

inline constexpr std::size_t kMaxSpectrumOrder = 256;

struct EigenSystem {
  /// Eigenvalues in descending order.
  std::vector<double> values;
  /// Column k of `vectors` is the unit eigenvector of values[k] (if requested).
  RealMatrix vectors;
};

/// Eigen-decomposition of a real symmetric matrix by the cyclic Jacobi
/// method with a threshold on the first sweeps.
inline EigenSystem symmetric_eigensystem(RealMatrix a, bool want_vectors = true) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("matrix is not square");
  if (n > kMaxSpectrumOrder) throw std::length_error("matrix order above " + std::to_string(kMaxSpectrumOrder));
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument("matrix is not symmetric");

  RealMatrix v = want_vectors ? RealMatrix::identity(n) : RealMatrix();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      diag += a(p, p) * a(p, p);
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off == 0.0 || off <= 1e-34 * diag) break;
    const double threshold = sweep < 3 ? 0.2 * std::sqrt(off) / static_cast<double>(n * n) : 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= threshold) continue;
        const double small = 1e-18 * (std::abs(a(p, p)) + std::abs(a(q, q)));
        if (sweep > 3 && std::abs(apq) <= small) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v(k, p), vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  EigenSystem out;
  out.values.reserve(n);
  for (auto i : order) out.values.push_back(a(i, i));
  if (want_vectors) {
    out.vectors = RealMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

/// Eigenvalues of a real symmetric matrix, descending.
inline std::vector<double> symmetric_spectrum(const RealMatrix& a) {
  return symmetric_eigensystem(a, false).values;
}

/// Largest singular value of a real matrix.
inline double operator_norm(const RealMatrix& a) {
  const std::size_t n = a.rows(), m = a.cols();
  if (n * m > (std::size_t{1} << 16)) throw std::length_error("matrix too large for operator_norm");
  if (n == 0 || m == 0) return 0.0;
  // Gram matrix on the smaller side.
  const bool left = n <= m;
  const std::size_t d = left ? n : m;
  RealMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      if (left) for (std::size_t k = 0; k < m; ++k) s += a(i, k) * a(j, k);
      else for (std::size_t k = 0; k < n; ++k) s += a(k, i) * a(k, j);
      g(i, j) = g(j, i) = s;
    }
  return std::sqrt(std::max(0.0, symmetric_spectrum(g).front()));
}

/// Largest singular value of a complex matrix via the real embedding
/// [[Re A, -Im A], [Im A, Re A]], whose singular values are those of A.
inline double operator_norm(const ComplexMatrix& a) {
  const std::size_t n = a.rows(), m = a.cols();
  if (n * m > (std::size_t{1} << 16)) throw std::length_error("matrix too large for operator_norm");
  RealMatrix e(2 * n, 2 * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double re = a(i, j).real(), im = a(i, j).imag();
      e(i, j) = re;
      e(i, j + m) = -im;
      e(i + n, j) = im;
      e(i + n, j + m) = re;
    }
  return operator_norm(e);
}

/// max |λ| for a real symmetric matrix.
inline double symmetric_norm(const RealMatrix& a) {
  const auto ev = symmetric_spectrum(a);
  return ev.empty() ? 0.0 : std::max(std::abs(ev.front()), std::abs(ev.back()));
}

/// Builds the symmetric matrix whose upper triangle (row-major, i <= j) is `upper`.
inline RealMatrix symmetric_from_upper(std::size_t n, const std::vector<double>& upper) {
  if (upper.size() != n * (n + 1) / 2) throw std::invalid_argument("upper-triangle length mismatch");
  RealMatrix m(n, n);
  std::size_t p = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j, ++p) m(i, j) = m(j, i) = upper[p];
  return m;
}

}  // namespace ldconc
