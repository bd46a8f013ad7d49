#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "surfcr/errors.hpp"

namespace surfcr {

/// Square matrix in compressed sparse row layout with sorted column indices.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  /// Takes ownership of a prepared pattern; values start at zero.
  CsrMatrix(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<int> cols)
      : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), values_(cols_.size(), 0.0) {
    if (row_ptr_.size() != n_ + 1 || row_ptr_.back() != cols_.size()) throw Error("CsrMatrix: bad pattern");
  }

  struct Triplet {
    int row;
    int col;
    double value;
  };

  /// Duplicates are summed.
  static CsrMatrix from_triplets(std::size_t n, std::span<const Triplet> entries) {
    std::vector<std::vector<int>> pattern(n);
    for (const auto& t : entries) {
      if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= n || static_cast<std::size_t>(t.col) >= n) {
        throw IndexOutOfRange("CsrMatrix::from_triplets: index out of range");
      }
      pattern[static_cast<std::size_t>(t.row)].push_back(t.col);
    }
    std::vector<std::size_t> row_ptr{0};
    std::vector<int> cols;
    for (auto& row : pattern) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
      cols.insert(cols.end(), row.begin(), row.end());
      row_ptr.push_back(cols.size());
    }
    CsrMatrix m(n, std::move(row_ptr), std::move(cols));
    for (const auto& t : entries) m.add(static_cast<std::size_t>(t.row), t.col, t.value);
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const int> cols() const noexcept { return cols_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Position of (i, j) in the value array, or npos if not in the pattern.
  std::size_t find(std::size_t i, int j) const {
    const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return npos;
    return static_cast<std::size_t>(it - cols_.begin());
  }

  double at(std::size_t i, int j) const {
    const auto p = find(i, j);
    return p == npos ? 0.0 : values_[p];
  }

  void add(std::size_t i, int j, double v) {
    const auto p = find(i, j);
    if (p == npos) throw IndexOutOfRange("CsrMatrix::add outside the sparsity pattern");
    values_[p] += v;
  }

  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    y.resize(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += values_[p] * x[cols_[p]];
      y[static_cast<Eigen::Index>(i)] = s;
    }
  }

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y;
    multiply(x, y);
    return y;
  }

  Eigen::VectorXd diagonal() const {
    Eigen::VectorXd d(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) d[static_cast<Eigen::Index>(i)] = at(i, static_cast<int>(i));
    return d;
  }

  /// max |a_ij - a_ji| / max |a_ij|.
  double relative_asymmetry() const {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
        scale = std::max(scale, std::abs(values_[p]));
        const auto q = find(static_cast<std::size_t>(cols_[p]), static_cast<int>(i));
        const double mirror = q == npos ? 0.0 : values_[q];
        diff = std::max(diff, std::abs(values_[p] - mirror));
      }
    }
    return scale > 0.0 ? diff / scale : 0.0;
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> values_;
};

struct CgOptions {
  double tolerance = 1e-12;    // on |b - Ax| / |b|
  int max_iterations = -1;     // -1: 20 sqrt(n) + 200
  double symmetry_tolerance = 1e-12;
};

struct CgResult {
  Eigen::VectorXd solution;
  int iterations = 0;
  double relative_residual = 0.0;  // recomputed from b - Ax at exit
};

/// b - Ax with each row accumulated in extended precision. In plain double the
/// cancellation in Ax leaves a floor near 1e-11 relative on fine meshes.
inline Eigen::VectorXd accurate_residual(const CsrMatrix& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x) {
  Eigen::VectorXd r(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    long double s = b[static_cast<Eigen::Index>(i)];
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      s -= static_cast<long double>(a.values()[p]) * x[a.cols()[p]];
    }
    r[static_cast<Eigen::Index>(i)] = static_cast<double>(s);
  }
  return r;
}

/// Jacobi-preconditioned conjugate gradients. Rejects non-symmetric input and
/// stops with NotPositiveDefinite on a non-positive curvature p^T A p.
inline CgResult solve_cg(const CsrMatrix& a, const Eigen::VectorXd& b, const CgOptions& options = {}) {
  const auto n = static_cast<Eigen::Index>(a.size());
  if (b.size() != n) throw IndexOutOfRange("solve_cg: right-hand side size mismatch");
  if (a.relative_asymmetry() > options.symmetry_tolerance) throw NotSymmetric("solve_cg: matrix is not symmetric");
  const int max_it = options.max_iterations >= 0
                         ? options.max_iterations
                         : static_cast<int>(20.0 * std::sqrt(static_cast<double>(n))) + 200;

  CgResult result;
  result.solution = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return result;

  const Eigen::VectorXd d = a.diagonal();
  if ((d.array() <= 0.0).any()) throw NotPositiveDefinite("solve_cg: non-positive diagonal entry");
  const Eigen::VectorXd inv_diag = d.cwiseInverse();

  Eigen::VectorXd& x = result.solution;
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd q(n);
  double rz = r.dot(z);
  for (int it = 1; it <= max_it; ++it) {
    a.multiply(p, q);
    const double curvature = p.dot(q);
    if (!(curvature > 0.0)) throw NotPositiveDefinite("solve_cg: non-positive curvature");
    const double alpha = rz / curvature;
    x += alpha * p;
    r -= alpha * q;
    result.iterations = it;
    if (r.norm() <= options.tolerance * bnorm) {
      // Confirm with the true residual; restart from it if the recursion drifted.
      r = accurate_residual(a, b, x);
      result.relative_residual = r.norm() / bnorm;
      if (result.relative_residual <= options.tolerance) return result;
      z = inv_diag.cwiseProduct(r);
      p = z;
      rz = r.dot(z);
      continue;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  result.relative_residual = accurate_residual(a, b, x).norm() / bnorm;
  throw MaxIterations(result.iterations, result.relative_residual);
}

/// Lower triangle in MatrixMarket "coordinate real symmetric" format, 1-based.
inline void write_matrix_market(const CsrMatrix& a, std::ostream& os) {
  std::size_t lower = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) lower += a.cols()[p] <= static_cast<int>(i);
  }
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << a.size() << ' ' << a.size() << ' ' << lower << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      if (a.cols()[p] <= static_cast<int>(i)) os << i + 1 << ' ' << a.cols()[p] + 1 << ' ' << a.values()[p] << '\n';
    }
  }
  if (!os) throw IoError("failed writing MatrixMarket data");
}

inline void write_matrix_market(const CsrMatrix& a, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_matrix_market(a, os);
}

}  // namespace surfcr
