#pragma once

// Dense complex linear-algebra helpers shared by every module.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tdual {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes, bases or indices do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural requirement (unitarity, invariance, positivity, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

namespace linalg {

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Largest singular value.
inline double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix g = m.rows() <= m.cols() ? Matrix(m * m.adjoint()) : Matrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline double unitarity_defect(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

/// Orthonormal basis (columns) of the numerical kernel of `a`.
/// A direction is null when its singular value is below rtol * max(1, sigma_max).
inline Matrix null_space(const Matrix& a, double rtol = 1e-9) {
  const Index n = a.cols();
  if (n == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = rtol * std::max(1.0, s.size() ? s(0) : 0.0);
  Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixV().rightCols(n - r);
}

/// Orthonormal basis of the column span of `a`, dropping singular values
/// below rtol * sigma_max.
inline Matrix orth(const Matrix& a, double rtol = 1e-9) {
  if (a.cols() == 0 || a.rows() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return Matrix(a.rows(), 0);
  Index r = 0;
  while (r < s.size() && s(r) > rtol * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

inline Index numerical_rank(const Matrix& a, double rtol = 1e-9) { return orth(a, rtol).cols(); }

/// Operator-norm distance between the orthogonal projectors onto two spans,
/// each given by an orthonormal column basis.
inline double span_distance(const Matrix& qa, const Matrix& qb) {
  if (qa.rows() != qb.rows()) throw ShapeError("span_distance: ambient dimensions differ");
  if (qa.cols() == 0 && qb.cols() == 0) return 0.0;
  const Matrix pa = qa * qa.adjoint();
  const Matrix pb = qb * qb.adjoint();
  return op_norm(pa - pb);
}

/// Column-major vectorization.
inline Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

inline Matrix unvec(const Vector& v, Index rows, Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Square root of a positive semidefinite Hermitian matrix. Eigenvalues below
/// rtol * lambda_max are treated as zero, so that rounding noise in a kernel
/// does not turn into O(sqrt(eps)) garbage.
inline Matrix psd_sqrt(const Matrix& m, double rtol = 1e-12) {
  if (m.size() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  const double cut = rtol * std::max(0.0, es.eigenvalues().maxCoeff());
  Eigen::VectorXd ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) > cut ? std::sqrt(ev(i)) : 0.0;
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Spectral projection of a Hermitian matrix onto eigenvalues strictly above `threshold`.
inline Matrix positive_projection(const Matrix& h, double threshold = 0.0) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  Matrix p = Matrix::Zero(h.rows(), h.cols());
  for (Index i = 0; i < h.rows(); ++i)
    if (es.eigenvalues()(i) > threshold) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return p;
}

/// Groups sorted eigenvalues into clusters whose consecutive gaps are <= tol.
/// Returns [begin, end) index ranges.
inline std::vector<std::pair<Index, Index>> cluster_sorted(const Eigen::VectorXd& ev, double tol) {
  std::vector<std::pair<Index, Index>> out;
  Index start = 0;
  for (Index i = 1; i <= ev.size(); ++i) {
    if (i == ev.size() || ev(i) - ev(i - 1) > tol) {
      out.emplace_back(start, i);
      start = i;
    }
  }
  return out;
}

/// Incrementally grown orthonormal basis of a subspace of C^n (modified Gram-Schmidt
/// with one reorthogonalization pass).
class SpanBuilder {
 public:
  explicit SpanBuilder(Index ambient, double rtol = 1e-8) : ambient_(ambient), rtol_(rtol) {}

  /// Adds `v` if its component orthogonal to the current span exceeds
  /// rtol times the largest norm seen so far; returns true when the span grew.
  bool add(const Vector& v) {
    if (v.size() != ambient_) throw ShapeError("SpanBuilder: wrong vector length");
    const double n0 = v.norm();
    if (n0 == 0.0 || full()) return false;
    scale_ = std::max(scale_, n0);
    Vector r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis_) r -= q * q.dot(r);
    const double rn = r.norm();
    if (rn <= rtol_ * scale_) return false;
    basis_.push_back(r / rn);
    return true;
  }

  Index dim() const { return static_cast<Index>(basis_.size()); }
  bool full() const { return dim() == ambient_; }

  Matrix basis() const {
    Matrix out(ambient_, dim());
    for (Index j = 0; j < dim(); ++j) out.col(j) = basis_[static_cast<std::size_t>(j)];
    return out;
  }

 private:
  Index ambient_;
  double rtol_;
  double scale_ = 0.0;
  std::vector<Vector> basis_;
};

}  // namespace linalg
}  // namespace tdual
