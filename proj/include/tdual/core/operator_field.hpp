#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "tdual/core/base_space.hpp"
#include "tdual/core/linalg.hpp"

namespace tdual {

/// Fiberwise vector: one column vector per base point.
class VectorField {
 public:
  VectorField(SpacePtr space, std::vector<Vector> values) : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw ShapeError("VectorField: null space");
    if (values_.size() != space_->size()) throw ShapeError("VectorField: one value per point required");
    for (std::size_t x = 0; x < values_.size(); ++x)
      if (values_[x].size() != space_->dim(x)) throw ShapeError("VectorField: fiber dimension mismatch");
  }

  static VectorField zero(SpacePtr space) {
    std::vector<Vector> v;
    for (std::size_t x = 0; x < space->size(); ++x) v.push_back(Vector::Zero(space->dim(x)));
    return VectorField(std::move(space), std::move(v));
  }

  const SpacePtr& space() const { return space_; }
  const Vector& operator[](std::size_t x) const { return values_.at(x); }
  std::size_t size() const { return values_.size(); }

 private:
  SpacePtr space_;
  std::vector<Vector> values_;
};

/// Fiberwise linear map between two fibered spaces over a common base:
/// at each point x a matrix of shape target.dim(x) x source.dim(x).
class OperatorField {
 public:
  OperatorField(SpacePtr source, SpacePtr target, std::vector<Matrix> mats)
      : source_(std::move(source)), target_(std::move(target)), mats_(std::move(mats)) {
    if (!source_ || !target_) throw ShapeError("OperatorField: null space");
    if (!source_->same_base(*target_)) throw ShapeError("OperatorField: source and target bases differ");
    if (mats_.size() != source_->size()) throw ShapeError("OperatorField: one matrix per point required");
    for (std::size_t x = 0; x < mats_.size(); ++x)
      if (mats_[x].rows() != target_->dim(x) || mats_[x].cols() != source_->dim(x))
        throw ShapeError("OperatorField: matrix shape mismatch at point " + std::to_string(x));
  }

  static OperatorField zero(SpacePtr source, SpacePtr target) {
    std::vector<Matrix> m;
    for (std::size_t x = 0; x < source->size(); ++x) m.push_back(Matrix::Zero(target->dim(x), source->dim(x)));
    return OperatorField(std::move(source), std::move(target), std::move(m));
  }

  static OperatorField zero(const SpacePtr& space) { return zero(space, space); }

  static OperatorField identity(const SpacePtr& space) {
    std::vector<Matrix> m;
    for (std::size_t x = 0; x < space->size(); ++x) m.push_back(Matrix::Identity(space->dim(x), space->dim(x)));
    return OperatorField(space, space, std::move(m));
  }

  /// Field equal to `m` at point x and zero elsewhere.
  static OperatorField at_point(SpacePtr source, SpacePtr target, std::size_t x, Matrix m) {
    OperatorField f = zero(std::move(source), std::move(target));
    f.set(x, std::move(m));
    return f;
  }

  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  std::size_t size() const { return mats_.size(); }
  const Matrix& operator[](std::size_t x) const { return mats_.at(x); }
  const std::vector<Matrix>& mats() const { return mats_; }
  bool is_endomorphism() const { return *source_ == *target_; }

  void set(std::size_t x, Matrix m) {
    if (m.rows() != target_->dim(x) || m.cols() != source_->dim(x)) throw ShapeError("OperatorField::set: shape mismatch");
    mats_.at(x) = std::move(m);
  }

  OperatorField adjoint() const {
    std::vector<Matrix> m;
    m.reserve(mats_.size());
    for (const auto& a : mats_) m.push_back(a.adjoint());
    return OperatorField(target_, source_, std::move(m));
  }

  /// Operator norm: the largest singular value over all points.
  double norm() const {
    double n = 0.0;
    for (const auto& a : mats_) n = std::max(n, linalg::op_norm(a));
    return n;
  }

  double max_abs() const {
    double n = 0.0;
    for (const auto& a : mats_) n = std::max(n, linalg::max_abs(a));
    return n;
  }

  /// Hilbert-Schmidt pairing summed over points: sum_x Tr(A(x)* B(x)).
  cplx hs_inner(const OperatorField& other) const {
    require_same_shape(other);
    cplx s = 0.0;
    for (std::size_t x = 0; x < mats_.size(); ++x) s += (mats_[x].adjoint() * other.mats_[x]).trace();
    return s;
  }

  void require_same_shape(const OperatorField& other) const {
    if (!(*source_ == *other.source_) || !(*target_ == *other.target_))
      throw ShapeError("OperatorField: operands live on different spaces");
  }

  friend OperatorField operator+(const OperatorField& a, const OperatorField& b) {
    a.require_same_shape(b);
    std::vector<Matrix> m;
    for (std::size_t x = 0; x < a.size(); ++x) m.push_back(a.mats_[x] + b.mats_[x]);
    return OperatorField(a.source_, a.target_, std::move(m));
  }

  friend OperatorField operator-(const OperatorField& a, const OperatorField& b) {
    a.require_same_shape(b);
    std::vector<Matrix> m;
    for (std::size_t x = 0; x < a.size(); ++x) m.push_back(a.mats_[x] - b.mats_[x]);
    return OperatorField(a.source_, a.target_, std::move(m));
  }

  friend OperatorField operator*(cplx s, const OperatorField& a) {
    std::vector<Matrix> m;
    for (const auto& v : a.mats_) m.push_back(s * v);
    return OperatorField(a.source_, a.target_, std::move(m));
  }

  /// Composition: (a * b)(x) = a(x) b(x); requires a.source == b.target.
  friend OperatorField operator*(const OperatorField& a, const OperatorField& b) {
    if (!(*a.source_ == *b.target_)) throw ShapeError("OperatorField: composition of incompatible fields");
    std::vector<Matrix> m;
    for (std::size_t x = 0; x < a.size(); ++x) m.push_back(a.mats_[x] * b.mats_[x]);
    return OperatorField(b.source_, a.target_, std::move(m));
  }

  OperatorField& operator+=(const OperatorField& b) { return *this = *this + b; }

  /// Stacks all matrices (column-major) into one coordinate vector.
  Vector flatten() const {
    Index n = 0;
    for (const auto& a : mats_) n += a.size();
    Vector v(n);
    Index off = 0;
    for (const auto& a : mats_) {
      v.segment(off, a.size()) = linalg::vec(a);
      off += a.size();
    }
    return v;
  }

  static OperatorField unflatten(SpacePtr source, SpacePtr target, const Vector& v) {
    std::vector<Matrix> m;
    Index off = 0;
    for (std::size_t x = 0; x < source->size(); ++x) {
      const Index r = target->dim(x), c = source->dim(x);
      if (off + r * c > v.size()) throw ShapeError("OperatorField::unflatten: vector too short");
      m.push_back(linalg::unvec(v.segment(off, r * c), r, c));
      off += r * c;
    }
    if (off != v.size()) throw ShapeError("OperatorField::unflatten: vector too long");
    return OperatorField(std::move(source), std::move(target), std::move(m));
  }

 private:
  SpacePtr source_;
  SpacePtr target_;
  std::vector<Matrix> mats_;
};

/// The elementary operator x -> v2(x) v1(x)^*, mapping v to v2 <v1, v> pointwise.
inline OperatorField rank_one(const VectorField& v2, const VectorField& v1) {
  if (!v2.space()->same_base(*v1.space())) throw ShapeError("rank_one: vector fields over different bases");
  std::vector<Matrix> m;
  for (std::size_t x = 0; x < v1.size(); ++x) m.push_back(v2[x] * v1[x].adjoint());
  return OperatorField(v1.space(), v2.space(), std::move(m));
}

}  // namespace tdual
