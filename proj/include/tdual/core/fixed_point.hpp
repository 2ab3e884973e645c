#pragma once

#include <cmath>
#include <vector>

#include "tdual/core/projective_action.hpp"

namespace tdual {

/// Orthonormal (for the summed Hilbert-Schmidt pairing) basis of the
/// equivariant fields between two acted spaces. Every basis element is
/// supported on a single orbit.
class EquivariantBasis {
 public:
  EquivariantBasis(SpacePtr source, SpacePtr target, std::vector<OperatorField> elements,
                   std::vector<std::size_t> element_orbit, std::size_t orbit_count)
      : source_(std::move(source)),
        target_(std::move(target)),
        elements_(std::move(elements)),
        element_orbit_(std::move(element_orbit)),
        by_orbit_(orbit_count) {
    for (std::size_t i = 0; i < elements_.size(); ++i) by_orbit_.at(element_orbit_[i]).push_back(i);
  }

  std::size_t dim() const { return elements_.size(); }
  const OperatorField& operator[](std::size_t i) const { return elements_.at(i); }
  const std::vector<OperatorField>& elements() const { return elements_; }
  std::size_t orbit_of_element(std::size_t i) const { return element_orbit_.at(i); }
  const std::vector<std::size_t>& elements_on_orbit(std::size_t k) const { return by_orbit_.at(k); }
  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }

  /// Coordinates of a field in this basis (its orthogonal projection's coefficients).
  Vector coordinates(const OperatorField& t) const {
    Vector c(static_cast<Index>(dim()));
    for (std::size_t i = 0; i < dim(); ++i) c(static_cast<Index>(i)) = elements_[i].hs_inner(t);
    return c;
  }

  OperatorField combine(const Vector& c) const {
    if (c.size() != static_cast<Index>(dim())) throw ShapeError("EquivariantBasis::combine: wrong coefficient count");
    OperatorField acc = OperatorField::zero(source_, target_);
    for (std::size_t i = 0; i < dim(); ++i) acc += c(static_cast<Index>(i)) * elements_[i];
    return acc;
  }

  OperatorField project(const OperatorField& t) const { return combine(coordinates(t)); }

 private:
  SpacePtr source_;
  SpacePtr target_;
  std::vector<OperatorField> elements_;
  std::vector<std::size_t> element_orbit_;
  std::vector<std::vector<std::size_t>> by_orbit_;
};

/// Basis of {S : w . S = S for all w}. On each orbit the condition reduces to
/// invariance of S(base) under the base point's stabilizer, a linear system
/// whose solution space is the image of the stabilizer average; the solutions
/// are then transported along the orbit.
inline EquivariantBasis equivariant_basis(const ProjectiveAction& target, const ProjectiveAction& source,
                                          double rtol = 1e-9) {
  require_compatible(target, source);
  const SpacePtr& ss = source.space();
  const SpacePtr& ts = target.space();
  std::vector<OperatorField> elems;
  std::vector<std::size_t> orbit_idx;
  for (std::size_t k = 0; k < target.orbit_count(); ++k) {
    const auto& orb = target.orbit(k);
    const std::size_t b = orb.front();
    const Index r = ts->dim(b), c = ss->dim(b);
    const auto stab = target.stabilizer(b);
    linalg::SpanBuilder span(r * c, std::max(rtol, 1e-10) * 10);
    for (Index j = 0; j < c && !span.full(); ++j)
      for (Index i = 0; i < r && !span.full(); ++i) {
        Matrix avg = Matrix::Zero(r, c);
        for (auto h : stab) avg += target.unitary(h, b).col(i) * source.unitary(h, b).col(j).adjoint();
        span.add(linalg::vec(avg));
      }
    const Matrix q = span.basis();
    const double norm = 1.0 / std::sqrt(static_cast<double>(orb.size()));
    for (Index m = 0; m < q.cols(); ++m) {
      const Matrix at_base = linalg::unvec(q.col(m), r, c);
      OperatorField f = OperatorField::zero(ss, ts);
      for (std::size_t y : orb) {
        const auto w = target.transport(y);
        f.set(y, norm * (target.unitary(w, b) * at_base * source.unitary(w, b).adjoint()));
      }
      elems.push_back(std::move(f));
      orbit_idx.push_back(k);
    }
  }
  return EquivariantBasis(ss, ts, std::move(elems), std::move(orbit_idx), target.orbit_count());
}

/// Basis of the fixed-point algebra of the conjugation action.
inline EquivariantBasis fixed_point_algebra(const ProjectiveAction& action, double rtol = 1e-9) {
  return equivariant_basis(action, action, rtol);
}

}  // namespace tdual
