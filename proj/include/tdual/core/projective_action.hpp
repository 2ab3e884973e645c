#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tdual/core/finite_group.hpp"
#include "tdual/core/operator_field.hpp"

namespace tdual {

/// A finite group acting on a fibered space: by permutations of the base and,
/// fiberwise, by unitaries U_w(x) : H_x -> H_{w.x}. The unitaries need only
/// compose up to modulus-one scalars:
///
///   U_z(w.x) U_w(x) = c(z, w, x) U_{zw}(x),   |c| = 1.
///
/// The scalars are checked at construction and then forgotten, since the
/// conjugation action does not see them.
class ProjectiveAction {
 public:
  using Elem = FiniteGroup::Elem;

  ProjectiveAction(FiniteGroup group, SpacePtr space, std::vector<std::vector<std::size_t>> perm,
                   std::vector<std::vector<Matrix>> unitaries, double tol = 1e-9)
      : group_(std::move(group)), space_(std::move(space)), perm_(std::move(perm)), unitaries_(std::move(unitaries)) {
    if (!space_) throw ShapeError("ProjectiveAction: null space");
    validate(tol);
    build_orbits();
  }

  /// The trivial group acting trivially.
  static ProjectiveAction trivial(SpacePtr space) {
    const std::size_t n = space->size();
    std::vector<std::size_t> id(n);
    std::vector<Matrix> us;
    for (std::size_t x = 0; x < n; ++x) {
      id[x] = x;
      us.push_back(Matrix::Identity(space->dim(x), space->dim(x)));
    }
    return ProjectiveAction(FiniteGroup::trivial(), std::move(space), {id}, {us});
  }

  const FiniteGroup& group() const { return group_; }
  const SpacePtr& space() const { return space_; }
  std::size_t order() const { return group_.order(); }

  std::size_t act(Elem w, std::size_t x) const { return perm_.at(w).at(x); }
  const Matrix& unitary(Elem w, std::size_t x) const { return unitaries_.at(w).at(x); }
  const std::vector<std::vector<std::size_t>>& perm() const { return perm_; }
  const std::vector<std::vector<Matrix>>& unitaries() const { return unitaries_; }

  /// The scalar c(z, w, x) of the cocycle relation (recomputed, not cached).
  cplx cocycle_scalar(Elem z, Elem w, std::size_t x) const {
    const Matrix lhs = unitary(z, act(w, x)) * unitary(w, x);
    const Matrix& rhs = unitary(group_.mul(z, w), x);
    return (rhs.adjoint() * lhs).trace() / static_cast<double>(rhs.rows());
  }

  // Orbit structure. Orbits are listed in order of their smallest point,
  // which is the orbit's base point.
  std::size_t orbit_count() const { return orbits_.size(); }
  const std::vector<std::size_t>& orbit(std::size_t k) const { return orbits_.at(k); }
  const std::vector<std::vector<std::size_t>>& orbits() const { return orbits_; }
  std::size_t orbit_of(std::size_t x) const { return orbit_of_.at(x); }
  std::size_t base_point(std::size_t k) const { return orbits_.at(k).front(); }
  /// The first group element (in element order) carrying the base point of x's orbit to x.
  Elem transport(std::size_t x) const { return transport_.at(x); }

  std::vector<Elem> stabilizer(std::size_t x) const {
    std::vector<Elem> out;
    for (Elem w = 0; w < order(); ++w)
      if (act(w, x) == x) out.push_back(w);
    return out;
  }

 private:
  void validate(double tol) {
    const std::size_t n = space_->size();
    const std::size_t g = group_.order();
    if (perm_.size() != g || unitaries_.size() != g)
      throw ShapeError("ProjectiveAction: one permutation and one unitary list per group element required");
    for (Elem w = 0; w < g; ++w) {
      if (perm_[w].size() != n || unitaries_[w].size() != n)
        throw ShapeError("ProjectiveAction: permutation/unitary list has wrong length");
      std::vector<bool> hit(n, false);
      for (std::size_t x = 0; x < n; ++x) {
        const std::size_t y = perm_[w][x];
        if (y >= n || hit[y]) throw ValidationError("ProjectiveAction: element " + group_.name(w) + " is not a permutation");
        hit[y] = true;
        if (space_->dim(y) != space_->dim(x))
          throw ValidationError("ProjectiveAction: fiber dimension not constant on an orbit");
        const Matrix& u = unitaries_[w][x];
        if (u.rows() != space_->dim(x) || u.cols() != space_->dim(x))
          throw ShapeError("ProjectiveAction: unitary has wrong shape");
        if (linalg::unitarity_defect(u) > tol)
          throw ValidationError("ProjectiveAction: U(" + group_.name(w) + ", " + space_->base()[x].label +
                                ") is not unitary");
      }
    }
    const Elem e = group_.identity();
    for (std::size_t x = 0; x < n; ++x)
      if (perm_[e][x] != x) throw ValidationError("ProjectiveAction: identity does not act trivially");
    for (Elem z = 0; z < g; ++z)
      for (Elem w = 0; w < g; ++w)
        for (std::size_t x = 0; x < n; ++x) {
          if (perm_[z][perm_[w][x]] != perm_[group_.mul(z, w)][x])
            throw ValidationError("ProjectiveAction: permutations violate the action law");
          const Matrix lhs = unitaries_[z][perm_[w][x]] * unitaries_[w][x];
          const Matrix& rhs = unitaries_[group_.mul(z, w)][x];
          const cplx c = (rhs.adjoint() * lhs).trace() / static_cast<double>(rhs.rows());
          if (std::abs(std::abs(c) - 1.0) > tol || linalg::max_abs(lhs - c * rhs) > tol)
            throw ValidationError("ProjectiveAction: cocycle law fails beyond a scalar at point " +
                                  space_->base()[x].label);
        }
  }

  void build_orbits() {
    const std::size_t n = space_->size();
    orbit_of_.assign(n, n);
    transport_.assign(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      if (orbit_of_[x] != n) continue;
      std::vector<std::size_t> orb;
      std::vector<bool> seen(n, false);
      for (Elem w = 0; w < order(); ++w) {
        const std::size_t y = act(w, x);
        if (!seen[y]) {
          seen[y] = true;
          orb.push_back(y);
          transport_[y] = w;
        }
      }
      std::sort(orb.begin(), orb.end());
      for (std::size_t y : orb) orbit_of_[y] = orbits_.size();
      orbits_.push_back(std::move(orb));
    }
  }

  FiniteGroup group_;
  SpacePtr space_;
  std::vector<std::vector<std::size_t>> perm_;
  std::vector<std::vector<Matrix>> unitaries_;
  std::vector<std::vector<std::size_t>> orbits_;
  std::vector<std::size_t> orbit_of_;
  std::vector<Elem> transport_;
};

using ActionPtr = std::shared_ptr<const ProjectiveAction>;

/// Throws unless the two actions are by the same group with the same base
/// permutations and the same cocycle scalars (so that rectangular fields
/// between them carry an honest linear action).
inline void require_compatible(const ProjectiveAction& target, const ProjectiveAction& source, double tol = 1e-9) {
  if (target.order() != source.order() || target.group().table() != source.group().table())
    throw ShapeError("actions are by different groups");
  if (target.perm() != source.perm()) throw ShapeError("actions permute the base differently");
  if (!target.space()->same_base(*source.space())) throw ShapeError("actions live on different bases");
  for (std::size_t z = 0; z < target.order(); ++z)
    for (std::size_t w = 0; w < target.order(); ++w)
      for (std::size_t x = 0; x < target.space()->size(); ++x)
        if (std::abs(target.cocycle_scalar(z, w, x) - source.cocycle_scalar(z, w, x)) > tol)
          throw ValidationError("actions carry different cocycle scalars");
}

/// (w . S)(w.x) = U^t_w(x) S(x) U^s_w(x)^*  for a field S from the source
/// space to the target space.
inline OperatorField transform(const ProjectiveAction& target, const ProjectiveAction& source,
                               FiniteGroup::Elem w, const OperatorField& s) {
  target.group().require(w);
  if (!(*s.source() == *source.space()) || !(*s.target() == *target.space()))
    throw ShapeError("transform: field does not map between the acted spaces");
  std::vector<Matrix> out(s.size());
  for (std::size_t x = 0; x < s.size(); ++x) {
    const std::size_t y = target.act(w, x);
    out[y] = target.unitary(w, x) * s[x] * source.unitary(w, x).adjoint();
  }
  return OperatorField(s.source(), s.target(), std::move(out));
}

/// Ad_w T at y equals U_w(w^-1 y) T(w^-1 y) U_w(w^-1 y)^*.
inline OperatorField ad_action(const ProjectiveAction& action, FiniteGroup::Elem w, const OperatorField& t) {
  return transform(action, action, w, t);
}

/// (1/|W|) sum_w w . S, summed in group-element order.
inline OperatorField average(const ProjectiveAction& target, const ProjectiveAction& source, const OperatorField& s) {
  OperatorField acc = OperatorField::zero(s.source(), s.target());
  for (std::size_t w = 0; w < target.order(); ++w) acc += transform(target, source, w, s);
  return (1.0 / static_cast<double>(target.order())) * acc;
}

inline OperatorField average(const ProjectiveAction& action, const OperatorField& t) {
  return average(action, action, t);
}

/// Largest deviation max_w ||w . S - S|| (zero exactly for equivariant fields).
inline double equivariance_defect(const ProjectiveAction& target, const ProjectiveAction& source, const OperatorField& s) {
  double d = 0.0;
  for (std::size_t w = 0; w < target.order(); ++w) d = std::max(d, (transform(target, source, w, s) - s).norm());
  return d;
}

inline double invariance_defect(const ProjectiveAction& action, const OperatorField& t) {
  return equivariance_defect(action, action, t);
}

}  // namespace tdual
