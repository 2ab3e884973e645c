#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tdual/core/direct_sum.hpp"
#include "tdual/core/fixed_point.hpp"
#include "tdual/core/rng.hpp"

namespace tdual {

/// One block of the Levi on which sigma lives, for GL-type components:
/// its size, its sigma label and the block of the ambient Levi containing it.
struct SigmaBlock {
  std::string sigma;
  int size = 1;
  Index dim = 1;
  std::size_t ambient = 0;

  friend bool operator==(const SigmaBlock&, const SigmaBlock&) = default;
};

/// A summand C(X, End H)^W of the algebra model: a grid X with induced fibers
/// H and a projective action of the stabilizer group W_sigma.
class Component {
 public:
  Component(std::string id, std::string parabolic, std::string sigma, ProjectiveAction action,
            std::vector<double> weights = {}, std::vector<SigmaBlock> blocks = {})
      : id_(std::move(id)),
        parabolic_(std::move(parabolic)),
        sigma_(std::move(sigma)),
        action_(std::make_shared<const ProjectiveAction>(std::move(action))),
        weights_(std::move(weights)),
        blocks_(std::move(blocks)) {
    action_->space()->require_positive();
    const std::size_t n = action_->space()->size();
    if (weights_.empty()) weights_.assign(n, 1.0);
    if (weights_.size() != n) throw ShapeError("component '" + id_ + "': one Plancherel weight per grid point required");
    for (std::size_t x = 0; x < n; ++x) {
      if (!std::isfinite(weights_[x]) || weights_[x] < 0.0)
        throw ValidationError("component '" + id_ + "': Plancherel weights must be finite and nonnegative");
      for (std::size_t w = 0; w < action_->order(); ++w)
        if (std::abs(weights_[action_->act(w, x)] - weights_[x]) > 1e-12 * std::max(1.0, weights_[x]))
          throw ValidationError("component '" + id_ + "': Plancherel weights are not invariant");
    }
    basis_ = std::make_shared<const EquivariantBasis>(fixed_point_algebra(*action_));
  }

  const std::string& id() const { return id_; }
  const std::string& parabolic() const { return parabolic_; }
  const std::string& sigma() const { return sigma_; }
  const ProjectiveAction& action() const { return *action_; }
  const ActionPtr& action_ptr() const { return action_; }
  const SpacePtr& space() const { return action_->space(); }
  const BaseSpace& grid() const { return action_->space()->base(); }
  std::size_t group_order() const { return action_->order(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<SigmaBlock>& blocks() const { return blocks_; }

  /// Orthonormal basis of the fixed-point algebra, one orbit per element.
  const EquivariantBasis& basis() const { return *basis_; }

 private:
  std::string id_;
  std::string parabolic_;
  std::string sigma_;
  ActionPtr action_;
  std::vector<double> weights_;
  std::vector<SigmaBlock> blocks_;
  std::shared_ptr<const EquivariantBasis> basis_;
};

/// The reduced C*-algebra model: a finite direct sum of fixed-point algebras.
class AlgebraModel {
 public:
  AlgebraModel() = default;
  AlgebraModel(std::string name, std::vector<Component> components)
      : name_(std::move(name)), components_(std::move(components)) {
    for (std::size_t i = 0; i < components_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (components_[i].id() == components_[j].id())
          throw ValidationError("model '" + name_ + "': duplicate component id '" + components_[i].id() + "'");
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return components_.size(); }
  bool empty() const { return components_.empty(); }
  const Component& operator[](std::size_t c) const { return components_.at(c); }
  const std::vector<Component>& components() const { return components_; }

  std::optional<std::size_t> index_of(const std::string& id) const {
    for (std::size_t c = 0; c < components_.size(); ++c)
      if (components_[c].id() == id) return c;
    return std::nullopt;
  }

  std::size_t require(const std::string& id) const {
    auto c = index_of(id);
    if (!c) throw ValidationError("model '" + name_ + "' has no component '" + id + "'");
    return *c;
  }

 private:
  std::string name_;
  std::vector<Component> components_;
};

using ModelPtr = std::shared_ptr<const AlgebraModel>;

/// An element of the model: one invariant endomorphism field per component.
class AlgebraElement {
 public:
  AlgebraElement(ModelPtr model, DirectSum<OperatorField> parts) : model_(std::move(model)), parts_(std::move(parts)) {
    if (parts_.size() != model_->size()) throw ShapeError("AlgebraElement: one field per component required");
    for (std::size_t c = 0; c < parts_.size(); ++c)
      if (!(*parts_[c].source() == *(*model_)[c].space()) || !(*parts_[c].target() == *(*model_)[c].space()))
        throw ShapeError("AlgebraElement: field of component '" + (*model_)[c].id() + "' has the wrong shape");
  }

  static AlgebraElement zero(const ModelPtr& model) {
    std::vector<OperatorField> f;
    for (const auto& c : model->components()) f.push_back(OperatorField::zero(c.space()));
    return AlgebraElement(model, DirectSum<OperatorField>(std::move(f)));
  }

  static AlgebraElement identity(const ModelPtr& model) {
    std::vector<OperatorField> f;
    for (const auto& c : model->components()) f.push_back(OperatorField::identity(c.space()));
    return AlgebraElement(model, DirectSum<OperatorField>(std::move(f)));
  }

  /// The element equal to `field` on component c and zero elsewhere; the
  /// field must be invariant.
  static AlgebraElement on_component(const ModelPtr& model, std::size_t c, OperatorField field, double tol = 1e-9) {
    if (tdual::invariance_defect((*model)[c].action(), field) > tol * std::max(1.0, field.norm()))
      throw ValidationError("AlgebraElement: field on component '" + (*model)[c].id() + "' is not invariant");
    AlgebraElement a = zero(model);
    a.parts_[c] = std::move(field);
    return a;
  }

  /// Gaussian combination of the fixed-point basis, on every component or on one.
  static AlgebraElement random(const ModelPtr& model, Rng& rng) {
    std::vector<OperatorField> f;
    for (const auto& c : model->components())
      f.push_back(c.basis().combine(rng.gaussian_vector(static_cast<Index>(c.basis().dim()))));
    return AlgebraElement(model, DirectSum<OperatorField>(std::move(f)));
  }

  static AlgebraElement random_on(const ModelPtr& model, std::size_t c, Rng& rng) {
    AlgebraElement a = zero(model);
    const auto& b = (*model)[c].basis();
    a.parts_[c] = b.combine(rng.gaussian_vector(static_cast<Index>(b.dim())));
    return a;
  }

  const ModelPtr& model() const { return model_; }
  const DirectSum<OperatorField>& parts() const { return parts_; }
  const OperatorField& operator[](std::size_t c) const { return parts_[c]; }

  double norm() const { return parts_.norm(); }
  AlgebraElement adjoint() const { return {model_, parts_.adjoint()}; }

  /// max over components and group elements of || Ad_w a - a ||.
  double invariance_defect() const {
    double d = 0.0;
    for (std::size_t c = 0; c < parts_.size(); ++c)
      d = std::max(d, tdual::invariance_defect((*model_)[c].action(), parts_[c]));
    return d;
  }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    a.require_same_model(b);
    return {a.model_, a.parts_ + b.parts_};
  }
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    a.require_same_model(b);
    return {a.model_, a.parts_ - b.parts_};
  }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    a.require_same_model(b);
    return {a.model_, a.parts_ * b.parts_};
  }
  friend AlgebraElement operator*(cplx s, const AlgebraElement& a) { return {a.model_, s * a.parts_}; }

 private:
  void require_same_model(const AlgebraElement& other) const {
    if (model_ != other.model_) throw ShapeError("AlgebraElement: elements of different models");
  }

  ModelPtr model_;
  DirectSum<OperatorField> parts_;
};

}  // namespace tdual
