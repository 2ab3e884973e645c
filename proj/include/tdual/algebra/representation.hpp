#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tdual/algebra/intertwiners.hpp"

namespace tdual {

struct EvalPoint {
  std::size_t component = 0;
  std::size_t point = 0;

  friend bool operator==(const EvalPoint&, const EvalPoint&) = default;
};

/// A finite-dimensional representation of an algebra model, held as a
/// subrepresentation of a direct sum of evaluations: with V the isometric
/// embedding of the representation space into the sum of the fibers at the
/// listed points,  rho(a) = V^* diag(a(x_1), ..., a(x_m)) V.
/// Every finite nondegenerate representation of the model has this form.
class Representation {
 public:
  Representation(ModelPtr model, std::vector<EvalPoint> points, Matrix embed, double tol = 1e-8)
      : model_(std::move(model)), points_(std::move(points)), embed_(std::move(embed)) {
    Index ambient = 0;
    for (const auto& p : points_) {
      if (p.component >= model_->size() || p.point >= (*model_)[p.component].space()->size())
        throw ShapeError("Representation: evaluation point outside the model");
      offsets_.push_back(ambient);
      ambient += (*model_)[p.component].space()->dim(p.point);
    }
    if (embed_.rows() != ambient) throw ShapeError("Representation: embedding has the wrong number of rows");
    if (linalg::max_abs(embed_.adjoint() * embed_ - Matrix::Identity(dim(), dim())) > tol)
      throw ValidationError("Representation: embedding is not an isometry");
    if (invariance_residual() > tol) throw ValidationError("Representation: subspace is not invariant");
  }

  static Representation zero(const ModelPtr& model) { return Representation(model, {}, Matrix(0, 0)); }

  static Representation evaluation(const ModelPtr& model, std::size_t c, std::size_t x) {
    const Index d = (*model)[c].space()->dim(x);
    return Representation(model, {{c, x}}, Matrix::Identity(d, d));
  }

  static Representation irreducible(const ModelPtr& model, const IrrepDescriptor& d) {
    return Representation(model, {{d.component_index, d.point}}, linalg::orth(d.projection, 1e-8));
  }

  static Representation direct_sum(const Representation& a, const Representation& b) {
    if (a.model_ != b.model_) throw ShapeError("Representation::direct_sum: different models");
    auto pts = a.points_;
    pts.insert(pts.end(), b.points_.begin(), b.points_.end());
    Matrix v = Matrix::Zero(a.embed_.rows() + b.embed_.rows(), a.dim() + b.dim());
    v.topLeftCorner(a.embed_.rows(), a.dim()) = a.embed_;
    v.bottomRightCorner(b.embed_.rows(), b.dim()) = b.embed_;
    return Representation(a.model_, std::move(pts), std::move(v));
  }

  /// The same representation written in another orthonormal basis.
  Representation rotated(const Matrix& u) const { return Representation(model_, points_, embed_ * u); }

  const ModelPtr& model() const { return model_; }
  const std::vector<EvalPoint>& points() const { return points_; }
  const Matrix& embed() const { return embed_; }
  Index dim() const { return embed_.cols(); }

  /// diag(f(x_k)) on the ambient sum, for f a field of component c (zero elsewhere).
  Matrix ambient_action(std::size_t c, const OperatorField& f) const {
    Matrix m = Matrix::Zero(embed_.rows(), embed_.rows());
    for (std::size_t k = 0; k < points_.size(); ++k)
      if (points_[k].component == c) {
        const Index d = f[points_[k].point].rows();
        m.block(offsets_[k], offsets_[k], d, d) = f[points_[k].point];
      }
    return m;
  }

  /// V^* diag(m_1, ..., m_k) V for one matrix per evaluation point.
  Matrix act_values(const std::vector<Matrix>& values) const {
    if (values.size() != points_.size()) throw ShapeError("Representation::act_values: one matrix per point required");
    Matrix m = Matrix::Zero(embed_.rows(), embed_.rows());
    for (std::size_t k = 0; k < points_.size(); ++k) {
      const Index d = values[k].rows();
      m.block(offsets_[k], offsets_[k], d, d) = values[k];
    }
    return embed_.adjoint() * m * embed_;
  }

  Matrix act(std::size_t c, const OperatorField& f) const { return embed_.adjoint() * ambient_action(c, f) * embed_; }

  Matrix act(const AlgebraElement& a) const {
    if (a.model() != model_) throw ShapeError("Representation::act: element of another model");
    Matrix m = Matrix::Zero(dim(), dim());
    for (auto c : components()) m += act(c, a[c]);
    return m;
  }

  std::vector<std::size_t> components() const {
    std::set<std::size_t> s;
    for (const auto& p : points_) s.insert(p.component);
    return {s.begin(), s.end()};
  }

  /// The (component, orbit) pairs met by the evaluation points, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> orbits() const {
    std::set<std::pair<std::size_t, std::size_t>> s;
    for (const auto& p : points_) s.insert({p.component, (*model_)[p.component].action().orbit_of(p.point)});
    return {s.begin(), s.end()};
  }

  /// max || (I - V V^*) a V || over fixed-point basis elements meeting the points.
  double invariance_residual() const {
    if (dim() == 0) return 0.0;
    const Matrix perp = Matrix::Identity(embed_.rows(), embed_.rows()) - embed_ * embed_.adjoint();
    double r = 0.0;
    for (auto [c, k] : orbits()) {
      const auto& basis = (*model_)[c].basis();
      for (auto i : basis.elements_on_orbit(k)) r = std::max(r, linalg::max_abs(perp * ambient_action(c, basis[i]) * embed_));
    }
    return r;
  }

 private:
  ModelPtr model_;
  std::vector<EvalPoint> points_;
  Matrix embed_;
  std::vector<Index> offsets_;
};

/// dim { T : T rho_1(a) = rho_2(a) T for all a }, solved on the fixed-point
/// basis elements of every orbit met by either representation (the others act
/// by zero on both). The solution space is cut down one generator at a time.
inline Index hom_dimension(const Representation& r1, const Representation& r2, double rtol = 1e-9) {
  if (r1.model() != r2.model()) throw ShapeError("hom_dimension: representations of different models");
  const Index n1 = r1.dim(), n2 = r2.dim();
  if (n1 == 0 || n2 == 0) return 0;
  std::set<std::pair<std::size_t, std::size_t>> orbits;
  for (auto o : r1.orbits()) orbits.insert(o);
  for (auto o : r2.orbits()) orbits.insert(o);
  const Matrix i1 = Matrix::Identity(n1, n1), i2 = Matrix::Identity(n2, n2);
  Matrix sol = Matrix::Identity(n1 * n2, n1 * n2);
  const auto& model = *r1.model();
  for (auto [c, k] : orbits) {
    const auto& basis = model[c].basis();
    for (auto i : basis.elements_on_orbit(k)) {
      const Matrix a1 = r1.act(c, basis[i]);
      const Matrix a2 = r2.act(c, basis[i]);
      const Matrix sys = (linalg::kron(a1.transpose(), i2) - linalg::kron(i1, a2)) * sol;
      sol = sol * linalg::null_space(sys, rtol);
      if (sol.cols() == 0) return 0;
    }
  }
  return sol.cols();
}

struct Constituent {
  IrrepDescriptor irrep;
  Index multiplicity = 0;
};

/// Multiplicities of the irreducibles met by the representation.
inline std::vector<Constituent> decompose(const Representation& r) {
  std::vector<Constituent> out;
  const auto& model = r.model();
  for (auto [c, k] : r.orbits()) {
    const std::size_t b = (*model)[c].action().base_point(k);
    for (auto& d : irreducibles_at(*model, c, b)) {
      const Index m = hom_dimension(Representation::irreducible(model, d), r);
      if (m > 0) out.push_back({std::move(d), m});
    }
  }
  return out;
}

/// Parses "comp@point" (evaluation), "comp@point#k" (irreducible class k),
/// "0" (zero) and sums of these joined by '+'. Component ids may contain
/// '+' themselves, so a '+' ends a term only once the term has its '@' (or
/// is the literal "0").
inline Representation parse_representation(const ModelPtr& model, const std::string& text) {
  auto trim = [](std::string t) {
    t.erase(0, t.find_first_not_of(' '));
    t.erase(t.find_last_not_of(' ') + 1);
    return t;
  };
  std::vector<std::string> terms{""};
  for (char ch : text) {
    const auto& cur = terms.back();
    if (ch == '+' && (cur.find('@') != std::string::npos || trim(cur) == "0"))
      terms.emplace_back();
    else
      terms.back() += ch;
  }
  Representation acc = Representation::zero(model);
  for (const auto& raw : terms) {
    const std::string term = trim(raw);
    if (term == "0") continue;
    const auto at = term.find('@');
    if (at == std::string::npos) throw ValidationError("descriptor '" + term + "' must have the form component@point");
    const auto hash = term.find('#', at);
    const std::string comp = term.substr(0, at);
    const std::string point = term.substr(at + 1, hash == std::string::npos ? std::string::npos : hash - at - 1);
    const std::size_t c = model->require(comp);
    const std::size_t x = (*model)[c].grid().require_index(point);
    if (hash == std::string::npos) {
      acc = Representation::direct_sum(acc, Representation::evaluation(model, c, x));
    } else {
      const std::size_t k = std::stoul(term.substr(hash + 1));
      auto irr = irreducibles_at(*model, c, x);
      if (k >= irr.size()) throw ValidationError("descriptor '" + term + "': no irreducible class " + std::to_string(k));
      acc = Representation::direct_sum(acc, Representation::irreducible(model, irr[k]));
    }
  }
  return acc;
}

/// A random representation: one or two irreducibles or evaluations at random
/// points, written in a random orthonormal basis.
inline Representation random_representation(const ModelPtr& model, Rng& rng, std::size_t max_terms = 2) {
  Representation acc = Representation::zero(model);
  if (model->empty()) return acc;
  const std::size_t terms = 1 + rng.index(max_terms);
  for (std::size_t t = 0; t < terms; ++t) {
    const std::size_t c = rng.index(model->size());
    const std::size_t x = rng.index((*model)[c].space()->size());
    if (rng.coin()) {
      acc = Representation::direct_sum(acc, Representation::evaluation(model, c, x));
    } else {
      auto irr = irreducibles_at(*model, c, x);
      acc = Representation::direct_sum(acc, Representation::irreducible(model, irr[rng.index(irr.size())]));
    }
  }
  return acc.rotated(rng.haar_unitary(acc.dim()));
}

}  // namespace tdual
