#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tdual/algebra/build.hpp"
#include "tdual/algebra/representation.hpp"

namespace tdual {

/// One summand of the universal principal series: W_sigma(L)-equivariant
/// fields on the L-side grid, valued in Hom(H^L(x), H^G(pm(x))), where pm
/// identifies L-side points with G-side points by label.
class UpsComponent {
 public:
  UpsComponent(const AlgebraModel& big, const AlgebraModel& small, UpsLink link, double tol = 1e-9)
      : link_(std::move(link)) {
    const Component& cb = big[link_.big];
    const Component& cs = small[link_.small];
    id_ = cs.id() + "->" + cb.id();
    const auto& ab = cb.action();
    const auto& as = cs.action();

    for (std::size_t x = 0; x < cs.grid().size(); ++x) {
      auto y = cb.grid().index_of(cs.grid()[x].label);
      if (!y) throw ValidationError("UPS " + id_ + ": point '" + cs.grid()[x].label + "' has no G-side partner");
      point_map_.push_back(*y);
    }
    preimage_.assign(cb.grid().size(), std::nullopt);
    for (std::size_t x = 0; x < point_map_.size(); ++x) {
      if (preimage_[point_map_[x]]) throw ValidationError("UPS " + id_ + ": point identification is not injective");
      preimage_[point_map_[x]] = x;
    }

    const auto& e = link_.embedding;
    if (e.size() != as.order()) throw ShapeError("UPS " + id_ + ": one image per element of W_sigma(L) required");
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] >= ab.order()) throw ShapeError("UPS " + id_ + ": embedding leaves W_sigma(G)");
      for (std::size_t u = 0; u < v; ++u)
        if (e[u] == e[v]) throw ValidationError("UPS " + id_ + ": embedding is not injective");
      for (std::size_t w = 0; w < e.size(); ++w)
        if (e[as.group().mul(v, w)] != ab.group().mul(e[v], e[w]))
          throw ValidationError("UPS " + id_ + ": embedding is not a homomorphism");
      for (std::size_t x = 0; x < point_map_.size(); ++x)
        if (point_map_[as.act(v, x)] != ab.act(e[v], point_map_[x]))
          throw ValidationError("UPS " + id_ + ": embedding does not match the grid actions");
    }

    // the G-side data seen from the L-side grid: W_sigma(L) acting through the embedding
    std::vector<Index> dims;
    for (auto y : point_map_) dims.push_back(cb.space()->dim(y));
    auto target = std::make_shared<const FiberedSpace>(cs.space()->base_ptr(), std::move(dims));
    std::vector<std::vector<Matrix>> us(as.order());
    for (std::size_t v = 0; v < as.order(); ++v)
      for (auto y : point_map_) us[v].push_back(ab.unitary(e[v], y));
    pulled_ = std::make_shared<const ProjectiveAction>(as.group(), target, as.perm(), std::move(us), tol);
    small_action_ = cs.action_ptr();
    basis_ = std::make_shared<const EquivariantBasis>(equivariant_basis(*pulled_, *small_action_));

    // full: the values S(x) jointly reach every vector of H^G(pm(x))
    full_ = true;
    for (std::size_t x = 0; x < point_map_.size() && full_; ++x) {
      Matrix s = Matrix::Zero(target->dim(x), target->dim(x));
      for (const auto& f : basis_->elements()) s += f[x] * f[x].adjoint();
      full_ = linalg::numerical_rank(s, 1e-9) == s.rows();
    }
  }

  const std::string& id() const { return id_; }
  std::size_t small() const { return link_.small; }
  std::size_t big() const { return link_.big; }
  const std::vector<std::size_t>& embedding() const { return link_.embedding; }
  /// L-side point -> G-side point.
  std::size_t point_map(std::size_t x) const { return point_map_.at(x); }
  const std::vector<std::size_t>& point_map() const { return point_map_; }
  std::optional<std::size_t> preimage(std::size_t y) const { return preimage_.at(y); }
  const ProjectiveAction& pulled_action() const { return *pulled_; }
  const ProjectiveAction& small_action() const { return *small_action_; }
  const SpacePtr& source() const { return small_action_->space(); }
  const SpacePtr& target() const { return pulled_->space(); }
  const EquivariantBasis& basis() const { return *basis_; }
  bool full() const { return full_; }
  std::size_t small_group_order() const { return small_action_->order(); }

  OperatorField zero() const { return OperatorField::zero(source(), target()); }
  double equivariance_defect(const OperatorField& s) const { return tdual::equivariance_defect(*pulled_, *small_action_, s); }

  /// Basis elements whose support (one W_sigma(L)-orbit) contains x.
  const std::vector<std::size_t>& elements_at(std::size_t x) const {
    return basis_->elements_on_orbit(small_action_->orbit_of(x));
  }

 private:
  std::string id_;
  UpsLink link_;
  std::vector<std::size_t> point_map_;
  std::vector<std::optional<std::size_t>> preimage_;
  ActionPtr pulled_;
  ActionPtr small_action_;
  std::shared_ptr<const EquivariantBasis> basis_;
  bool full_ = false;
};

/// An element of the bimodule: one field per summand.
using UpsElement = DirectSum<OperatorField>;

/// The universal principal series as a C*(G)-C*(L) bimodule: the orthogonal
/// direct sum of its summands.
class UpsBimodule {
 public:
  UpsBimodule(ModelPtr big, ModelPtr small, const std::vector<UpsLink>& links, double tol = 1e-9)
      : big_(std::move(big)), small_(std::move(small)) {
    for (const auto& l : links) {
      if (l.big >= big_->size() || l.small >= small_->size()) throw ShapeError("UPS link outside the models");
      comps_.emplace_back(*big_, *small_, l, tol);
    }
  }

  const ModelPtr& big() const { return big_; }
  const ModelPtr& small() const { return small_; }
  std::size_t size() const { return comps_.size(); }
  const UpsComponent& operator[](std::size_t i) const { return comps_.at(i); }
  const std::vector<UpsComponent>& components() const { return comps_; }

  UpsElement zero() const {
    std::vector<OperatorField> f;
    for (const auto& c : comps_) f.push_back(c.zero());
    return UpsElement(std::move(f));
  }

  /// Field `f` in summand i, zero elsewhere.
  UpsElement single(std::size_t i, OperatorField f) const {
    UpsElement s = zero();
    comps_.at(i).zero().require_same_shape(f);
    s[i] = std::move(f);
    return s;
  }

  UpsElement random(Rng& rng) const {
    std::vector<OperatorField> f;
    for (const auto& c : comps_) f.push_back(c.basis().combine(rng.gaussian_vector(static_cast<Index>(c.basis().dim()))));
    return UpsElement(std::move(f));
  }

  UpsElement random_on(std::size_t i, Rng& rng) const {
    const auto& b = comps_.at(i).basis();
    return single(i, b.combine(rng.gaussian_vector(static_cast<Index>(b.dim()))));
  }

  double equivariance_defect(const UpsElement& s) const {
    require_shape(s);
    double d = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i) d = std::max(d, comps_[i].equivariance_defect(s[i]));
    return d;
  }

  /// (a . S)(x) = a(pm(x)) S(x).
  UpsElement left_act(const AlgebraElement& a, const UpsElement& s) const {
    if (a.model() != big_) throw ShapeError("left_act: element of another model");
    require_shape(s);
    std::vector<OperatorField> out;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const auto& c = comps_[i];
      std::vector<Matrix> m;
      for (std::size_t x = 0; x < s[i].size(); ++x) m.push_back(a[c.big()][c.point_map(x)] * s[i][x]);
      out.emplace_back(c.source(), c.target(), std::move(m));
    }
    return UpsElement(std::move(out));
  }

  /// (S . b)(x) = S(x) b(x).
  UpsElement right_act(const UpsElement& s, const AlgebraElement& b) const {
    if (b.model() != small_) throw ShapeError("right_act: element of another model");
    require_shape(s);
    std::vector<OperatorField> out;
    for (std::size_t i = 0; i < comps_.size(); ++i) out.push_back(s[i] * b[comps_[i].small()]);
    return UpsElement(std::move(out));
  }

  /// <S, T>_L = S^* T, summed over summands (distinct summands are orthogonal).
  AlgebraElement l_inner(const UpsElement& s, const UpsElement& t) const {
    require_shape(s);
    require_shape(t);
    AlgebraElement acc = AlgebraElement::zero(small_);
    for (std::size_t i = 0; i < comps_.size(); ++i)
      acc = acc + AlgebraElement(small_, placed(comps_[i].small(), s[i].adjoint() * t[i]));
    return acc;
  }

  /// ||S||^2 = ||<S, S>_L||.
  double norm(const UpsElement& s) const { return std::sqrt(l_inner(s, s).norm()); }

  void require_shape(const UpsElement& s) const {
    if (s.size() != comps_.size()) throw ShapeError("UPS element has the wrong number of summands");
    for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i].zero().require_same_shape(s[i]);
  }

 private:
  DirectSum<OperatorField> placed(std::size_t c, OperatorField f) const {
    std::vector<OperatorField> parts;
    for (std::size_t k = 0; k < small_->size(); ++k)
      parts.push_back(k == c ? std::move(f) : OperatorField::zero((*small_)[k].space()));
    return DirectSum<OperatorField>(std::move(parts));
  }

  ModelPtr big_;
  ModelPtr small_;
  std::vector<UpsComponent> comps_;
};

/// The interior tensor product UPS (x)_L H_tau, realized inside the G-side
/// fibers. Generators are the basis fields S_b meeting tau's points, tensored
/// with a basis e_j of H_tau; their Gram matrix is [tau(S_b^* S_c)]. The map
///   Psi(S_b (x) v) = (S_b(x_k) (V v)_k)_k   into  (+)_k H^G(pm(x_k))
/// satisfies Psi^* Psi = Gram and intertwines the left action, so its range
/// carries the induced representation.
struct InductionData {
  Representation rep;
  Matrix psi;
  Matrix gram;
  double gram_residual = 0.0;
};

inline InductionData induce_data(const UpsBimodule& e, const Representation& tau) {
  if (tau.model() != e.small()) throw ShapeError("induce: representation of another model");
  const auto& pts = tau.points();

  struct Block {
    std::size_t link, k, offset;
  };
  std::vector<Block> blocks;
  std::vector<EvalPoint> out_points;
  std::vector<Index> tau_offset;
  Index ambient = 0, t_off = 0;
  for (const auto& p : pts) {
    tau_offset.push_back(t_off);
    t_off += (*e.small())[p.component].space()->dim(p.point);
  }
  for (std::size_t l = 0; l < e.size(); ++l)
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (pts[k].component == e[l].small()) {
        const std::size_t y = e[l].point_map(pts[k].point);
        blocks.push_back({l, k, static_cast<std::size_t>(ambient)});
        out_points.push_back({e[l].big(), y});
        ambient += (*e.big())[e[l].big()].space()->dim(y);
      }

  // generators: (link, basis element), each meeting some point of tau
  std::vector<std::pair<std::size_t, std::size_t>> gens;
  for (std::size_t l = 0; l < e.size(); ++l) {
    std::vector<std::size_t> seen;
    for (const auto& p : pts)
      if (p.component == e[l].small())
        for (auto i : e[l].elements_at(p.point))
          if (std::find(seen.begin(), seen.end(), i) == seen.end()) seen.push_back(i);
    std::sort(seen.begin(), seen.end());
    for (auto i : seen) gens.push_back({l, i});
  }

  const Index n = tau.dim();
  const Matrix& v = tau.embed();
  Matrix psi = Matrix::Zero(ambient, static_cast<Index>(gens.size()) * n);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const auto& [l, i] = gens[g];
    const OperatorField& s = e[l].basis()[i];
    for (const auto& b : blocks) {
      if (b.link != l) continue;
      const std::size_t x = pts[b.k].point;
      const Index dl = s[x].cols();
      psi.block(static_cast<Index>(b.offset), static_cast<Index>(g) * n, s[x].rows(), n) =
          s[x] * v.middleRows(tau_offset[b.k], dl);
    }
  }

  Matrix gram = Matrix::Zero(psi.cols(), psi.cols());
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (std::size_t h = 0; h < gens.size(); ++h) {
      if (gens[g].first != gens[h].first) continue;
      const auto& c = e[gens[g].first];
      const OperatorField inner = c.basis()[gens[g].second].adjoint() * c.basis()[gens[h].second];
      gram.block(static_cast<Index>(g) * n, static_cast<Index>(h) * n, n, n) = tau.act(c.small(), inner);
    }
  const double residual = linalg::max_abs(psi.adjoint() * psi - gram);
  const double scale = std::max(1.0, linalg::max_abs(gram));
  if (residual > 1e-8 * scale) throw Error("induce: realization does not reproduce the Gram matrix");
  Matrix range = psi.cols() == 0 ? Matrix(ambient, 0) : linalg::orth(psi, 1e-9);
  Representation rep(e.big(), std::move(out_points), std::move(range));
  return {std::move(rep), std::move(psi), std::move(gram), residual};
}

inline Representation induce(const UpsBimodule& e, const Representation& tau) { return induce_data(e, tau).rep; }

/// Checks of the nested construction UPS(G/N_P) (x)_L UPS(L/N_Q) against the
/// one-step bimodule for the glued parabolic, summand by summand.
struct StagesReport {
  struct Summand {
    std::string id;
    bool maps_compose = false;      ///< point maps and group embeddings compose
    double equivariance = 0.0;      ///< products are equivariant for the glued data
    double isometry = 0.0;          ///< balanced-tensor inner products vs. glued inner products
    double span_distance = 1.0;     ///< products vs. the glued basis
    Index product_span = 0;
    Index glued_dim = 0;
  };
  std::vector<Summand> summands;

  double residual() const {
    double r = 0.0;
    for (const auto& s : summands) r = std::max({r, s.equivariance, s.isometry, s.span_distance});
    return r;
  }
  bool passed(double tol = 1e-9) const {
    for (const auto& s : summands)
      if (!s.maps_compose || s.product_span != s.glued_dim) return false;
    return !summands.empty() && residual() <= tol;
  }
};

/// outer: L-model -> G-model, inner: J-model -> L-model, glued: J-model -> G-model.
inline StagesReport induction_in_stages(const UpsBimodule& outer, const UpsBimodule& inner, const UpsBimodule& glued,
                                        std::uint64_t seed = 7) {
  if (outer.small() != inner.big() || glued.small() != inner.small() || glued.big() != outer.big())
    throw ShapeError("induction_in_stages: bimodules are not composable");
  Rng rng(seed);
  StagesReport rep;
  for (std::size_t gi = 0; gi < glued.size(); ++gi) {
    const auto& g = glued[gi];
    StagesReport::Summand out;
    out.id = g.id();
    std::optional<std::size_t> vi, ui;
    for (std::size_t i = 0; i < inner.size(); ++i)
      if (inner[i].small() == g.small()) vi = i;
    if (vi)
      for (std::size_t i = 0; i < outer.size(); ++i)
        if (outer[i].small() == inner[*vi].big() && outer[i].big() == g.big()) ui = i;
    if (!vi || !ui) {
      rep.summands.push_back(out);
      continue;
    }
    const auto& v = inner[*vi];
    const auto& u = outer[*ui];

    out.maps_compose = true;
    for (std::size_t z = 0; z < g.point_map().size(); ++z)
      out.maps_compose = out.maps_compose && g.point_map(z) == u.point_map(v.point_map(z));
    for (std::size_t w = 0; w < g.embedding().size(); ++w)
      out.maps_compose = out.maps_compose && g.embedding()[w] == u.embedding()[v.embedding()[w]];

    // (S . T)(z) = S(pm_v(z)) T(z), for basis pairs with overlapping support
    auto product = [&](const OperatorField& s, const OperatorField& t) {
      std::vector<Matrix> m;
      for (std::size_t z = 0; z < t.size(); ++z) m.push_back(s[v.point_map(z)] * t[z]);
      return OperatorField(g.source(), g.target(), std::move(m));
    };
    // The products and the glued basis are compared orbit by orbit of the
    // J-side action, since every basis field lives on a single orbit.
    const auto& act = g.small_action();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // sampled for the pointwise checks
    for (std::size_t k = 0; k < act.orbit_count(); ++k) {
      const auto& orbit = act.orbit(k);
      Index len = 0;
      for (auto z : orbit) len += g.target()->dim(z) * g.source()->dim(z);
      auto restricted = [&](auto&& value) {
        Vector out(len);
        Index off = 0;
        for (auto z : orbit) {
          const Matrix m = value(z);
          out.segment(off, m.size()) = linalg::vec(m);
          off += m.size();
        }
        return out;
      };
      std::vector<std::size_t> outer_elems;
      for (auto z : orbit)
        for (auto si : u.elements_at(v.point_map(z)))
          if (std::find(outer_elems.begin(), outer_elems.end(), si) == outer_elems.end()) outer_elems.push_back(si);
      const auto& inner_elems = v.basis().elements_on_orbit(k);

      linalg::SpanBuilder span(len, 1e-9);
      for (auto ti : inner_elems) {
        for (auto si : outer_elems) {
          const auto& s = u.basis()[si];
          const auto& t = v.basis()[ti];
          span.add(restricted([&](std::size_t z) -> Matrix { return s[v.point_map(z)] * t[z]; }));
          if (span.full()) break;
        }
        if (span.full()) break;
      }
      const auto& glued_elems = g.basis().elements_on_orbit(k);
      Matrix glued_basis(len, static_cast<Index>(glued_elems.size()));
      for (std::size_t i = 0; i < glued_elems.size(); ++i)
        glued_basis.col(static_cast<Index>(i)) = restricted([&](std::size_t z) { return g.basis()[glued_elems[i]][z]; });
      out.product_span += span.dim();
      out.glued_dim += glued_basis.cols();
      const double dist = span.dim() == glued_basis.cols() ? linalg::span_distance(span.basis(), glued_basis) : 1.0;
      out.span_distance = k == 0 ? dist : std::max(out.span_distance, dist);
      if (!inner_elems.empty() && !outer_elems.empty())
        pairs.push_back({outer_elems[rng.index(outer_elems.size())], inner_elems[rng.index(inner_elems.size())]});
    }
    if (act.orbit_count() == 0) out.span_distance = 0.0;
    for (const auto& [si, ti] : pairs)
      out.equivariance = std::max(out.equivariance, g.equivariance_defect(product(u.basis()[si], v.basis()[ti])));

    // <S (x) T, S' (x) T'> = T^* (S^* S' o pm_v) T'  against the glued S.T inner product
    for (int trial = 0; trial < 16 && !pairs.empty(); ++trial) {
      const auto& [s1, t1] = pairs[rng.index(pairs.size())];
      const auto& [s2, t2] = pairs[rng.index(pairs.size())];
      const OperatorField& a = u.basis()[s1];
      const OperatorField& b = u.basis()[s2];
      const OperatorField& c = v.basis()[t1];
      const OperatorField& d = v.basis()[t2];
      const OperatorField lhs = product(a, c).adjoint() * product(b, d);
      const OperatorField ab = a.adjoint() * b;  // on the L-side grid
      std::vector<Matrix> m;
      for (std::size_t z = 0; z < c.size(); ++z) m.push_back(c[z].adjoint() * ab[v.point_map(z)] * d[z]);
      const OperatorField rhs(c.source(), c.source(), std::move(m));
      out.isometry = std::max(out.isometry, (lhs - rhs).max_abs());
    }
    rep.summands.push_back(out);
  }
  return rep;
}

/// Ind_P(Ind_Q tau) against Ind_glued(tau): equivalent iff the three
/// intertwiner spaces Hom(A,B), Hom(A,A), Hom(B,B) have equal dimension.
struct FunctorCheck {
  Index dim_two_step = 0, dim_one_step = 0;
  Index hom_ab = 0, hom_aa = 0, hom_bb = 0;
  bool equivalent() const { return dim_two_step == dim_one_step && hom_ab == hom_aa && hom_aa == hom_bb; }
};

inline FunctorCheck induction_functor_check(const UpsBimodule& outer, const UpsBimodule& inner,
                                            const UpsBimodule& glued, const Representation& tau) {
  const auto a = induce(outer, induce(inner, tau));
  const auto b = induce(glued, tau);
  return {a.dim(), b.dim(), hom_dimension(a, b), hom_dimension(a, a), hom_dimension(b, b)};
}

/// For a minimal parabolic every summand should have trivial W_sigma(L) and
/// consist of all rectangular fields.
struct MinimalShapeReport {
  struct Summand {
    std::string id;
    std::size_t group_order = 1;
    bool all_fields = false;
  };
  std::vector<Summand> summands;
  bool proper = true;  ///< false when P = G, where there is nothing to check

  bool minimal() const {
    if (!proper) return true;
    for (const auto& s : summands)
      if (s.group_order != 1 || !s.all_fields) return false;
    return true;
  }
  std::vector<std::string> offending() const {
    std::vector<std::string> out;
    for (const auto& s : summands)
      if (s.group_order != 1 || !s.all_fields) out.push_back(s.id);
    return out;
  }
};

inline MinimalShapeReport minimal_parabolic_shape(const UpsBimodule& e) {
  MinimalShapeReport r;
  for (const auto& c : e.components()) {
    Index all = 0;
    for (std::size_t x = 0; x < c.point_map().size(); ++x) all += c.source()->dim(x) * c.target()->dim(x);
    r.summands.push_back({c.id(), c.small_group_order(), static_cast<Index>(c.basis().dim()) == all});
  }
  return r;
}

}  // namespace tdual
