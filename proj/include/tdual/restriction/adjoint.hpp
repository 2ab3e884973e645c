#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tdual/ups/bimodule.hpp"

namespace tdual {

/// The conjugate bimodule of the universal principal series. Its elements
/// are the conjugates of UPS elements (stored as the same fields), with the
/// C*(G)-valued inner product averaged over W_sigma(G).
class AdjointModule {
 public:
  explicit AdjointModule(std::shared_ptr<const UpsBimodule> ups) : ups_(std::move(ups)) {}

  const UpsBimodule& ups() const { return *ups_; }
  const ModelPtr& big() const { return ups_->big(); }
  const ModelPtr& small() const { return ups_->small(); }

  /// S_1 S_2^* of summand i, moved to the G-side grid (zero off the image of
  /// the point map), before averaging.
  OperatorField pushed_product(std::size_t i, const OperatorField& s1, const OperatorField& s2) const {
    const auto& c = (*ups_)[i];
    const auto& space = (*big())[c.big()].space();
    OperatorField out = OperatorField::zero(space);
    for (std::size_t x = 0; x < c.point_map().size(); ++x) out.set(c.point_map(x), s1[x] * s2[x].adjoint());
    return out;
  }

  /// <conj S_1, conj S_2> = Av_{W_sigma(G)}(S_1 S_2^*), summed over summands.
  AlgebraElement g_inner(const UpsElement& s1, const UpsElement& s2) const {
    ups_->require_shape(s1);
    ups_->require_shape(s2);
    std::vector<OperatorField> parts;
    for (const auto& comp : big()->components()) parts.push_back(OperatorField::zero(comp.space()));
    for (std::size_t i = 0; i < ups_->size(); ++i) {
      const std::size_t c = (*ups_)[i].big();
      parts[c] += average((*big())[c].action(), pushed_product(i, s1[i], s2[i]));
    }
    return AlgebraElement(big(), DirectSum<OperatorField>(std::move(parts)));
  }

  /// The value of Av(S_1 S_2^*) for summand i at the G-side point y alone:
  /// (1/|W|) sum_w U_w(y') (S_1 S_2^*)(y') U_w(y')^* over y' = w^{-1} y.
  Matrix g_inner_at(std::size_t i, const OperatorField& s1, const OperatorField& s2, std::size_t y) const {
    const auto& c = (*ups_)[i];
    const auto& act = (*big())[c.big()].action();
    const Index d = act.space()->dim(y);
    Matrix acc = Matrix::Zero(d, d);
    for (std::size_t w = 0; w < act.order(); ++w) {
      const std::size_t from = act.act(act.group().inv(w), y);
      const auto x = c.preimage(from);
      if (!x) continue;
      const Matrix& u = act.unitary(w, from);
      acc += u * s1[*x] * s2[*x].adjoint() * u.adjoint();
    }
    return acc / static_cast<double>(act.order());
  }

  /// Actions on conjugates: b . conj(S) . a = conj(a^* . S . b^*).
  UpsElement act(const AlgebraElement& b, const UpsElement& s, const AlgebraElement& a) const {
    return ups_->left_act(a.adjoint(), ups_->right_act(s, b.adjoint()));
  }

  double norm(const UpsElement& s) const { return std::sqrt(g_inner(s, s).norm()); }

 private:
  std::shared_ptr<const UpsBimodule> ups_;
};

/// ||conj S||^2 >= c ||S||^2 with c = |W_sigma(L)| / |W_sigma(G)|, and ||S||^2 >= ||conj S||^2.
struct NormEquivalenceReport {
  std::string summand;
  double constant = 1.0;
  double ups_norm_sq = 0.0;
  double adjoint_norm_sq = 0.0;
  double lower_slack = 0.0;  ///< ||conj S||^2 - c ||S||^2
  double upper_slack = 0.0;  ///< ||S||^2 - ||conj S||^2

  bool holds(double tol = 1e-10) const { return lower_slack >= -tol && upper_slack >= -tol; }
};

inline NormEquivalenceReport norm_equivalence(const AdjointModule& adj, std::size_t summand, const OperatorField& s) {
  const auto& e = adj.ups();
  const auto& c = e[summand];
  const UpsElement el = e.single(summand, s);
  NormEquivalenceReport r;
  r.summand = c.id();
  r.constant = static_cast<double>(c.small_group_order()) / static_cast<double>((*e.big())[c.big()].group_order());
  r.ups_norm_sq = e.l_inner(el, el).norm();
  r.adjoint_norm_sq = adj.g_inner(el, el).norm();
  const double scale = std::max(1.0, r.ups_norm_sq);
  r.lower_slack = (r.adjoint_norm_sq - r.constant * r.ups_norm_sq) / scale;
  r.upper_slack = (r.ups_norm_sq - r.adjoint_norm_sq) / scale;
  return r;
}

/// The restriction of a G-representation pi: conj(UPS) (x)_G H_pi, realized
/// in L-side fibers. With V the embedding of pi, a generator conj(S_b) (x) v
/// is sent to the blocks indexed by (point y_k of pi, w in W_sigma(G)) with
/// w^{-1} y_k = pm(x) in the image of the point map:
///   |W_sigma(G)|^{-1/2}  S_b(x)^*  U_w(pm(x))^*  (V v)_k   in H^L(x).
/// Its Gram matrix is [pi(<conj S_b, conj S_c>)].
struct RestrictionData {
  Representation rep;
  Matrix psi;
  Matrix gram;
  double gram_residual = 0.0;
};

inline RestrictionData restrict_data(const AdjointModule& adj, const Representation& pi) {
  if (pi.model() != adj.big()) throw ShapeError("restrict: representation of another model");
  const auto& e = adj.ups();
  const auto& big = *adj.big();
  const auto& pts = pi.points();

  std::vector<Index> pi_offset;
  Index p_off = 0;
  for (const auto& p : pts) {
    pi_offset.push_back(p_off);
    p_off += big[p.component].space()->dim(p.point);
  }

  struct Block {
    std::size_t link, k, w, x;
    Index offset;
  };
  std::vector<Block> blocks;
  std::vector<EvalPoint> out_points;
  Index ambient = 0;
  for (std::size_t l = 0; l < e.size(); ++l)
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (pts[k].component != e[l].big()) continue;
      const auto& act = big[pts[k].component].action();
      for (std::size_t w = 0; w < act.order(); ++w) {
        const auto pre = e[l].preimage(act.act(act.group().inv(w), pts[k].point));
        if (!pre) continue;
        blocks.push_back({l, k, w, *pre, ambient});
        out_points.push_back({e[l].small(), *pre});
        ambient += (*adj.small())[e[l].small()].space()->dim(*pre);
      }
    }

  std::vector<std::pair<std::size_t, std::size_t>> gens;
  for (std::size_t l = 0; l < e.size(); ++l) {
    std::vector<std::size_t> seen;
    for (const auto& b : blocks)
      if (b.link == l)
        for (auto i : e[l].elements_at(b.x))
          if (std::find(seen.begin(), seen.end(), i) == seen.end()) seen.push_back(i);
    std::sort(seen.begin(), seen.end());
    for (auto i : seen) gens.push_back({l, i});
  }

  const Index n = pi.dim();
  const Matrix& v = pi.embed();
  Matrix psi = Matrix::Zero(ambient, static_cast<Index>(gens.size()) * n);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const auto& [l, i] = gens[g];
    const OperatorField& s = e[l].basis()[i];
    for (const auto& b : blocks) {
      if (b.link != l) continue;
      const auto& act = big[pts[b.k].component].action();
      const double norm = 1.0 / std::sqrt(static_cast<double>(act.order()));
      const std::size_t y = e[l].point_map(b.x);
      const Index dg = big[pts[b.k].component].space()->dim(pts[b.k].point);
      psi.block(b.offset, static_cast<Index>(g) * n, s[b.x].cols(), n) =
          norm * s[b.x].adjoint() * act.unitary(b.w, y).adjoint() * v.middleRows(pi_offset[b.k], dg);
    }
  }

  Matrix gram = Matrix::Zero(psi.cols(), psi.cols());
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (std::size_t h = 0; h < gens.size(); ++h) {
      if (gens[g].first != gens[h].first) continue;
      const auto l = gens[g].first;
      const auto& sg = e[l].basis()[gens[g].second];
      const auto& sh = e[l].basis()[gens[h].second];
      // <conj S_g (x) v, conj S_h (x) u> = <v, pi(<conj S_g, conj S_h>) u>, evaluated at pi's points only
      std::vector<Matrix> vals;
      for (const auto& p : pts)
        vals.push_back(p.component == e[l].big() ? adj.g_inner_at(l, sg, sh, p.point)
                                                 : Matrix::Zero(big[p.component].space()->dim(p.point),
                                                                big[p.component].space()->dim(p.point)));
      gram.block(static_cast<Index>(g) * n, static_cast<Index>(h) * n, n, n) = pi.act_values(vals);
    }
  const double residual = linalg::max_abs(psi.adjoint() * psi - gram);
  const double scale = std::max(1.0, linalg::max_abs(gram));
  if (residual > 1e-8 * scale) throw Error("restrict: realization does not reproduce the Gram matrix");
  Matrix range = psi.cols() == 0 ? Matrix(ambient, 0) : linalg::orth(psi, 1e-9);
  Representation rep(adj.small(), std::move(out_points), std::move(range));
  return {std::move(rep), std::move(psi), std::move(gram), residual};
}

inline Representation restrict(const AdjointModule& adj, const Representation& pi) {
  return restrict_data(adj, pi).rep;
}

/// dim Hom(Ind tau, pi) = dim Hom(tau, Res pi) and dim Hom(pi, Ind tau) = dim Hom(Res pi, tau).
struct AdjunctionReport {
  Index ind_to_pi = 0;
  Index tau_to_res = 0;
  Index pi_to_ind = 0;
  Index res_to_tau = 0;
  Index ind_dim = 0;
  Index res_dim = 0;

  bool left_holds() const { return ind_to_pi == tau_to_res; }
  bool right_holds() const { return pi_to_ind == res_to_tau; }
  bool holds() const { return left_holds() && right_holds(); }
};

inline AdjunctionReport adjunction_check(const AdjointModule& adj, const Representation& tau,
                                         const Representation& pi) {
  const auto ind = induce(adj.ups(), tau);
  const auto res = restrict(adj, pi);
  AdjunctionReport r;
  r.ind_dim = ind.dim();
  r.res_dim = res.dim();
  r.ind_to_pi = hom_dimension(ind, pi);
  r.tau_to_res = hom_dimension(tau, res);
  r.pi_to_ind = hom_dimension(pi, ind);
  r.res_to_tau = hom_dimension(res, tau);
  return r;
}

}  // namespace tdual
