#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>

#include "tdual/core/fixed_point.hpp"
#include "tdual/core/interior_tensor.hpp"
#include "tdual/core/rng.hpp"

namespace tdual {

/// Outcome of checking that e -> T_e identifies E with the equivariant
/// compact operators from H to E (x)_B H, where B is the fixed-point algebra.
struct ModuleStructureReport {
  double gram_hermitian_residual = 0.0;
  double equivariance_residual = 0.0;  ///< max_i defect of T_{e_i}
  double isometry_residual = 0.0;      ///< max | <T_e, T_f> - <e, f>_B | over generators and random elements
  double inner_product_residual = 0.0; ///< symbol-map identity of the quotient
  std::size_t image_dim = 0;           ///< dim span { T_e }
  std::size_t target_dim = 0;          ///< dim of the equivariant operator space
  bool passed = false;

  double max_residual() const {
    return std::max({gram_hermitian_residual, equivariance_residual, isometry_residual, inner_product_residual});
  }
};

struct CompactsIsoReport {
  double norm_residual = 0.0;      ///< max | ||S|| - ||S (x) I|| | over random S
  double average_residual = 0.0;   ///< averaged elementary operator identity
  std::size_t domain_dim = 0;      ///< dim K(E)
  std::size_t image_dim = 0;       ///< dim of the image of S -> S (x) I
  std::size_t target_dim = 0;      ///< dim K(E (x)_B H)^W
  bool passed = false;

  double max_residual() const { return std::max(norm_residual, average_residual); }
};

namespace detail {

/// Throws unless every Gram entry is a fixed point of the action.
inline void require_invariant_gram(const GramModule<OperatorField>& e, const ProjectiveAction& action, double tol) {
  e.require_square();
  for (const auto& row : e.gram)
    for (const auto& g : row) {
      if (!(*g.source() == *action.space()) || !(*g.target() == *action.space()))
        throw ValidationError("module Gram entries do not act on the acted space");
      if (invariance_defect(action, g) > tol)
        throw ValidationError("module is not over the fixed-point algebra: Gram entry is not invariant");
    }
}

inline std::size_t span_dimension(const std::vector<OperatorField>& fields, double rtol = 1e-8) {
  if (fields.empty()) return 0;
  linalg::SpanBuilder span(fields.front().flatten().size(), rtol);
  for (const auto& f : fields) span.add(f.flatten());
  return static_cast<std::size_t>(span.dim());
}

/// Random element of the span of a basis (Gaussian coefficients).
inline OperatorField random_in(const EquivariantBasis& basis, Rng& rng) {
  return basis.combine(rng.gaussian_vector(static_cast<Index>(basis.dim())));
}

}  // namespace detail

inline TensorProduct tensor_over_fixed_points(const GramModule<OperatorField>& e, const SpacePtr& h,
                                              TensorOptions opt = {}) {
  return interior_tensor<OperatorField>(e, h, [](const OperatorField& b) { return b; }, opt);
}

inline ModuleStructureReport verify_module_structure(const GramModule<OperatorField>& e, const ProjectiveAction& action,
                                                     double tol = 1e-9, std::uint64_t seed = 1) {
  detail::require_invariant_gram(e, action, tol);
  ModuleStructureReport rep;
  const std::size_t k = e.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      rep.gram_hermitian_residual = std::max(rep.gram_hermitian_residual, (e.gram[i][j].adjoint() - e.gram[j][i]).norm());

  const TensorProduct tp = tensor_over_fixed_points(e, action.space());
  rep.inner_product_residual = tp.inner_product_residual();
  const ProjectiveAction tilde = tp.induced_action(action);

  std::vector<OperatorField> t;
  for (std::size_t i = 0; i < k; ++i) {
    t.push_back(tp.creation(i));
    rep.equivariance_residual = std::max(rep.equivariance_residual, equivariance_defect(tilde, action, t.back()));
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      rep.isometry_residual = std::max(rep.isometry_residual, (t[i].adjoint() * t[j] - e.gram[i][j]).norm());

  // Random elements e = sum_i e_i b_i and f = sum_j e_j c_j of the module.
  const EquivariantBasis b = fixed_point_algebra(action);
  Rng rng(seed);
  if (b.dim() > 0 && k > 0) {
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<OperatorField> bs, cs;
      for (std::size_t i = 0; i < k; ++i) {
        bs.push_back(detail::random_in(b, rng));
        cs.push_back(detail::random_in(b, rng));
      }
      OperatorField te = OperatorField::zero(action.space(), tp.space());
      OperatorField tf = te;
      OperatorField ef = OperatorField::zero(action.space());
      for (std::size_t i = 0; i < k; ++i) {
        te += t[i] * bs[i];
        tf += t[i] * cs[i];
        for (std::size_t j = 0; j < k; ++j) ef += bs[i].adjoint() * e.gram[i][j] * cs[j];
      }
      const double scale = std::max(1.0, ef.norm());
      rep.isometry_residual = std::max(rep.isometry_residual, (te.adjoint() * tf - ef).norm() / scale);
    }
  }

  // Surjectivity: the span of { T_i b } against the equivariant operators H -> E (x) H.
  std::vector<OperatorField> image;
  for (std::size_t i = 0; i < k; ++i)
    for (const auto& beta : b.elements()) image.push_back(t[i] * beta);
  rep.image_dim = detail::span_dimension(image);
  rep.target_dim = equivariant_basis(tilde, action).dim();
  rep.passed = rep.max_residual() <= tol && rep.image_dim == rep.target_dim;
  return rep;
}

inline CompactsIsoReport verify_compacts_iso(const GramModule<OperatorField>& e, const ProjectiveAction& action,
                                             double tol = 1e-9, std::uint64_t seed = 2) {
  detail::require_invariant_gram(e, action, tol);
  CompactsIsoReport rep;
  const std::size_t k = e.size();
  const SpacePtr& h = action.space();
  const TensorProduct tp = tensor_over_fixed_points(e, h);
  const ProjectiveAction tilde = tp.induced_action(action);
  const EquivariantBasis b = fixed_point_algebra(action);

  std::vector<OperatorField> t;
  for (std::size_t i = 0; i < k; ++i) t.push_back(tp.creation(i));

  // Domain: K(E) realized inside M_k(B) as G^{1/2} [b_ij] G^{1/2}, evaluated fiberwise.
  std::vector<Matrix> root;
  for (std::size_t x = 0; x < h->size(); ++x) root.push_back(linalg::psd_sqrt(tp.symbol_gram(x)));
  auto domain_at = [&](const std::vector<std::vector<OperatorField>>& beta, std::size_t x) {
    const Index d = h->dim(x);
    Matrix m = Matrix::Zero(static_cast<Index>(k) * d, static_cast<Index>(k) * d);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        m.block(static_cast<Index>(i) * d, static_cast<Index>(j) * d, d, d) = beta[i][j][x];
    return Matrix(root[x] * m * root[x]);
  };
  // Image: sum_ij T_i b_ij T_j^*.
  auto image_of = [&](const std::vector<std::vector<OperatorField>>& beta) {
    OperatorField acc = OperatorField::zero(tp.space());
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) acc += t[i] * beta[i][j] * t[j].adjoint();
    return acc;
  };

  Rng rng(seed);
  if (b.dim() > 0) {
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<std::vector<OperatorField>> beta(k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) beta[i].push_back(detail::random_in(b, rng));
      double dn = 0.0;
      for (std::size_t x = 0; x < h->size(); ++x) dn = std::max(dn, linalg::op_norm(domain_at(beta, x)));
      const double in = image_of(beta).norm();
      rep.norm_residual = std::max(rep.norm_residual, std::abs(dn - in) / std::max(1.0, dn));
    }
  }

  // Dimensions: both realizations are spanned by the matrix-unit choices b E_ij.
  std::vector<OperatorField> images;
  std::vector<Vector> domains;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (const auto& beta_m : b.elements()) {
        std::vector<std::vector<OperatorField>> beta(k, std::vector<OperatorField>(k, OperatorField::zero(h)));
        beta[i][j] = beta_m;
        images.push_back(image_of(beta));
        std::vector<Matrix> per_point;
        Index len = 0;
        for (std::size_t x = 0; x < h->size(); ++x) {
          per_point.push_back(domain_at(beta, x));
          len += per_point.back().size();
        }
        Vector v(len);
        Index off = 0;
        for (const auto& m : per_point) {
          v.segment(off, m.size()) = linalg::vec(m);
          off += m.size();
        }
        domains.push_back(std::move(v));
      }
  rep.image_dim = detail::span_dimension(images);
  if (!domains.empty()) {
    linalg::SpanBuilder span(domains.front().size(), 1e-8);
    for (const auto& v : domains) span.add(v);
    rep.domain_dim = static_cast<std::size_t>(span.dim());
  }
  rep.target_dim = fixed_point_algebra(tilde).dim();

  // Average[(e2 (x) v2)(e1 (x) v1)^*] = T_{e2} Average[v2 v1^*] T_{e1}^*.
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<Vector> a, c;
      for (std::size_t x = 0; x < h->size(); ++x) {
        a.push_back(rng.gaussian_vector(h->dim(x)));
        c.push_back(rng.gaussian_vector(h->dim(x)));
      }
      const VectorField v1(h, a), v2(h, c);
      const OperatorField lhs = average(tilde, rank_one(tp.symbol(j, v2), tp.symbol(i, v1)));
      const OperatorField rhs = t[j] * average(action, rank_one(v2, v1)) * t[i].adjoint();
      rep.average_residual = std::max(rep.average_residual, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
    }

  rep.passed = rep.max_residual() <= tol && rep.domain_dim == rep.target_dim && rep.image_dim == rep.target_dim;
  return rep;
}

}  // namespace tdual
