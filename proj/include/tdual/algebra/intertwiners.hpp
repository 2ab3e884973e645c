#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tdual/algebra/model.hpp"

namespace tdual {

/// The algebra I(sigma, phi) spanned by the intertwiners U_{w,phi}, w in the
/// isotropy group of phi. Because the U_w form a projective representation of
/// the isotropy group, their span is already closed under products.
struct IntertwinerAlgebra {
  std::size_t point = 0;
  std::vector<FiniteGroup::Elem> isotropy;
  std::vector<Matrix> generators;
  std::vector<Matrix> basis;  ///< Hilbert-Schmidt orthonormal

  Index fiber_dim() const { return generators.empty() ? 0 : generators.front().rows(); }
  std::size_t dim() const { return basis.size(); }

  /// Distance of a matrix from the span.
  double distance(const Matrix& m) const {
    Matrix r = m;
    for (const auto& b : basis) r -= (b.adjoint() * r).trace() * b;
    return linalg::max_abs(r);
  }

  /// Largest distance from the span of products and adjoints of basis elements.
  double closure_residual() const {
    double d = 0.0;
    for (const auto& a : basis) {
      d = std::max(d, distance(a.adjoint()));
      for (const auto& b : basis) d = std::max(d, distance(a * b));
    }
    return d;
  }
};

inline IntertwinerAlgebra intertwiner_algebra(const Component& comp, std::size_t x) {
  const auto& act = comp.action();
  IntertwinerAlgebra ia;
  ia.point = x;
  ia.isotropy = act.stabilizer(x);
  const Index d = act.space()->dim(x);
  linalg::SpanBuilder span(d * d, 1e-9);
  for (auto w : ia.isotropy) {
    ia.generators.push_back(act.unitary(w, x));
    span.add(linalg::vec(act.unitary(w, x)));
  }
  const Matrix q = span.basis();
  for (Index j = 0; j < q.cols(); ++j) ia.basis.push_back(linalg::unvec(q.col(j), d, d));
  return ia;
}

inline IntertwinerAlgebra intertwiner_algebra(const Component& comp, const std::string& point) {
  return intertwiner_algebra(comp, comp.grid().require_index(point));
}

/// Orthonormal basis (vectorized) of { T : T U = U T for all generators }.
inline Matrix commutant(const std::vector<Matrix>& generators, Index d) {
  if (generators.empty()) return Matrix::Identity(d * d, d * d);
  const Matrix id = Matrix::Identity(d, d);
  Matrix sys(static_cast<Index>(generators.size()) * d * d, d * d);
  for (std::size_t g = 0; g < generators.size(); ++g)
    sys.middleRows(static_cast<Index>(g) * d * d, d * d) =
        linalg::kron(id, generators[g]) - linalg::kron(generators[g].transpose(), id);
  return linalg::null_space(sys, 1e-9);
}

/// The central decomposition of I(sigma, phi): central projections and, in
/// each central block, a complete family of orthogonal minimal projections.
struct CentralBlock {
  Matrix central;
  std::vector<Matrix> minimal;
  Index rank = 0;  ///< rank of each minimal projection
  std::vector<double> character;  ///< normalized traces tr(z U_w)/tr z, real and imaginary parts
};

namespace detail {

inline Matrix random_hermitian_in(const std::vector<Matrix>& basis, Index d, Rng& rng) {
  Matrix h = Matrix::Zero(d, d);
  for (const auto& b : basis) h += rng.complex_normal() * b;
  return linalg::hermitian_part(h);
}

/// Spectral projections of a Hermitian matrix compressed to the range of q
/// (orthonormal columns), clustered at the given tolerance.
inline std::vector<Matrix> spectral_projections(const Matrix& h, const Matrix& q, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(q.adjoint() * h * q));
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Matrix> out;
  for (auto [b, e] : linalg::cluster_sorted(es.eigenvalues(), tol * scale)) {
    const Matrix v = q * es.eigenvectors().middleCols(b, e - b);
    out.push_back(v * v.adjoint());
  }
  return out;
}

}  // namespace detail

/// Decomposes I(sigma, phi) at point x. The blocks are ordered canonically by
/// their characters on the isotropy group, so the result does not depend on
/// the seed.
inline std::vector<CentralBlock> central_decomposition(const Component& comp, std::size_t x,
                                                       std::uint64_t seed = 0x5eedULL, double tol = 1e-8) {
  const auto ia = intertwiner_algebra(comp, x);
  const Index d = comp.space()->dim(x);
  Rng rng(seed);

  // centre of I: combinations of the basis commuting with every generator
  Matrix sys(static_cast<Index>(ia.generators.size()) * d * d, static_cast<Index>(ia.dim()));
  for (std::size_t k = 0; k < ia.dim(); ++k)
    for (std::size_t g = 0; g < ia.generators.size(); ++g)
      sys.block(static_cast<Index>(g) * d * d, static_cast<Index>(k), d * d, 1) =
          linalg::vec(ia.basis[k] * ia.generators[g] - ia.generators[g] * ia.basis[k]);
  const Matrix coeffs = linalg::null_space(sys, 1e-9);
  std::vector<Matrix> centre;
  for (Index j = 0; j < coeffs.cols(); ++j) {
    Matrix z = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < ia.dim(); ++k) z += coeffs(static_cast<Index>(k), j) * ia.basis[k];
    centre.push_back(z);
  }

  std::vector<CentralBlock> blocks;
  const Matrix full = Matrix::Identity(d, d);
  for (const Matrix& z : detail::spectral_projections(detail::random_hermitian_in(centre, d, rng), full, tol)) {
    CentralBlock blk;
    blk.central = z;
    const Matrix range = linalg::orth(z, 1e-8);
    blk.minimal = detail::spectral_projections(detail::random_hermitian_in(ia.basis, d, rng), range, tol);
    blk.rank = blk.minimal.empty() ? 0 : static_cast<Index>(std::lround(blk.minimal.front().trace().real()));
    const double tz = z.trace().real();
    for (const auto& u : ia.generators) {
      const cplx c = (z * u).trace() / tz;
      blk.character.push_back(std::round(c.real() * 1e8) / 1e8);
      blk.character.push_back(std::round(c.imag() * 1e8) / 1e8);
    }
    blocks.push_back(std::move(blk));
  }
  std::stable_sort(blocks.begin(), blocks.end(), [](const CentralBlock& a, const CentralBlock& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    if (a.minimal.size() != b.minimal.size()) return a.minimal.size() < b.minimal.size();
    return a.character < b.character;
  });
  return blocks;
}

/// An irreducible representation of the model: the restriction of evaluation
/// at a grid point to the range of a minimal projection of I(sigma, phi).
/// Points of one W_sigma-orbit give equivalent irreducibles; they share the
/// orbit's base point in `name()`.
struct IrrepDescriptor {
  std::string component;
  std::size_t component_index = 0;
  std::size_t orbit = 0;
  std::string base_point;
  std::size_t point = 0;  ///< the grid point at which `projection` lives
  std::size_t klass = 0;
  Index rank = 0;          ///< dimension of the irreducible
  Index multiplicity = 0;  ///< copies in the fiber
  Matrix projection;

  std::string name() const { return component + "@" + base_point + "#" + std::to_string(klass); }
};

/// One descriptor per class of minimal projection at the point x. The
/// decomposition is computed at the orbit's base point and transported to x.
inline std::vector<IrrepDescriptor> irreducibles_at(const AlgebraModel& model, std::size_t c, std::size_t x,
                                                    std::uint64_t seed = 0x5eedULL) {
  const Component& comp = model[c];
  const auto& act = comp.action();
  const std::size_t orbit = act.orbit_of(x);
  const std::size_t b = act.base_point(orbit);
  const Matrix u = act.unitary(act.transport(x), b);
  std::vector<IrrepDescriptor> out;
  const auto blocks = central_decomposition(comp, b, seed);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    IrrepDescriptor d;
    d.component = comp.id();
    d.component_index = c;
    d.orbit = orbit;
    d.base_point = comp.grid()[b].label;
    d.point = x;
    d.klass = k;
    d.rank = blocks[k].rank;
    d.multiplicity = static_cast<Index>(blocks[k].minimal.size());
    d.projection = u * blocks[k].minimal.front() * u.adjoint();
    out.push_back(std::move(d));
  }
  return out;
}

inline std::vector<IrrepDescriptor> irreducibles_at(const AlgebraModel& model, const std::string& component,
                                                    const std::string& point, std::uint64_t seed = 0x5eedULL) {
  const std::size_t c = model.require(component);
  return irreducibles_at(model, c, model[c].grid().require_index(point), seed);
}

/// Comparison of the image of the fixed-point algebra under evaluation at a
/// point with the commutant of the intertwiner algebra there.
struct FiberImageReport {
  Matrix image;      ///< orthonormal basis, vectorized
  Matrix commutant;  ///< orthonormal basis, vectorized
  double span_distance = 0.0;

  Index image_dim() const { return image.cols(); }
  Index commutant_dim() const { return commutant.cols(); }
};

inline FiberImageReport fiber_image(const Component& comp, std::size_t x) {
  const auto& basis = comp.basis();
  const Index d = comp.space()->dim(x);
  const auto& on_orbit = basis.elements_on_orbit(comp.action().orbit_of(x));
  Matrix vals(d * d, static_cast<Index>(on_orbit.size()));
  for (std::size_t j = 0; j < on_orbit.size(); ++j) vals.col(static_cast<Index>(j)) = linalg::vec(basis[on_orbit[j]][x]);
  FiberImageReport r;
  r.image = linalg::orth(vals, 1e-9);
  r.commutant = commutant(intertwiner_algebra(comp, x).generators, d);
  r.span_distance = r.image.cols() == r.commutant.cols() ? linalg::span_distance(r.image, r.commutant) : 1.0;
  return r;
}

inline FiberImageReport fiber_image(const Component& comp, const std::string& point) {
  return fiber_image(comp, comp.grid().require_index(point));
}

}  // namespace tdual
