#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tdual/core/projective_action.hpp"

namespace tdual {

/// A Hilbert module presented by generators and their Gram matrix
/// G_ij = <e_i, e_j> with entries in an algebra whose elements have type Elem.
template <class Elem>
struct GramModule {
  std::vector<std::string> generators;
  std::vector<std::vector<Elem>> gram;

  std::size_t size() const { return generators.size(); }

  void require_square() const {
    if (gram.size() != generators.size()) throw ShapeError("GramModule: gram must have one row per generator");
    for (const auto& row : gram)
      if (row.size() != generators.size()) throw ShapeError("GramModule: gram must be square");
  }
};

/// Result of an interior tensor product E (x)_B H for a module E over B and a
/// fibered space H on which B acts fiberwise.
///
/// At each point x the symbols e_i (x) v, v in H_x, span C^k (x) H_x
/// (generator-major: index i * d_x + a). Their scalar Gram matrix is
/// Gamma_x = [ G_ij(x) ] and the fiber of the quotient is C^{r_x}, r_x the
/// numerical rank of Gamma_x, with the symbol map Phi_x satisfying
/// Phi_x^* Phi_x = Gamma_x.
class TensorProduct {
 public:
  TensorProduct(SpacePtr h, SpacePtr space, std::vector<Matrix> symbol_maps, std::vector<Matrix> grams,
                std::size_t generators)
      : h_(std::move(h)),
        space_(std::move(space)),
        phi_(std::move(symbol_maps)),
        gamma_(std::move(grams)),
        k_(generators) {}

  const SpacePtr& space() const { return space_; }
  const SpacePtr& h_space() const { return h_; }
  std::size_t generators() const { return k_; }
  const Matrix& symbol_map(std::size_t x) const { return phi_.at(x); }
  const Matrix& symbol_gram(std::size_t x) const { return gamma_.at(x); }
  Index total_dim() const { return space_->total_dim(); }

  /// The class of e_i (x) v.
  VectorField symbol(std::size_t i, const VectorField& v) const {
    std::vector<Vector> out;
    for (std::size_t x = 0; x < space_->size(); ++x) out.push_back(creation_at(i, x) * v[x]);
    return VectorField(space_, std::move(out));
  }

  /// The creation operator T_{e_i} : v -> e_i (x) v.
  OperatorField creation(std::size_t i) const {
    if (i >= k_) throw ShapeError("TensorProduct::creation: generator index out of range");
    std::vector<Matrix> m;
    for (std::size_t x = 0; x < space_->size(); ++x) m.push_back(creation_at(i, x));
    return OperatorField(h_, space_, std::move(m));
  }

  Matrix creation_at(std::size_t i, std::size_t x) const {
    const Index d = h_->dim(x);
    return phi_.at(x).middleCols(static_cast<Index>(i) * d, d);
  }

  /// max_x || Phi_x^* Phi_x - Gamma_x ||, the inner-product identity residual.
  double inner_product_residual() const {
    double r = 0.0;
    for (std::size_t x = 0; x < phi_.size(); ++x)
      r = std::max(r, linalg::max_abs(phi_[x].adjoint() * phi_[x] - gamma_[x]));
    return r;
  }

  /// The action induced on the quotient by I (x) U_w, for Gram entries that
  /// are invariant under the action on H.
  ProjectiveAction induced_action(const ProjectiveAction& h_action, double tol = 1e-8) const {
    if (!(*h_action.space() == *h_)) throw ShapeError("induced_action: action is not on the tensored space");
    std::vector<std::vector<Matrix>> us(h_action.order());
    for (std::size_t w = 0; w < h_action.order(); ++w)
      for (std::size_t x = 0; x < space_->size(); ++x) {
        const std::size_t y = h_action.act(w, x);
        const Matrix amp = linalg::kron(Matrix::Identity(static_cast<Index>(k_), static_cast<Index>(k_)),
                                        h_action.unitary(w, x));
        us[w].push_back(phi_[y] * amp * pseudo_inverse(x));
      }
    return ProjectiveAction(h_action.group(), space_, h_action.perm(), std::move(us), tol);
  }

 private:
  Matrix pseudo_inverse(std::size_t x) const {
    // Phi_x has orthogonal rows with norms sqrt(lambda); its pseudo-inverse is Phi_x^* diag(1/lambda).
    const Matrix& p = phi_[x];
    Matrix out = p.adjoint();
    for (Index r = 0; r < p.rows(); ++r) out.col(r) /= p.row(r).squaredNorm();
    return out;
  }

  SpacePtr h_;
  SpacePtr space_;
  std::vector<Matrix> phi_;
  std::vector<Matrix> gamma_;
  std::size_t k_;
};

struct TensorOptions {
  double rtol = 1e-9;     ///< kernel threshold relative to the largest Gram eigenvalue
  double psd_tol = 1e-8;  ///< tolerated negative eigenvalue, relative
};

/// Builds E (x)_B H. `act` realizes B on H as operator fields (endomorphisms of h).
template <class Elem>
TensorProduct interior_tensor(const GramModule<Elem>& e, const SpacePtr& h,
                              const std::function<OperatorField(const Elem&)>& act, TensorOptions opt = {}) {
  e.require_square();
  const std::size_t k = e.size();
  std::vector<std::vector<OperatorField>> g;
  g.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<OperatorField> row;
    for (std::size_t j = 0; j < k; ++j) {
      OperatorField f = act(e.gram[i][j]);
      if (!(*f.source() == *h) || !(*f.target() == *h))
        throw ShapeError("interior_tensor: algebra does not act on the given space");
      row.push_back(std::move(f));
    }
    g.push_back(std::move(row));
  }

  std::vector<Matrix> grams;
  std::vector<Eigen::SelfAdjointEigenSolver<Matrix>> eig;
  double lmax = 0.0;
  for (std::size_t x = 0; x < h->size(); ++x) {
    const Index d = h->dim(x);
    Matrix gam(static_cast<Index>(k) * d, static_cast<Index>(k) * d);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        gam.block(static_cast<Index>(i) * d, static_cast<Index>(j) * d, d, d) = g[i][j][x];
    if (linalg::max_abs(gam - gam.adjoint()) > opt.psd_tol * std::max(1.0, linalg::max_abs(gam)))
      throw ValidationError("interior_tensor: Gram matrix is not Hermitian");
    eig.emplace_back(linalg::hermitian_part(gam));
    if (gam.size() > 0) lmax = std::max(lmax, eig.back().eigenvalues().cwiseAbs().maxCoeff());
    grams.push_back(std::move(gam));
  }

  std::vector<Index> dims;
  std::vector<Matrix> phis;
  for (std::size_t x = 0; x < h->size(); ++x) {
    const auto& es = eig[x];
    const Index n = grams[x].rows();
    if (n > 0 && es.eigenvalues().minCoeff() < -opt.psd_tol * std::max(1.0, lmax))
      throw ValidationError("interior_tensor: Gram matrix is not positive semidefinite at point '" +
                            h->base()[x].label + "'");
    std::vector<Index> keep;
    for (Index i = n - 1; i >= 0; --i)
      if (es.eigenvalues()(i) > opt.rtol * lmax && es.eigenvalues()(i) > 0.0) keep.push_back(i);
    Matrix phi(static_cast<Index>(keep.size()), n);
    for (std::size_t r = 0; r < keep.size(); ++r)
      phi.row(static_cast<Index>(r)) =
          std::sqrt(es.eigenvalues()(keep[r])) * es.eigenvectors().col(keep[r]).adjoint();
    dims.push_back(phi.rows());
    phis.push_back(std::move(phi));
  }
  auto space = std::make_shared<const FiberedSpace>(h->base_ptr(), std::move(dims));
  return TensorProduct(h, std::move(space), std::move(phis), std::move(grams), k);
}

}  // namespace tdual
