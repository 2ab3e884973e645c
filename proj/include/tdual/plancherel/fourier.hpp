#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tdual/restriction/adjoint.hpp"

namespace tdual {

/// Fourier data on a model: one endomorphism field per component, with no
/// invariance required.
using FourierField = DirectSum<OperatorField>;

inline FourierField zero_fourier(const AlgebraModel& model) {
  std::vector<OperatorField> f;
  for (const auto& c : model.components()) f.push_back(OperatorField::zero(c.space()));
  return FourierField(std::move(f));
}

inline FourierField random_fourier(const AlgebraModel& model, Rng& rng) {
  std::vector<OperatorField> f;
  for (const auto& c : model.components()) {
    std::vector<Matrix> m;
    for (std::size_t x = 0; x < c.grid().size(); ++x) m.push_back(rng.gaussian(c.space()->dim(x), c.space()->dim(x)));
    f.emplace_back(c.space(), c.space(), std::move(m));
  }
  return FourierField(std::move(f));
}

/// sum_x m(x) Tr(F_1(x)^* F_2(x)) for one field.
inline cplx fourier_inner(const OperatorField& f1, const OperatorField& f2, const std::vector<double>& m) {
  f1.require_same_shape(f2);
  if (m.size() != f1.size()) throw ShapeError("fourier_inner: one weight per point required");
  cplx s = 0.0;
  for (std::size_t x = 0; x < f1.size(); ++x) s += m[x] * (f1[x].adjoint() * f2[x]).trace();
  return s;
}

/// Summed over the components of the model, with the model's Plancherel weights.
inline cplx fourier_inner(const AlgebraModel& model, const FourierField& f1, const FourierField& f2) {
  if (f1.size() != model.size() || f2.size() != model.size()) throw ShapeError("fourier_inner: one field per component required");
  cplx s = 0.0;
  for (std::size_t c = 0; c < model.size(); ++c) s += fourier_inner(f1[c], f2[c], model[c].weights());
  return s;
}

inline double weight_invariance_defect(const ProjectiveAction& action, const std::vector<double>& m) {
  if (m.size() != action.space()->size()) throw ShapeError("Plancherel weights: one weight per point required");
  double d = 0.0;
  for (std::size_t w = 0; w < action.order(); ++w)
    for (std::size_t x = 0; x < m.size(); ++x) d = std::max(d, std::abs(m[action.act(w, x)] - m[x]));
  return d;
}

namespace detail {

/// (1/|W|) sum_w U_w(w^{-1} y) F(w^{-1} y) U_w(w^{-1} y)^*, for every y.
inline OperatorField weyl_average(const ProjectiveAction& action, const OperatorField& f) {
  std::vector<Matrix> out;
  const auto& grp = action.group();
  for (std::size_t y = 0; y < f.size(); ++y) {
    Matrix acc = Matrix::Zero(f[y].rows(), f[y].cols());
    for (std::size_t w = 0; w < action.order(); ++w) {
      const std::size_t from = action.act(grp.inv(w), y);
      const Matrix& u = action.unitary(w, from);
      acc += u * f[from] * u.adjoint();
    }
    out.push_back(acc / static_cast<double>(action.order()));
  }
  return OperatorField(f.source(), f.target(), std::move(out));
}

}  // namespace detail

/// The averaging projection onto invariant fields. It is the orthogonal
/// projection for fourier_inner only when m is invariant, so m is checked.
inline OperatorField averaging_projection(const OperatorField& f, const ProjectiveAction& action,
                                          const std::vector<double>& m, double tol = 1e-12) {
  if (weight_invariance_defect(action, m) > tol * std::max(1.0, *std::max_element(m.begin(), m.end())))
    throw ValidationError("averaging_projection: Plancherel weights are not invariant");
  return detail::weyl_average(action, f);
}

inline FourierField averaging_projection(const AlgebraModel& model, const FourierField& f) {
  std::vector<OperatorField> out;
  for (std::size_t c = 0; c < model.size(); ++c)
    out.push_back(averaging_projection(f[c], model[c].action(), model[c].weights()));
  return FourierField(std::move(out));
}

/// Residuals of the projection identities on random fields, for weights m
/// that need not be invariant (so that the failure of self-adjointness for
/// non-invariant weights can be observed).
struct ProjectionReport {
  double idempotence = 0.0;       ///< ||Av Av F - Av F||
  double self_adjointness = 0.0;  ///< |<Av F, H> - <F, Av H>|, relative
  double contraction = 0.0;       ///< max(0, <Av F, Av F> - <F, F>), relative
  double range = 0.0;             ///< invariance defect of Av F

  bool holds(double tol = 1e-10) const {
    return idempotence <= tol && self_adjointness <= tol && contraction <= tol && range <= tol;
  }
};

inline ProjectionReport projection_properties(const ProjectiveAction& action, const std::vector<double>& m, Rng& rng,
                                              int trials = 10) {
  ProjectionReport r;
  const auto& s = action.space();
  auto random_field = [&] {
    std::vector<Matrix> v;
    for (std::size_t x = 0; x < s->size(); ++x) v.push_back(rng.gaussian(s->dim(x), s->dim(x)));
    return OperatorField(s, s, std::move(v));
  };
  for (int t = 0; t < trials; ++t) {
    const auto f = random_field(), h = random_field();
    const auto af = detail::weyl_average(action, f), ah = detail::weyl_average(action, h);
    const double nf = std::sqrt(std::abs(fourier_inner(f, f, m)));
    const double nh = std::sqrt(std::abs(fourier_inner(h, h, m)));
    const double scale = std::max(1e-300, nf * nh);
    r.idempotence = std::max(r.idempotence, (detail::weyl_average(action, af) - af).max_abs());
    r.self_adjointness = std::max(r.self_adjointness, std::abs(fourier_inner(af, h, m) - fourier_inner(f, ah, m)) / scale);
    r.contraction = std::max(r.contraction, (fourier_inner(af, af, m).real() - nf * nf) / std::max(1e-300, nf * nf));
    r.range = std::max(r.range, invariance_defect(action, af));
  }
  return r;
}

/// <F, h> = <F, Av h> for invariant F, and Av h vanishes on every component where h does.
struct WavePacketReport {
  cplx direct = 0.0;
  cplx averaged = 0.0;
  double difference = 0.0;  ///< relative
  double leakage = 0.0;     ///< largest entry of Av h on components where h is zero

  bool holds(double tol = 1e-10) const { return difference <= tol && leakage <= tol; }
};

inline WavePacketReport wave_packet_pairing_check(const AlgebraModel& model, const FourierField& f,
                                                  const FourierField& h, double tol = 1e-9) {
  for (std::size_t c = 0; c < model.size(); ++c)
    if (invariance_defect(model[c].action(), f[c]) > tol * std::max(1.0, f[c].norm()))
      throw ValidationError("wave_packet_pairing_check: F is not invariant on component '" + model[c].id() + "'");
  const auto ah = averaging_projection(model, h);
  WavePacketReport r;
  r.direct = fourier_inner(model, f, h);
  r.averaged = fourier_inner(model, f, ah);
  const double scale = std::max(1.0, std::sqrt(std::abs(fourier_inner(model, f, f)) * std::abs(fourier_inner(model, h, h))));
  r.difference = std::abs(r.direct - r.averaged) / scale;
  for (std::size_t c = 0; c < model.size(); ++c)
    if (h[c].max_abs() == 0.0) r.leakage = std::max(r.leakage, ah[c].max_abs());
  return r;
}

/// The averaged inner product of the restriction module against the
/// averaging projection of the field S_1 S_2^*, computed separately.
struct ConsistencyReport {
  std::string summand;
  double residual = 0.0;     ///< on the summand's G-side component
  double other_norm = 0.0;   ///< largest entry on the other components

  bool holds(double tol = 1e-10) const { return residual <= tol && other_norm <= tol; }
};

inline ConsistencyReport inner_product_wavepacket_consistency(const AdjointModule& adj, std::size_t summand,
                                                              const OperatorField& s1, const OperatorField& s2) {
  const auto& e = adj.ups();
  const auto& c = e[summand];
  const auto& big = *adj.big();
  const auto g = adj.g_inner(e.single(summand, s1), e.single(summand, s2));

  // the field S_1(x) S_2(x)^* placed on the G-side grid
  const auto& comp = big[c.big()];
  std::vector<Matrix> vals;
  for (std::size_t y = 0; y < comp.grid().size(); ++y) {
    const auto x = c.preimage(y);
    vals.push_back(x ? Matrix(s1[*x] * s2[*x].adjoint()) : Matrix::Zero(comp.space()->dim(y), comp.space()->dim(y)));
  }
  const OperatorField packet =
      averaging_projection(OperatorField(comp.space(), comp.space(), std::move(vals)), comp.action(), comp.weights());

  ConsistencyReport r;
  r.summand = c.id();
  r.residual = (g[c.big()] - packet).max_abs();
  for (std::size_t k = 0; k < big.size(); ++k)
    if (k != c.big()) r.other_norm = std::max(r.other_norm, g[k].max_abs());
  return r;
}

}  // namespace tdual
