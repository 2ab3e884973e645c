#pragma once

// Small builders shared by the unit tests.

#include <memory>
#include <string>
#include <vector>

#include "tdual/core/projective_action.hpp"
#include "tdual/core/rng.hpp"

namespace tdual::testing {

inline SpacePtr make_space(std::vector<Index> dims) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < dims.size(); ++i) labels.push_back("p" + std::to_string(i));
  auto base = std::make_shared<const BaseSpace>(BaseSpace::from_labels(labels));
  return std::make_shared<const FiberedSpace>(base, std::move(dims));
}

/// Z2 swapping two points with identity unitaries.
inline ProjectiveAction swap_action(Index d) {
  auto s = make_space({d, d});
  const Matrix i = Matrix::Identity(d, d);
  return ProjectiveAction(FiniteGroup::cyclic(2), s, {{0, 1}, {1, 0}}, {{i, i}, {i, i}});
}

/// Z2 fixing one point of C^2 with U = diag(1, -1).
inline ProjectiveAction diag_flip_action() {
  auto s = make_space({2});
  Matrix u = Matrix::Identity(2, 2);
  u(1, 1) = -1.0;
  return ProjectiveAction(FiniteGroup::cyclic(2), s, {{0}, {0}}, {{Matrix::Identity(2, 2)}, {u}});
}

inline OperatorField random_field(const SpacePtr& src, const SpacePtr& tgt, Rng& rng) {
  std::vector<Matrix> m;
  for (std::size_t x = 0; x < src->size(); ++x) m.push_back(rng.gaussian(tgt->dim(x), src->dim(x)));
  return OperatorField(src, tgt, std::move(m));
}

inline OperatorField random_field(const SpacePtr& s, Rng& rng) { return random_field(s, s, rng); }

inline VectorField random_vector_field(const SpacePtr& s, Rng& rng) {
  std::vector<Vector> v;
  for (std::size_t x = 0; x < s->size(); ++x) v.push_back(rng.gaussian_vector(s->dim(x)));
  return VectorField(s, std::move(v));
}

/// Projector distance between the spans of two field families (flattened).
inline double field_span_distance(const std::vector<OperatorField>& a, const std::vector<OperatorField>& b) {
  const Index n = a.empty() ? (b.empty() ? 0 : b.front().flatten().size()) : a.front().flatten().size();
  Matrix ma(n, static_cast<Index>(a.size())), mb(n, static_cast<Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) ma.col(static_cast<Index>(i)) = a[i].flatten();
  for (std::size_t i = 0; i < b.size(); ++i) mb.col(static_cast<Index>(i)) = b[i].flatten();
  return linalg::span_distance(linalg::orth(ma), linalg::orth(mb));
}

}  // namespace tdual::testing
