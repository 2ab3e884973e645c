#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "tdual/core.hpp"

using namespace tdual;
using namespace tdual::testing;

namespace {

/// Fixed-point basis computed from the full invariance system over all points
/// at once (no orbit reduction): unknowns are every entry of every fiber matrix.
std::vector<OperatorField> fixed_points_by_full_system(const ProjectiveAction& a) {
  const SpacePtr& s = a.space();
  std::vector<Index> off{0};
  for (std::size_t x = 0; x < s->size(); ++x) off.push_back(off.back() + s->dim(x) * s->dim(x));
  const Index n = off.back();
  Matrix sys(n * static_cast<Index>(a.order()), n);
  sys.setZero();
  for (std::size_t w = 0; w < a.order(); ++w) {
    const Index r0 = static_cast<Index>(w) * n;
    for (std::size_t x = 0; x < s->size(); ++x) {
      const std::size_t y = a.act(w, x);
      const Matrix& u = a.unitary(w, x);
      // vec(U T U^*) = (conj(U) kron U) vec(T)
      const Index d = s->dim(x);
      for (Index p = 0; p < d; ++p)
        for (Index q = 0; q < d; ++q)
          for (Index i = 0; i < d; ++i)
            for (Index j = 0; j < d; ++j)
              sys(r0 + off[y] + q * d + p, off[x] + j * d + i) += u(p, i) * std::conj(u(q, j));
      for (Index t = 0; t < d * d; ++t) sys(r0 + off[y] + t, off[y] + t) -= 1.0;
    }
  }
  const Matrix ns = linalg::null_space(sys, 1e-8);
  std::vector<OperatorField> out;
  for (Index c = 0; c < ns.cols(); ++c) out.push_back(OperatorField::unflatten(s, s, ns.col(c)));
  return out;
}

}  // namespace

// ---------------------------------------------------------------- rank_one

TEST(RankOne, UnitVectorGivesCoordinateProjection) {
  auto s = make_space({2});
  Vector e1(2);
  e1 << 1.0, 0.0;
  VectorField v(s, {e1});
  const OperatorField p = rank_one(v, v);
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  EXPECT_LT(linalg::max_abs(p[0] - expect), 1e-15);
}

TEST(RankOne, ZeroVectorGivesZeroField) {
  auto s = make_space({3, 2});
  Rng rng(3);
  const OperatorField f = rank_one(random_vector_field(s, rng), VectorField::zero(s));
  EXPECT_EQ(f.norm(), 0.0);
}

TEST(RankOne, MatchesEntrywiseOuterProduct) {
  auto s = make_space({3});
  Rng rng(4);
  const VectorField v1 = random_vector_field(s, rng), v2 = random_vector_field(s, rng);
  const OperatorField f = rank_one(v2, v1);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) EXPECT_LT(std::abs(f[0](i, j) - v2[0](i) * std::conj(v1[0](j))), 1e-14);
  // Applying the field to v gives v2 <v1, v>.
  const Vector v = rng.gaussian_vector(3);
  EXPECT_LT((f[0] * v - v2[0] * v1[0].dot(v)).norm(), 1e-13);
}

TEST(RankOne, RejectsDifferentBases) {
  auto a = make_space({2});
  auto b = make_space({2, 2});
  EXPECT_THROW(rank_one(VectorField::zero(a), VectorField::zero(b)), ShapeError);
}

// ---------------------------------------------------------------- actions

TEST(ProjectiveAction, RejectsNonUnitary) {
  auto s = make_space({2});
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 2.0;
  EXPECT_THROW(ProjectiveAction(FiniteGroup::cyclic(2), s, {{0}, {0}}, {{Matrix::Identity(2, 2)}, {bad}}),
               ValidationError);
}

TEST(ProjectiveAction, RejectsCocycleBeyondScalar) {
  // U_r^2 must be a scalar multiple of U_e; a rotation by 90 degrees in a
  // 2-dim fiber squares to -I (fine), by 60 degrees it does not.
  auto s = make_space({2});
  const double t = std::numbers::pi / 3;
  Matrix rot(2, 2);
  rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  EXPECT_THROW(ProjectiveAction(FiniteGroup::cyclic(2), s, {{0}, {0}}, {{Matrix::Identity(2, 2)}, {rot}}),
               ValidationError);
  Matrix quarter(2, 2);
  quarter << 0, -1, 1, 0;
  EXPECT_NO_THROW(ProjectiveAction(FiniteGroup::cyclic(2), s, {{0}, {0}}, {{Matrix::Identity(2, 2)}, {quarter}}));
}

TEST(ProjectiveAction, RejectsNonActionPermutation) {
  auto s = make_space({1, 1, 1});
  const Matrix i = Matrix::Identity(1, 1);
  // A 3-cycle is not an involution, so it cannot represent the generator of Z2.
  EXPECT_THROW(ProjectiveAction(FiniteGroup::cyclic(2), s, {{0, 1, 2}, {1, 2, 0}}, {{i, i, i}, {i, i, i}}),
               ValidationError);
}

TEST(ProjectiveAction, OrbitsAndTransport) {
  const ProjectiveAction a = swap_action(2);
  ASSERT_EQ(a.orbit_count(), 1u);
  EXPECT_EQ(a.base_point(0), 0u);
  EXPECT_EQ(a.act(a.transport(1), 0), 1u);
}

// ---------------------------------------------------------------- ad_action

TEST(AdAction, IdentityElementFixesEverything) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = random_instance(rng);
    const OperatorField t = random_field(inst.action.space(), rng);
    EXPECT_LT((ad_action(inst.action, inst.action.group().identity(), t) - t).norm(), 1e-12);
  }
}

TEST(AdAction, RankOneCovariance) {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = random_instance(rng);
    const auto& a = inst.action;
    const SpacePtr& s = a.space();
    const VectorField v1 = random_vector_field(s, rng), v2 = random_vector_field(s, rng);
    for (std::size_t w = 0; w < a.order(); ++w) {
      // Move the vectors by hand: (U_w v)(w x) = U_w(x) v(x).
      std::vector<Vector> m1(s->size()), m2(s->size());
      for (std::size_t x = 0; x < s->size(); ++x) {
        m1[a.act(w, x)] = a.unitary(w, x) * v1[x];
        m2[a.act(w, x)] = a.unitary(w, x) * v2[x];
      }
      const OperatorField lhs = ad_action(a, w, rank_one(v2, v1));
      const OperatorField rhs = rank_one(VectorField(s, m2), VectorField(s, m1));
      for (std::size_t x = 0; x < s->size(); ++x) EXPECT_LT(linalg::max_abs(lhs[x] - rhs[x]), 1e-12);
    }
  }
}

TEST(AdAction, PhaseTwistedUnitariesGiveSameOutput) {
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = random_instance(rng);
    const auto& a = inst.action;
    auto us = a.unitaries();
    for (auto& row : us)
      for (auto& u : row) u *= rng.phase();
    const ProjectiveAction twisted(a.group(), a.space(), a.perm(), us);
    const OperatorField t = random_field(a.space(), rng);
    for (std::size_t w = 0; w < a.order(); ++w)
      EXPECT_LT((ad_action(a, w, t) - ad_action(twisted, w, t)).norm(), 1e-12);
  }
}

TEST(AdAction, IsHomomorphismAndStarAutomorphism) {
  Rng rng(14);
  for (int trial = 0; trial < 8; ++trial) {
    auto inst = random_instance(rng);
    const auto& a = inst.action;
    const OperatorField s = random_field(a.space(), rng), t = random_field(a.space(), rng);
    for (std::size_t z = 0; z < a.order(); ++z)
      for (std::size_t w = 0; w < a.order(); ++w) {
        const OperatorField lhs = ad_action(a, z, ad_action(a, w, t));
        const OperatorField rhs = ad_action(a, a.group().mul(z, w), t);
        EXPECT_LT((lhs - rhs).norm(), 1e-11);
      }
    for (std::size_t w = 0; w < a.order(); ++w) {
      EXPECT_LT((ad_action(a, w, s * t) - ad_action(a, w, s) * ad_action(a, w, t)).norm(), 1e-10);
      EXPECT_LT((ad_action(a, w, t.adjoint()) - ad_action(a, w, t).adjoint()).norm(), 1e-12);
    }
  }
}

TEST(AdAction, RejectsUnknownElement) {
  const ProjectiveAction a = swap_action(1);
  EXPECT_THROW(ad_action(a, 7, OperatorField::identity(a.space())), ShapeError);
}

// ---------------------------------------------------------------- average

TEST(Average, TrivialGroupIsIdentity) {
  Rng rng(21);
  auto s = make_space({2, 3});
  const ProjectiveAction a = ProjectiveAction::trivial(s);
  const OperatorField t = random_field(s, rng);
  EXPECT_LT((average(a, t) - t).norm(), 1e-15);
}

TEST(Average, SwapSpreadsHalfWeight) {
  const ProjectiveAction a = swap_action(2);
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  const OperatorField t = OperatorField::at_point(a.space(), a.space(), 0, m);
  const OperatorField avg = average(a, t);
  EXPECT_LT(linalg::max_abs(avg[0] - 0.5 * m), 1e-15);
  EXPECT_LT(linalg::max_abs(avg[1] - 0.5 * m), 1e-15);
}

TEST(Average, PropertiesOnRandomInstances) {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = random_instance(rng);
    const auto& a = inst.action;
    const OperatorField t = random_field(a.space(), rng);
    const OperatorField avg = average(a, t);
    EXPECT_LT(invariance_defect(a, avg), 1e-10) << inst.description;
    EXPECT_LT((average(a, avg) - avg).norm(), 1e-10);
    EXPECT_LT((average(a, t.adjoint()) - avg.adjoint()).norm(), 1e-10);
    EXPECT_LE(avg.norm(), t.norm() + 1e-10);
  }
}

// ---------------------------------------------------------------- fixed points

TEST(FixedPointAlgebra, TrivialGroupGivesFullMatrixAlgebra) {
  const ProjectiveAction a = ProjectiveAction::trivial(make_space({3}));
  EXPECT_EQ(fixed_point_algebra(a).dim(), 9u);
}

TEST(FixedPointAlgebra, FreeSwapHasOneMatrixAlgebraPerOrbit) {
  for (Index d = 1; d <= 4; ++d) EXPECT_EQ(fixed_point_algebra(swap_action(d)).dim(), static_cast<std::size_t>(d * d));
}

TEST(FixedPointAlgebra, DiagonalFlipGivesDiagonalMatrices) {
  const auto b = fixed_point_algebra(diag_flip_action());
  ASSERT_EQ(b.dim(), 2u);
  for (const auto& f : b.elements()) {
    EXPECT_LT(std::abs(f[0](0, 1)), 1e-14);
    EXPECT_LT(std::abs(f[0](1, 0)), 1e-14);
  }
}

TEST(FixedPointAlgebra, AgreesWithFullSystemSolve) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = random_instance(rng);
    const auto basis = fixed_point_algebra(inst.action);
    const auto oracle = fixed_points_by_full_system(inst.action);
    ASSERT_EQ(basis.dim(), oracle.size()) << inst.description;
    EXPECT_LT(field_span_distance(basis.elements(), oracle), 1e-9) << inst.description;
  }
}

TEST(FixedPointAlgebra, ClosedUnderProductAndAdjoint) {
  Rng rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = random_instance(rng);
    const auto basis = fixed_point_algebra(inst.action);
    const OperatorField a = basis.combine(rng.gaussian_vector(static_cast<Index>(basis.dim())));
    const OperatorField b = basis.combine(rng.gaussian_vector(static_cast<Index>(basis.dim())));
    const OperatorField ab = a * b;
    EXPECT_LT((basis.project(ab) - ab).norm(), 1e-9 * std::max(1.0, ab.norm()));
    EXPECT_LT((basis.project(a.adjoint()) - a.adjoint()).norm(), 1e-9 * std::max(1.0, a.norm()));
  }
}

TEST(FixedPointAlgebra, BasisIsOrthonormal) {
  Rng rng(33);
  auto inst = random_instance(rng);
  const auto basis = fixed_point_algebra(inst.action);
  for (std::size_t i = 0; i < basis.dim(); ++i)
    for (std::size_t j = 0; j < basis.dim(); ++j)
      EXPECT_LT(std::abs(basis[i].hs_inner(basis[j]) - (i == j ? 1.0 : 0.0)), 1e-12);
}

// ---------------------------------------------------------------- interior tensor

namespace {
TensorProduct tensor(const GramModule<OperatorField>& e, const SpacePtr& h) { return tensor_over_fixed_points(e, h); }
}  // namespace

TEST(InteriorTensor, UnitModuleReproducesTheSpace) {
  auto s = make_space({2, 3});
  const ProjectiveAction a = ProjectiveAction::trivial(s);
  const TensorProduct tp = tensor(unit_module(a), s);
  EXPECT_EQ(tp.space()->dims(), s->dims());
  EXPECT_LT(tp.inner_product_residual(), 1e-12);
  const OperatorField t = tp.creation(0);
  EXPECT_LT((t.adjoint() * t - OperatorField::identity(s)).norm(), 1e-12);
}

TEST(InteriorTensor, ProjectionModuleHasRankOfProjection) {
  auto s = make_space({4});
  Rng rng(41);
  const Matrix v = rng.haar_unitary(4);
  const Matrix p = v.leftCols(2) * v.leftCols(2).adjoint();
  GramModule<OperatorField> e{{"p"}, {{OperatorField(s, s, {p})}}};
  const TensorProduct tp = tensor(e, s);
  EXPECT_EQ(tp.space()->dim(0), 2);
  EXPECT_LT(tp.inner_product_residual(), 1e-12);
}

TEST(InteriorTensor, NullDirectionIsQuotiented) {
  auto s = make_space({3});
  Rng rng(42);
  const Matrix g = rng.gaussian(3, 3);
  const OperatorField b(s, s, {g * g.adjoint()});
  GramModule<OperatorField> one{{"e"}, {{b}}};
  GramModule<OperatorField> two{{"e1", "e2"}, {{b, b}, {b, b}}};
  EXPECT_EQ(tensor(two, s).space()->dim(0), tensor(one, s).space()->dim(0));
  EXPECT_EQ(tensor(two, s).space()->dim(0), 3);
}

TEST(InteriorTensor, SymbolInnerProductsMatchGram) {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = random_instance(rng);
    const SpacePtr& h = inst.action.space();
    const TensorProduct tp = tensor(inst.module, h);
    for (std::size_t i = 0; i < inst.module.size(); ++i)
      for (std::size_t j = 0; j < inst.module.size(); ++j) {
        const VectorField v = random_vector_field(h, rng), w = random_vector_field(h, rng);
        const VectorField ev = tp.symbol(i, v), ew = tp.symbol(j, w);
        for (std::size_t x = 0; x < h->size(); ++x) {
          const cplx lhs = ev[x].dot(ew[x]);
          const cplx rhs = v[x].dot(inst.module.gram[i][j][x] * w[x]);
          EXPECT_LT(std::abs(lhs - rhs), 1e-9);
        }
      }
  }
}

TEST(InteriorTensor, QuotientRemovesExactlyTheKernel) {
  Rng rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = random_instance(rng);
    const SpacePtr& h = inst.action.space();
    const TensorProduct tp = tensor(inst.module, h);
    for (std::size_t x = 0; x < h->size(); ++x) {
      const Matrix& g = tp.symbol_gram(x);
      EXPECT_EQ(tp.space()->dim(x), linalg::numerical_rank(g, 1e-8));
      // Symbols in the kernel of the Gram map to zero.
      const Matrix ker = linalg::null_space(g, 1e-6);
      if (ker.cols() > 0) {
        EXPECT_LT(linalg::max_abs(tp.symbol_map(x) * ker), 1e-7);
      }
    }
  }
}

TEST(InteriorTensor, RejectsIndefiniteGram) {
  auto s = make_space({2});
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = -1.0;
  GramModule<OperatorField> e{{"e"}, {{OperatorField(s, s, {m})}}};
  EXPECT_THROW(tensor(e, s), ValidationError);
}

// ---------------------------------------------------------------- module structure

TEST(ModuleStructure, AlgebraOverItselfIsExact) {
  const ProjectiveAction a = diag_flip_action();
  const auto rep = verify_module_structure(unit_module(a), a);
  EXPECT_TRUE(rep.passed);
  EXPECT_LT(rep.max_residual(), 1e-12);
  EXPECT_EQ(rep.image_dim, 2u);
  EXPECT_EQ(rep.target_dim, 2u);
}

TEST(ModuleStructure, RandomProjectionModulesPass) {
  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = random_instance(rng);
    const auto rep = verify_module_structure(inst.module, inst.action);
    EXPECT_TRUE(rep.passed) << inst.description << " residual " << rep.max_residual() << " dims " << rep.image_dim
                            << "/" << rep.target_dim;
  }
}

TEST(ModuleStructure, RejectsModuleOverTheWrongAlgebra) {
  const ProjectiveAction a = diag_flip_action();
  Matrix off(2, 2);
  off << 1, 0.5, 0.5, 1;  // positive but not diagonal, hence not invariant
  GramModule<OperatorField> e{{"e"}, {{OperatorField(a.space(), a.space(), {off})}}};
  EXPECT_THROW(verify_module_structure(e, a), ValidationError);
  EXPECT_THROW(verify_compacts_iso(e, a), ValidationError);
}

// ---------------------------------------------------------------- compacts

TEST(CompactsIso, TrivialGroupClassicalCase) {
  auto s = make_space({3});
  const ProjectiveAction a = ProjectiveAction::trivial(s);
  Rng rng(61);
  const auto e = random_projection_module(a, 2, rng);
  const auto rep = verify_compacts_iso(e, a);
  EXPECT_TRUE(rep.passed);
  const Index r = tensor(e, s).space()->dim(0);
  EXPECT_EQ(rep.target_dim, static_cast<std::size_t>(r * r));
}

TEST(CompactsIso, FreeSwapDimensionByOrbitCount) {
  const ProjectiveAction a = swap_action(2);
  Rng rng(62);
  const auto e = random_projection_module(a, 2, rng);
  const auto rep = verify_compacts_iso(e, a);
  EXPECT_TRUE(rep.passed);
  // One free orbit: the invariants are determined by the value at one point.
  const Index r = tensor(e, a.space()).space()->dim(0);
  EXPECT_EQ(rep.target_dim, static_cast<std::size_t>(r * r));
}

TEST(CompactsIso, AveragedElementaryOperatorIdentity) {
  Rng rng(63);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = random_instance(rng);
    const auto rep = verify_compacts_iso(inst.module, inst.action);
    EXPECT_LT(rep.average_residual, 1e-9) << inst.description;
    EXPECT_TRUE(rep.passed) << inst.description << " dims " << rep.domain_dim << "/" << rep.image_dim << "/"
                            << rep.target_dim;
  }
}

// ---------------------------------------------------------------- direct sums

TEST(DirectSum, SingleSummand) {
  Rng rng(71);
  auto s = make_space({2});
  const OperatorField f = random_field(s, rng);
  const DirectSum<OperatorField> d({f});
  EXPECT_DOUBLE_EQ(d.norm(), f.norm());
  EXPECT_LT(std::abs(d.inner(d) - f.hs_inner(f)), 1e-12);
}

TEST(DirectSum, SupremumNorm) {
  auto s = make_space({1});
  const DirectSum<OperatorField> d({OperatorField(s, s, {Matrix::Constant(1, 1, 3.0)}),
                                    OperatorField(s, s, {Matrix::Constant(1, 1, 5.0)})});
  EXPECT_DOUBLE_EQ(d.norm(), 5.0);
}

TEST(DirectSum, DistinctSummandsAreOrthogonal) {
  Rng rng(72);
  auto s = make_space({2});
  const OperatorField z = OperatorField::zero(s);
  const DirectSum<OperatorField> a({random_field(s, rng), z}), b({z, random_field(s, rng)});
  EXPECT_EQ(a.inner(b), cplx(0.0));
  EXPECT_EQ((a * b).norm(), 0.0);
}
