#include <gtest/gtest.h>

#include "tdual/io/bundled.hpp"
#include "tdual/ups/setting.hpp"

using namespace tdual;

namespace {

const Setting& sl2r() {
  static const Setting s = build_setting(bundled::sl2r());
  return s;
}

const Setting& gl3() {
  static const Setting s = build_setting(bundled::gl3_toy());
  return s;
}

// Lowest eigenvalue of a Hermitian matrix field, over all points.
double min_eigenvalue(const OperatorField& f) {
  double m = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x].rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(f[x]));
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return m;
}

}  // namespace

TEST(UpsComponent, Sl2rSummandsAreFullRectangularFields) {
  const auto& e = *sl2r().ups;
  ASSERT_EQ(e.size(), 2u);
  for (const auto& c : e.components()) {
    EXPECT_TRUE(c.full());
    EXPECT_EQ(c.small_group_order(), 1u);
    EXPECT_EQ(c.basis().dim(), 9u * 4u);  // nine points, 4x1 matrices
  }
  EXPECT_EQ(e[0].id(), "sigma0->PS0");
  EXPECT_TRUE(minimal_parabolic_shape(e).minimal());
}

TEST(UpsComponent, GlToyIsNotMinimal) {
  const auto& s = gl3();
  ASSERT_EQ(s.ups->size(), s.l->size());
  for (const auto& c : s.ups->components()) EXPECT_TRUE(c.full()) << c.id();
  const auto rep = minimal_parabolic_shape(*s.ups);
  EXPECT_FALSE(rep.minimal());
  const auto bad = rep.offending();
  EXPECT_NE(std::find(bad.begin(), bad.end(), "{a,a}{a}->{a,a,a}"), bad.end());
  // the J-level bimodules have trivial W_sigma(J) and pass
  EXPECT_TRUE(minimal_parabolic_shape(*s.stage->inner).minimal());
  EXPECT_TRUE(minimal_parabolic_shape(*s.stage->glued).minimal());
}

TEST(UpsComponent, OneBlockLeviPassesTrivially) {
  auto spec = bundled::gl3_toy();
  auto gl = spec.gl();
  gl.parabolic = Composition({3});
  gl.stage.clear();
  spec.body = gl;
  const auto s = build_setting(spec);
  EXPECT_TRUE(minimal_parabolic_shape(s).minimal());
  EXPECT_FALSE(minimal_parabolic_shape(*s.ups).minimal());
}

TEST(UpsComponent, RejectsInconsistentLinks) {
  const auto& s = sl2r();
  // sigma0 has 9 points but DS+ only one: labels cannot be matched
  EXPECT_THROW(UpsComponent(*s.g, *s.l, UpsLink{0, 0, {0}}), ValidationError);
  // embedding of the wrong length
  EXPECT_THROW(UpsComponent(*s.g, *s.l, UpsLink{0, 2, {0, 1}}), ShapeError);
  // a Z2 action on the L side whose embedding ignores the grid flip
  auto spec = bundled::sl2r();
  auto t = spec.table();
  t.levi[0] = t.group[2];
  t.levi[0].id = "sigma0";
  t.levi[0].dim = 1;
  for (auto& row : t.levi[0].unitaries)
    for (auto& u : row) u = Matrix::Identity(1, 1);
  const auto g = model_from_specs("G", t.group);
  const auto l = model_from_specs("L", t.levi);
  EXPECT_THROW(UpsComponent(*g, *l, UpsLink{0, 2, {0, 0}}), ValidationError);
  EXPECT_THROW(UpsComponent(*g, *l, UpsLink{0, 3, {1, 0}}), ValidationError);
  EXPECT_NO_THROW(UpsComponent(*g, *l, UpsLink{0, 2, {0, 1}}));
}

TEST(UpsBimodule, Axioms) {
  for (const Setting* s : {&sl2r(), &gl3()}) {
    const auto& e = *s->ups;
    Rng rng(3);
    for (int trial = 0; trial < 5; ++trial) {
      const auto S = e.random(rng), T = e.random(rng);
      const auto a = AlgebraElement::random(s->g, rng);
      const auto b = AlgebraElement::random(s->l, rng);
      EXPECT_LT((e.l_inner(S, e.left_act(a.adjoint(), T)) - e.l_inner(e.left_act(a, S), T)).norm(), 1e-10);
      EXPECT_LT((e.l_inner(S, T).adjoint() - e.l_inner(T, S)).norm(), 1e-10);
      EXPECT_LT((e.l_inner(S, e.right_act(T, b)) - e.l_inner(S, T) * b).norm(), 1e-10);
      EXPECT_LT((e.right_act(e.left_act(a, S), b) - e.left_act(a, e.right_act(S, b))).norm(), 1e-10);
      EXPECT_LT(e.equivariance_defect(e.left_act(a, S)), 1e-9);
      EXPECT_LT(e.equivariance_defect(e.right_act(S, b)), 1e-9);
      const auto ss = e.l_inner(S, S);
      for (std::size_t c = 0; c < s->l->size(); ++c) EXPECT_GE(min_eigenvalue(ss[c]), -1e-12);
      EXPECT_LT(e.l_inner(S, S).invariance_defect(), 1e-9);
    }
  }
}

TEST(UpsBimodule, TrivialActionsAndOrthogonality) {
  const auto& s = sl2r();
  const auto& e = *s.ups;
  Rng rng(8);
  const auto S = e.random(rng);
  EXPECT_LT((e.left_act(AlgebraElement::identity(s.g), S) - S).norm(), 1e-14);
  EXPECT_LT((e.right_act(S, AlgebraElement::identity(s.l)) - S).norm(), 1e-14);
  // discrete series carry no summand
  const auto ds = AlgebraElement::random_on(s.g, s.g->require("DS+"), rng);
  EXPECT_EQ(e.left_act(ds, S).norm(), 0.0);
  // distinct summands are orthogonal
  EXPECT_EQ(e.l_inner(e.random_on(0, rng), e.random_on(1, rng)).norm(), 0.0);
}

TEST(Induce, EvaluationGoesToEvaluation) {
  for (const Setting* s : {&sl2r(), &gl3()}) {
    const auto& e = *s->ups;
    for (const auto& c : e.components())
      for (std::size_t x = 0; x < c.point_map().size(); ++x) {
        const auto data = induce_data(e, Representation::evaluation(s->l, c.small(), x));
        const auto ev = Representation::evaluation(s->g, c.big(), c.point_map(x));
        // the fiber of the induced family, read off directly
        EXPECT_EQ(data.rep.dim(), (*s->g)[c.big()].space()->dim(c.point_map(x)));
        EXPECT_EQ(hom_dimension(data.rep, ev), hom_dimension(ev, ev));
        EXPECT_EQ(hom_dimension(data.rep, data.rep), hom_dimension(ev, ev));
        EXPECT_LE(data.gram_residual, 1e-10);
      }
  }
}

TEST(Induce, ZeroAndSums) {
  const auto& s = sl2r();
  const auto& e = *s.ups;
  EXPECT_EQ(induce(e, Representation::zero(s.l)).dim(), 0);
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t1 = random_representation(s.l, rng);
    const auto t2 = random_representation(s.l, rng);
    const auto sum = induce(e, Representation::direct_sum(t1, t2));
    const auto parts = Representation::direct_sum(induce(e, t1), induce(e, t2));
    EXPECT_EQ(sum.dim(), parts.dim());
    EXPECT_EQ(hom_dimension(sum, parts), hom_dimension(sum, sum));
    EXPECT_EQ(hom_dimension(parts, parts), hom_dimension(sum, sum));
  }
}

TEST(Induce, RespectsLeftAction) {
  const auto& s = gl3();
  Rng rng(4);
  const auto tau = random_representation(s.l, rng);
  const auto data = induce_data(*s.ups, tau);
  EXPECT_LE(data.rep.invariance_residual(), 1e-9);
  const auto a = AlgebraElement::random(s.g, rng), b = AlgebraElement::random(s.g, rng);
  EXPECT_LT(linalg::max_abs(data.rep.act(a * b) - data.rep.act(a) * data.rep.act(b)), 1e-9);
  EXPECT_LT(linalg::max_abs(data.rep.act(a.adjoint()) - data.rep.act(a).adjoint()), 1e-9);
}

TEST(InductionInStages, Gl3NestedMatchesOneStep) {
  const auto& s = gl3();
  ASSERT_TRUE(s.stage.has_value());
  EXPECT_EQ(s.stage->levi, Composition({1, 1, 1}));
  const auto rep = induction_in_stages(*s.ups, *s.stage->inner, *s.stage->glued);
  EXPECT_EQ(rep.summands.size(), 8u);
  for (const auto& m : rep.summands) {
    EXPECT_TRUE(m.maps_compose) << m.id;
    EXPECT_EQ(m.product_span, m.glued_dim) << m.id;
  }
  EXPECT_LE(rep.residual(), 1e-9);
  EXPECT_TRUE(rep.passed());
}

TEST(InductionInStages, TrivialStage) {
  auto spec = bundled::gl3_toy();
  auto gl = spec.gl();
  gl.stage = {Composition({2}), Composition({1})};
  spec.body = gl;
  const auto s = build_setting(spec);
  EXPECT_EQ(s.stage->j->size(), s.l->size());
  const auto rep = induction_in_stages(*s.ups, *s.stage->inner, *s.stage->glued);
  EXPECT_TRUE(rep.passed());
  for (const auto& c : s.stage->inner->components()) EXPECT_EQ((*s.l)[c.big()].id(), (*s.stage->j)[c.small()].id());
}

TEST(InductionInStages, FunctorsAgreeOnRandomReps) {
  const auto& s = gl3();
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const auto tau = random_representation(s.stage->j, rng);
    const auto chk = induction_functor_check(*s.ups, *s.stage->inner, *s.stage->glued, tau);
    EXPECT_TRUE(chk.equivalent()) << chk.dim_two_step << " vs " << chk.dim_one_step;
    EXPECT_GT(chk.dim_one_step, 0);
  }
}

TEST(InductionInStages, RejectsNonComposable) {
  const auto& s = gl3();
  EXPECT_THROW(induction_in_stages(*s.stage->inner, *s.ups, *s.stage->glued), ShapeError);
}
