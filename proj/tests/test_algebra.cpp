#include <gtest/gtest.h>

#include <map>
#include <numeric>

#include "support.hpp"
#include "tdual/algebra/build.hpp"
#include "tdual/algebra/representation.hpp"
#include "tdual/algebra/surjectivity.hpp"
#include "tdual/core.hpp"
#include "tdual/io/bundled.hpp"

using namespace tdual;

namespace {

ModelPtr sl2r_group() {
  static const ModelPtr m = build_model(bundled::sl2r());
  return m;
}

// Brute-force intertwiner count: stack the commutation equations for every
// fixed-point basis element of every component, without orbit filtering.
Index hom_dimension_full(const Representation& r1, const Representation& r2) {
  const Index n1 = r1.dim(), n2 = r2.dim();
  if (n1 == 0 || n2 == 0) return 0;
  const auto& model = *r1.model();
  std::vector<Matrix> rows;
  for (std::size_t c = 0; c < model.size(); ++c)
    for (std::size_t i = 0; i < model[c].basis().dim(); ++i) {
      const Matrix a1 = r1.act(c, model[c].basis()[i]);
      const Matrix a2 = r2.act(c, model[c].basis()[i]);
      rows.push_back(linalg::kron(a1.transpose(), Matrix::Identity(n2, n2)) -
                     linalg::kron(Matrix::Identity(n1, n1), a2));
    }
  Matrix sys(static_cast<Index>(rows.size()) * n1 * n2, n1 * n2);
  for (std::size_t k = 0; k < rows.size(); ++k) sys.middleRows(static_cast<Index>(k) * n1 * n2, n1 * n2) = rows[k];
  return linalg::null_space(sys, 1e-9).cols();
}

GlSpec gl2_ab() {
  GlSpec s;
  s.n = 2;
  s.grid = {-1.0, 1.0};
  s.sigmas = {{"b", 1, 2}, {"a", 1, 1}};
  s.parabolic = Composition({1, 1});
  return s;
}

}  // namespace

TEST(BuildModel, Sl2rComponents) {
  const auto g = sl2r_group();
  ASSERT_EQ(g->size(), 4u);
  EXPECT_EQ((*g)[0].id(), "DS+");
  EXPECT_EQ((*g)[g->require("PS0")].group_order(), 2u);
  EXPECT_EQ((*g)[g->require("PS1")].grid().size(), 9u);
  EXPECT_EQ((*g)[g->require("DS-")].space()->dim(0), 2);
  const auto l = build_levi_model(bundled::sl2r());
  ASSERT_EQ(l->size(), 2u);
  EXPECT_EQ((*l)[0].group_order(), 1u);
  // weights invariant and positive, basis covers one orbit per element
  const auto& ps = (*g)[g->require("PS1")];
  EXPECT_DOUBLE_EQ(ps.weights()[0], ps.weights()[8]);
  EXPECT_EQ(ps.action().orbit_count(), 5u);
}

TEST(BuildModel, GlTwoComponents) {
  GroupSpec spec;
  spec.body = gl2_ab();
  const auto g = build_model(spec);
  // multisets of two size-1 labels: {a,a}, {a,b}, {b,b}
  ASSERT_EQ(g->size(), 3u);
  const auto& ab = (*g)[g->require("{a,b}")];
  EXPECT_EQ(ab.group_order(), 1u);
  EXPECT_EQ(ab.space()->dim(0), 2);
  // trivial W: the fixed-point algebra is every matrix field
  EXPECT_EQ(ab.basis().dim(), 4u * 4u);
  const auto& aa = (*g)[g->require("{a,a}")];
  EXPECT_EQ(aa.group_order(), 2u);
  const auto& bb = (*g)[g->require("{b,b}")];
  EXPECT_EQ(bb.space()->dim(0), 4);
  // the swap exchanges the tensor factors at the diagonal point (1,1)
  const std::size_t diag = bb.grid().require_index("1,1");
  const Matrix u = bb.action().unitary(1, diag);
  EXPECT_NEAR(std::abs(u(1, 2)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-14);

  const auto l = build_levi_model(spec);
  EXPECT_EQ(l->size(), 4u);
}

TEST(BuildModel, EmptyWhenNothingFills) {
  GlSpec s;
  s.n = 2;
  s.grid = {0.0};
  s.sigmas = {{"e", 3, 1}};
  s.parabolic = Composition({2});
  GroupSpec spec;
  spec.body = s;
  EXPECT_TRUE(build_model(spec)->empty());
  EXPECT_TRUE(model_from_specs("X", {})->empty());
}

TEST(BuildModel, Gl3ToyCounts) {
  const auto spec = bundled::gl3_toy();
  EXPECT_EQ(build_model(spec)->size(), 7u);
  EXPECT_EQ(build_levi_model(spec)->size(), 8u);
  const auto j = gl::model(spec.gl(), Composition({1, 1, 1}), "J");
  EXPECT_EQ(j->size(), 8u);
  for (const auto& c : j->components()) EXPECT_EQ(c.group_order(), 1u);
  // W for {a,a,a} is S3, for {a,a,b} it is the swap of the two a's
  const auto g = build_model(spec);
  EXPECT_EQ((*g)[g->require("{a,a,a}")].group_order(), 6u);
  EXPECT_EQ((*g)[g->require("{a,a,b}")].group_order(), 2u);
  EXPECT_EQ((*g)[g->require("{e}")].grid().size(), 3u);
}

TEST(BuildModel, RejectsBrokenSpec) {
  auto spec = bundled::z2_fixed();
  auto t = std::get<TableSpec>(spec.body);
  t.group[0].unitaries[1][0](0, 1) = 0.5;  // no longer unitary
  EXPECT_THROW(model_from_specs("G", t.group), ValidationError);
  t = std::get<TableSpec>(bundled::z2_free().body);
  t.group[0].weights = {1.0, 2.0};  // not invariant under the swap
  EXPECT_THROW(model_from_specs("G", t.group), ValidationError);
}

TEST(AlgebraElement, StarAlgebraIdentities) {
  const auto g = sl2r_group();
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = AlgebraElement::random(g, rng);
    const auto b = AlgebraElement::random(g, rng);
    EXPECT_LT((a * b).invariance_defect(), 1e-10);
    EXPECT_LT(((a * b).adjoint() - b.adjoint() * a.adjoint()).norm(), 1e-10);
    const double n = a.norm();
    EXPECT_NEAR((a.adjoint() * a).norm(), n * n, 1e-9 * n * n);
  }
  const auto one = AlgebraElement::identity(g);
  const auto a = AlgebraElement::random_on(g, 2, rng);
  EXPECT_LT((one * a - a).norm(), 1e-12);
  EXPECT_EQ(a[0].norm(), 0.0);
}

TEST(AlgebraElement, OnComponentRejectsNonInvariant) {
  const auto g = sl2r_group();
  const std::size_t c = g->require("PS1");
  Rng rng(5);
  EXPECT_THROW(AlgebraElement::on_component(g, c, tdual::testing::random_field((*g)[c].space(), rng)), ValidationError);
  EXPECT_NO_THROW(AlgebraElement::on_component(g, c, (*g)[c].basis()[0]));
}

TEST(Irreducibles, Sl2rCounts) {
  const auto g = sl2r_group();
  const auto odd = irreducibles_at(*g, "PS1", "0");
  ASSERT_EQ(odd.size(), 2u);
  EXPECT_EQ(odd[0].rank, 2);
  EXPECT_EQ(odd[1].rank, 2);
  const auto even = irreducibles_at(*g, "PS0", "0");
  ASSERT_EQ(even.size(), 1u);
  EXPECT_EQ(even[0].rank, 4);
  EXPECT_EQ(irreducibles_at(*g, "PS0", "1").size(), 1u);
  EXPECT_EQ(irreducibles_at(*g, "DS+", "pt")[0].rank, 2);
}

TEST(Irreducibles, RankTimesMultiplicityFillsFiber) {
  const auto spec = bundled::gl3_toy();
  for (const auto& model : {sl2r_group(), build_model(spec), build_levi_model(spec)})
    for (std::size_t c = 0; c < model->size(); ++c)
      for (std::size_t x = 0; x < (*model)[c].grid().size(); ++x) {
        Index total = 0;
        for (const auto& d : irreducibles_at(*model, c, x)) {
          total += d.rank * d.multiplicity;
          EXPECT_NEAR(linalg::max_abs(d.projection * d.projection - d.projection), 0.0, 1e-9);
        }
        EXPECT_EQ(total, (*model)[c].space()->dim(x));
      }
}

TEST(Irreducibles, OrbitPointsShareNamesAndAreEquivalent) {
  const auto g = sl2r_group();
  const std::size_t c = g->require("PS0");
  const auto& grid = (*g)[c].grid();
  const auto here = irreducibles_at(*g, c, grid.require_index("1.5"));
  const auto there = irreducibles_at(*g, c, grid.require_index("-1.5"));
  ASSERT_EQ(here.size(), 1u);
  EXPECT_EQ(here[0].name(), there[0].name());
  EXPECT_EQ(hom_dimension(Representation::irreducible(g, here[0]), Representation::irreducible(g, there[0])), 1);
  const auto other = irreducibles_at(*g, c, grid.require_index("1"));
  EXPECT_NE(other[0].name(), here[0].name());
  EXPECT_EQ(hom_dimension(Representation::irreducible(g, here[0]), Representation::irreducible(g, other[0])), 0);
}

TEST(Irreducibles, DeterministicAcrossSeeds) {
  const auto g = sl2r_group();
  const auto a = irreducibles_at(*g, "PS1", "0", 1);
  const auto b = irreducibles_at(*g, "PS1", "0", 999);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    // same central projection, possibly a different minimal one inside it
    const auto ra = Representation::irreducible(g, a[k]);
    const auto rb = Representation::irreducible(g, b[k]);
    EXPECT_EQ(hom_dimension(ra, rb), 1);
  }
}

TEST(FiberImage, EqualsCommutantOnBundledSpecs) {
  for (const auto& spec : bundled::all()) {
    for (const auto& model : {build_model(spec), build_levi_model(spec)})
      for (const auto& comp : model->components())
        for (std::size_t x = 0; x < comp.grid().size(); ++x) {
          const auto r = fiber_image(comp, x);
          EXPECT_EQ(r.image_dim(), r.commutant_dim()) << spec.name << " " << comp.id() << "@" << comp.grid()[x].label;
          EXPECT_LE(r.span_distance, 1e-9);
        }
  }
}

TEST(FiberImage, DiagonalFlipGivesDiagonalMatrices) {
  const Component comp("Z", "P", "z", tdual::testing::diag_flip_action());
  const auto r = fiber_image(comp, 0);
  EXPECT_EQ(r.image_dim(), 2);
  EXPECT_EQ(r.commutant_dim(), 2);
  const Component free("F", "P", "f", tdual::testing::swap_action(2));
  EXPECT_EQ(fiber_image(free, 0).image_dim(), 4);
}

TEST(FiberImage, RandomInstances) {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = random_instance(rng);
    const Component comp("r", "", "", inst.action);
    for (std::size_t x = 0; x < comp.grid().size(); ++x) {
      const auto r = fiber_image(comp, x);
      ASSERT_EQ(r.image_dim(), r.commutant_dim()) << inst.description;
      EXPECT_LE(r.span_distance, 1e-9) << inst.description;
      const auto ia = intertwiner_algebra(comp, x);
      EXPECT_LE(ia.closure_residual(), 1e-9);
    }
  }
}

TEST(Surjectivity, DisjointSupportsAreSurjective) {
  const auto rep = surjectivity_property_tests();
  EXPECT_TRUE(rep.passed());
  for (const auto& c : rep.cases) EXPECT_TRUE(c.ok()) << c.name << " rank " << c.rank << "/" << c.target_dim;
  const auto& last = rep.cases.back();
  EXPECT_EQ(last.rank, last.single_target_dim);
}

TEST(Representation, EvaluationEndomorphismsMatchIntertwiners) {
  const auto g = sl2r_group();
  for (std::size_t c = 0; c < g->size(); ++c)
    for (std::size_t x = 0; x < (*g)[c].grid().size(); ++x) {
      const auto ev = Representation::evaluation(g, c, x);
      EXPECT_EQ(hom_dimension(ev, ev), static_cast<Index>(intertwiner_algebra((*g)[c], x).dim()));
    }
}

TEST(Representation, HomAgreesWithUnfilteredSolve) {
  const auto g = sl2r_group();
  Rng rng(41);
  for (int trial = 0; trial < 15; ++trial) {
    const auto a = random_representation(g, rng);
    const auto b = random_representation(g, rng);
    EXPECT_EQ(hom_dimension(a, b), hom_dimension_full(a, b));
    EXPECT_EQ(hom_dimension(a, b), hom_dimension(b, a));
  }
}

TEST(Representation, DecomposeEvaluations) {
  const auto g = sl2r_group();
  const auto odd = decompose(parse_representation(g, "PS1@0"));
  ASSERT_EQ(odd.size(), 2u);
  for (const auto& k : odd) EXPECT_EQ(k.multiplicity, 1);
  const auto pair = parse_representation(g, "PS0@1 + PS0@-1");
  EXPECT_EQ(pair.dim(), 8);
  const auto parts = decompose(pair);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].multiplicity, 2);
  EXPECT_EQ(hom_dimension(pair, pair), 4);
  EXPECT_EQ(parse_representation(g, "0").dim(), 0);
  EXPECT_EQ(parse_representation(g, "PS1@0#1").dim(), 2);
}

TEST(Representation, DecompositionAccountsForDimension) {
  const auto g = sl2r_group();
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = random_representation(g, rng, 3);
    Index total = 0, squares = 0;
    for (const auto& k : decompose(r)) {
      total += k.multiplicity * k.irrep.rank;
      squares += k.multiplicity * k.multiplicity;
    }
    EXPECT_EQ(total, r.dim());
    EXPECT_EQ(squares, hom_dimension(r, r));
  }
}

TEST(Representation, RejectsBadInput) {
  const auto g = sl2r_group();
  const std::size_t c = g->require("PS1");
  const std::size_t x = (*g)[c].grid().require_index("0");
  Vector v = Vector::Zero(4);
  v(0) = 1.0;
  v(3) = 1.0;
  v /= std::sqrt(2.0);
  EXPECT_THROW(Representation(g, {{c, x}}, Matrix(v)), ValidationError);
  EXPECT_THROW(Representation(g, {{c, x}}, Matrix::Identity(4, 4) * 2.0), ValidationError);
  EXPECT_THROW(parse_representation(g, "PS1"), ValidationError);
  EXPECT_THROW(parse_representation(g, "PS7@0"), ValidationError);
  EXPECT_THROW(parse_representation(g, "PS1@0.25"), ValidationError);
  EXPECT_THROW(parse_representation(g, "PS1@0#2"), ValidationError);
}
