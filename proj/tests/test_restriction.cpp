#include <gtest/gtest.h>

#include <chrono>

#include "tdual/io/bundled.hpp"
#include "tdual/restriction/adjoint.hpp"
#include "tdual/ups/setting.hpp"

using namespace tdual;

namespace {

struct Fixture {
  Setting setting;
  AdjointModule adj;
  explicit Fixture(GroupSpec spec) : setting(build_setting(std::move(spec))), adj(setting.ups) {}
};

const Fixture& sl2r() {
  static const Fixture f(bundled::sl2r());
  return f;
}

const Fixture& gl3() {
  static const Fixture f(bundled::gl3_toy());
  return f;
}

const Fixture& z2_free() {
  static const Fixture f(bundled::z2_free());
  return f;
}

const Fixture& z2_fixed() {
  static const Fixture f(bundled::z2_fixed());
  return f;
}

std::size_t point(const AlgebraModel& m, const std::string& comp, const std::string& label) {
  const auto c = m.require(comp);
  return *m[c].grid().index_of(label);
}

Representation eval(const ModelPtr& m, const std::string& comp, const std::string& label) {
  return Representation::evaluation(m, m->require(comp), point(*m, comp, label));
}

}  // namespace

TEST(AdjointModule, InnerProductAxioms) {
  for (const Fixture* f : {&sl2r(), &gl3(), &z2_free(), &z2_fixed()}) {
    const auto& s = f->setting;
    const auto& e = *s.ups;
    Rng rng(12);
    for (int trial = 0; trial < 4; ++trial) {
      const auto S = e.random(rng), T = e.random(rng);
      const auto a = AlgebraElement::random(s.g, rng);
      const auto st = f->adj.g_inner(S, T);
      EXPECT_LT((st.adjoint() - f->adj.g_inner(T, S)).norm(), 1e-10);
      EXPECT_LT(st.invariance_defect(), 1e-9);
      // conj(T) . a = conj(a^* T)
      const auto ta = e.left_act(a.adjoint(), T);
      EXPECT_LT((f->adj.g_inner(S, ta) - st * a).norm(), 1e-9 * std::max(1.0, st.norm() * a.norm()));
      const auto ss = f->adj.g_inner(S, S);
      for (std::size_t c = 0; c < s.g->size(); ++c)
        for (const auto& m : ss[c].mats())
          if (m.rows() > 0) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(m));
            EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
          }
    }
  }
}

TEST(AdjointModule, PointwiseValuesMatchFullAverage) {
  for (const Fixture* f : {&sl2r(), &gl3()}) {
    const auto& e = *f->setting.ups;
    Rng rng(5);
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto S = e.random_on(i, rng), T = e.random_on(i, rng);
      const auto full = f->adj.g_inner(S, T);
      const auto c = e[i].big();
      for (std::size_t y = 0; y < full[c].size(); ++y)
        EXPECT_LT(linalg::max_abs(full[c][y] - f->adj.g_inner_at(i, S[i], T[i], y)), 1e-12);
    }
  }
}

TEST(AdjointModule, DistinctSummandsAreOrthogonal) {
  const auto& f = sl2r();
  const auto& e = *f.setting.ups;
  Rng rng(2);
  EXPECT_EQ(f.adj.g_inner(e.random_on(0, rng), e.random_on(1, rng)).norm(), 0.0);
}

TEST(AdjointModule, FreeFlipTwoTermOracle) {
  // W = Z2 swapping p and q: <conj S, conj T>(p) = S T^* / 2 and (q) = U S T^* U^* / 2
  const auto& f = z2_free();
  const auto& e = *f.setting.ups;
  const auto& g = *f.setting.g;
  ASSERT_EQ(e.size(), 1u);
  const auto& act = g[e[0].big()].action();
  const std::size_t p = e[0].point_map(0);
  const std::size_t q = act.act(1, p) == p ? act.act(0, p) : act.act(1, p);
  ASSERT_NE(p, q);
  const std::size_t flip = act.act(1, p) == q ? 1 : 0;
  Rng rng(31);
  const auto S = e.random(rng), T = e.random(rng);
  const Matrix st = S[0][0] * T[0][0].adjoint();
  const auto got = f.adj.g_inner(S, T)[e[0].big()];
  EXPECT_LT(linalg::max_abs(got[p] - 0.5 * st), 1e-12);
  const Matrix& u = act.unitary(flip, p);
  EXPECT_LT(linalg::max_abs(got[q] - 0.5 * u * st * u.adjoint()), 1e-12);
}

TEST(NormEquivalence, HoldsOnRandomElements) {
  for (const Fixture* f : {&sl2r(), &gl3(), &z2_free(), &z2_fixed()}) {
    const auto& e = *f->setting.ups;
    Rng rng(17);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int trial = 0; trial < 100; ++trial) {
        const auto S = e.random_on(i, rng);
        const auto r = norm_equivalence(f->adj, i, S[i]);
        EXPECT_TRUE(r.holds()) << r.summand << " lower " << r.lower_slack << " upper " << r.upper_slack;
      }
  }
}

TEST(NormEquivalence, ConstantsOnBundledSpecs) {
  Rng rng(1);
  const auto& s = sl2r();
  for (std::size_t i = 0; i < s.setting.ups->size(); ++i)
    EXPECT_DOUBLE_EQ(norm_equivalence(s.adj, i, s.setting.ups->random_on(i, rng)[i]).constant, 0.5);
  EXPECT_DOUBLE_EQ(norm_equivalence(z2_free().adj, 0, z2_free().setting.ups->random(rng)[0]).constant, 0.5);
}

TEST(NormEquivalence, LowerBoundIsAttainedOnAFreeOrbit) {
  // S supported at a single point of a free orbit: the averaged norm is exactly half
  const auto& f = z2_free();
  const auto& e = *f.setting.ups;
  Rng rng(3);
  const auto r = norm_equivalence(f.adj, 0, e.random(rng)[0]);
  EXPECT_NEAR(r.adjoint_norm_sq, 0.5 * r.ups_norm_sq, 1e-12);
}

TEST(Restrict, DiscreteSeriesRestrictsToZero) {
  const auto& f = sl2r();
  const auto res = restrict(f.adj, eval(f.setting.g, "DS+", "pt"));
  EXPECT_EQ(res.dim(), 0);
  EXPECT_TRUE(decompose(res).empty());
}

TEST(Restrict, GenericPrincipalSeriesGivesBothCharacters) {
  const auto& f = sl2r();
  const auto& s = f.setting;
  const auto data = restrict_data(f.adj, eval(s.g, "PS0", "1"));
  EXPECT_LE(data.gram_residual, 1e-10);
  const auto& res = data.rep;
  EXPECT_EQ(res.dim(), 2);
  const auto parts = decompose(res);
  ASSERT_EQ(parts.size(), 2u);
  const auto plus = eval(s.l, "sigma0", "1"), minus = eval(s.l, "sigma0", "-1");
  EXPECT_EQ(hom_dimension(plus, res), 1);
  EXPECT_EQ(hom_dimension(minus, res), 1);
  EXPECT_EQ(hom_dimension(eval(s.l, "sigma0", "0"), res), 0);
  EXPECT_EQ(hom_dimension(eval(s.l, "sigma1", "1"), res), 0);
  EXPECT_EQ(hom_dimension(res, Representation::direct_sum(plus, minus)), 2);
}

TEST(Restrict, SphericalPrincipalSeriesGivesOneCharacter) {
  const auto& f = sl2r();
  const auto& s = f.setting;
  const auto res = restrict(f.adj, eval(s.g, "PS0", "0"));
  const auto parts = decompose(res);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].multiplicity, 1);
  EXPECT_EQ(hom_dimension(eval(s.l, "sigma0", "0"), res), 1);
}

TEST(Restrict, OddSeriesAtZeroSplitsIntoTwoCopiesOfTheSameCharacter) {
  const auto& f = sl2r();
  const auto& s = f.setting;
  const auto& g = *s.g;
  const auto ps1 = g.require("PS1");
  const auto irreps = irreducibles_at(g, ps1, point(g, "PS1", "0"));
  ASSERT_EQ(irreps.size(), 2u);
  const auto ev0 = eval(s.l, "sigma1", "0");
  for (const auto& d : irreps) {
    const auto res = restrict(f.adj, Representation::irreducible(s.g, d));
    EXPECT_EQ(hom_dimension(ev0, res), 1) << d.name();
    EXPECT_EQ(hom_dimension(res, res), 1) << d.name();
  }
}

TEST(Restrict, AfterInduceAtAGenericPoint) {
  const auto& f = sl2r();
  const auto& s = f.setting;
  const auto tau = eval(s.l, "sigma0", "1.5");
  const auto ind = induce(*s.ups, tau);
  const auto res = restrict(f.adj, ind);
  EXPECT_EQ(res.dim(), 2);  // |W| copies of the one-dimensional fiber
  EXPECT_EQ(hom_dimension(tau, res), 1);
  EXPECT_EQ(hom_dimension(eval(s.l, "sigma0", "-1.5"), res), 1);
}

TEST(Restrict, RespectsTheAction) {
  const auto& f = gl3();
  Rng rng(44);
  const auto pi = random_representation(f.setting.g, rng);
  const auto res = restrict(f.adj, pi);
  EXPECT_LE(res.invariance_residual(), 1e-9);
  const auto b = AlgebraElement::random(f.setting.l, rng), c = AlgebraElement::random(f.setting.l, rng);
  EXPECT_LT(linalg::max_abs(res.act(b * c) - res.act(b) * res.act(c)), 1e-9);
}

TEST(Adjunction, RandomPairsOnEveryBundledSpec) {
  for (const Fixture* f : {&sl2r(), &gl3(), &z2_free(), &z2_fixed()}) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(2024);
    Index nontrivial = 0;
    for (int trial = 0; trial < 20; ++trial) {
      auto tau = random_representation(f->setting.l, rng);
      auto pi = random_representation(f->setting.g, rng);
      // independent random points rarely meet, so some pairs are linked on purpose
      if (trial % 3 == 1) {
        pi = Representation::direct_sum(pi, induce(*f->setting.ups, tau));
        pi = pi.rotated(rng.haar_unitary(pi.dim()));
      }
      if (trial % 3 == 2) {
        const auto parts = decompose(restrict(f->adj, pi));
        if (!parts.empty()) tau = Representation::direct_sum(tau, Representation::irreducible(f->setting.l, parts.front().irrep));
      }
      const auto r = adjunction_check(f->adj, tau, pi);
      EXPECT_TRUE(r.left_holds()) << f->setting.spec.name << " trial " << trial << ": " << r.ind_to_pi << " vs "
                                  << r.tau_to_res;
      EXPECT_TRUE(r.right_holds()) << f->setting.spec.name << " trial " << trial << ": " << r.pi_to_ind << " vs "
                                   << r.res_to_tau;
      nontrivial += r.ind_to_pi + r.pi_to_ind;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LE(secs, 60.0) << f->setting.spec.name;
    EXPECT_GT(nontrivial, 0) << f->setting.spec.name;
  }
}

TEST(Adjunction, InducedPairIsFullyMatched) {
  for (const Fixture* f : {&sl2r(), &z2_free()}) {
    const auto& e = *f->setting.ups;
    const auto& c = e[0];
    const auto tau = Representation::evaluation(f->setting.l, c.small(), c.point_map().size() - 1);
    const auto pi = induce(e, tau);
    const auto r = adjunction_check(f->adj, tau, pi);
    EXPECT_TRUE(r.holds());
    EXPECT_GE(r.ind_to_pi, 1);
  }
}

TEST(Adjunction, UnrelatedComponentsGiveZero) {
  const auto& f = sl2r();
  const auto& s = f.setting;
  const auto r = adjunction_check(f.adj, eval(s.l, "sigma1", "1"), eval(s.g, "PS0", "1"));
  EXPECT_EQ(r.ind_to_pi, 0);
  EXPECT_EQ(r.tau_to_res, 0);
  EXPECT_EQ(r.pi_to_ind, 0);
  EXPECT_EQ(r.res_to_tau, 0);
}
