#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tdual/core/finite_group.hpp"
#include "tdual/group/spec.hpp"

namespace tdual::bundled {

// Builders for the example specs shipped in specs/. The JSON files there are
// written from these by the spec generator tool, and the tests check that
// the two agree.

namespace detail {

inline std::vector<GridPoint> line(const std::vector<double>& xs) { return BaseSpace::line(xs).points(); }

inline ComponentSpec trivial_component(std::string id, std::string parabolic, std::string sigma,
                                       std::vector<GridPoint> grid, Index dim, std::vector<double> weights = {}) {
  ComponentSpec c;
  c.id = std::move(id);
  c.parabolic = std::move(parabolic);
  c.sigma = std::move(sigma);
  c.grid = std::move(grid);
  c.dim = dim;
  c.elements = {"e"};
  c.table = {{0}};
  std::vector<std::size_t> ident(c.grid.size());
  for (std::size_t x = 0; x < ident.size(); ++x) ident[x] = x;
  c.perm = {ident};
  c.weights = std::move(weights);
  return c;
}

/// Principal-series component of SL(2,R): Z2 acts by phi -> -phi and the
/// long Weyl element acts on the K-type n by the phase
/// sign(n)^odd * exp(2i atan(phi / (|n| + 1))), an odd phase that makes the
/// intertwiner at phi and -phi mutually inverse.
inline ComponentSpec principal_series(std::string id, std::string sigma, const std::vector<int>& k_types, bool odd,
                                      const std::vector<double>& xs) {
  ComponentSpec c;
  c.id = std::move(id);
  c.parabolic = "P";
  c.sigma = std::move(sigma);
  c.grid = line(xs);
  c.dim = static_cast<Index>(k_types.size());
  c.elements = {"e", "s"};
  c.table = {{0, 1}, {1, 0}};
  const std::size_t n = xs.size();
  std::vector<std::size_t> ident(n), flip(n);
  for (std::size_t x = 0; x < n; ++x) {
    ident[x] = x;
    flip[x] = n - 1 - x;  // the grid is symmetric about 0
  }
  c.perm = {ident, flip};
  std::vector<Matrix> id_us(n, Matrix::Identity(c.dim, c.dim)), s_us;
  for (double phi : xs) {
    Matrix u = Matrix::Zero(c.dim, c.dim);
    for (std::size_t j = 0; j < k_types.size(); ++j) {
      const int kt = k_types[j];
      const double sign = odd && kt < 0 ? -1.0 : 1.0;
      const double theta = 2.0 * std::atan(phi / (std::abs(kt) + 1.0));
      u(static_cast<Index>(j), static_cast<Index>(j)) = sign * cplx(std::cos(theta), std::sin(theta));
    }
    s_us.push_back(u);
  }
  c.unitaries = {id_us, s_us};
  for (double phi : xs) c.weights.push_back(1.0 + phi * phi);
  return c;
}

}  // namespace detail

/// SL(2,R) with the minimal parabolic P = MAN, M = {+1, -1}: two discrete
/// series components (one point each) and the two principal series families
/// on a symmetric grid of characters of A, truncated to four K-types each.
inline GroupSpec sl2r() {
  std::vector<double> xs;
  for (int i = -4; i <= 4; ++i) xs.push_back(0.5 * i);
  TableSpec t;
  t.group.push_back(detail::trivial_component("DS+", "G", "D+", detail::line({0}), 2));
  t.group.back().grid.front().label = "pt";
  t.group.push_back(detail::trivial_component("DS-", "G", "D-", detail::line({0}), 2));
  t.group.back().grid.front().label = "pt";
  t.group.push_back(detail::principal_series("PS0", "sigma0", {-2, 0, 2, 4}, false, xs));
  t.group.push_back(detail::principal_series("PS1", "sigma1", {-3, -1, 1, 3}, true, xs));
  t.levi.push_back(detail::trivial_component("sigma0", "P", "sigma0", detail::line(xs), 1));
  t.levi.push_back(detail::trivial_component("sigma1", "P", "sigma1", detail::line(xs), 1));
  t.ups = {{"sigma0", "PS0", {0}}, {"sigma1", "PS1", {0}}};
  GroupSpec g;
  g.name = "sl2r";
  g.description = "SL(2,R): discrete series points and the two principal series families over a 9-point grid";
  g.body = std::move(t);
  g.queries = {{"discrete", "DS+@pt"}, {"generic", "PS0@1"}, {"spherical", "PS0@0"}, {"odd-zero", "PS1@0"}};
  return g;
}

/// GL(3) with labels a, b (size 1, fiber dims 1 and 2), d (size 2) and e
/// (size 3) on the character grid {-1, 0, 1}; parabolic [2,1], refined in a
/// second stage by [1,1] on the first block.
inline GroupSpec gl3_toy() {
  GlSpec s;
  s.n = 3;
  s.grid = {-1.0, 0.0, 1.0};
  s.sigmas = {{"a", 1, 1}, {"b", 1, 2}, {"d", 2, 1}, {"e", 3, 1}};
  s.parabolic = Composition({2, 1});
  s.stage = {Composition({1, 1}), Composition({1})};
  GroupSpec g;
  g.name = "gl3-toy";
  g.description = "GL(3) toy: induction in stages from [1,1,1] through [2,1]";
  g.body = std::move(s);
  g.queries = {{"generic", "{a,a,b}@-1,0,1"}, {"wall", "{a,a,b}@0,0,1"}};
  return g;
}

/// Z2 swapping two points, fiber C^2, identity intertwiners.
inline GroupSpec z2_free() {
  TableSpec t;
  ComponentSpec c;
  c.id = "F";
  c.parabolic = "P";
  c.sigma = "f";
  c.grid = {{"p", {}}, {"q", {}}};
  c.dim = 2;
  c.elements = {"e", "s"};
  c.table = {{0, 1}, {1, 0}};
  c.perm = {{0, 1}, {1, 0}};
  t.group.push_back(c);
  t.levi.push_back(detail::trivial_component("f", "P", "f", {{"p", {}}}, 1));
  t.ups = {{"f", "F", {0}}};
  GroupSpec g;
  g.name = "z2-free";
  g.description = "Z2 acting freely on two points, fiber C^2";
  g.body = std::move(t);
  g.queries = {{"point", "F@p"}};
  return g;
}

/// Z2 fixing one point, fiber C^2, intertwiner diag(1, -1).
inline GroupSpec z2_fixed() {
  TableSpec t;
  ComponentSpec c;
  c.id = "Z";
  c.parabolic = "P";
  c.sigma = "z";
  c.grid = {{"o", {}}};
  c.dim = 2;
  c.elements = {"e", "s"};
  c.table = {{0, 1}, {1, 0}};
  c.perm = {{0}, {0}};
  Matrix u = Matrix::Identity(2, 2);
  u(1, 1) = -1.0;
  c.unitaries = {{Matrix::Identity(2, 2)}, {u}};
  t.group.push_back(c);
  t.levi.push_back(detail::trivial_component("z", "P", "z", {{"o", {}}}, 1));
  t.ups = {{"z", "Z", {0}}};
  GroupSpec g;
  g.name = "z2-fixed";
  g.description = "Z2 fixing a point, fiber C^2 split by the intertwiner diag(1,-1)";
  g.body = std::move(t);
  g.queries = {{"point", "Z@o"}};
  return g;
}

inline std::vector<GroupSpec> all() { return {sl2r(), gl3_toy(), z2_free(), z2_fixed()}; }

}  // namespace tdual::bundled
