#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "tdual/core/fixed_point.hpp"
#include "tdual/core/interior_tensor.hpp"
#include "tdual/core/rng.hpp"

namespace tdual {

/// Bounds for randomly generated module instances.
struct InstanceLimits {
  std::size_t max_points = 6;
  std::size_t max_group = 6;
  Index max_fiber = 5;
  std::size_t max_generators = 2;
};

/// A permutation group of small degree together with some of its unitary
/// representations, used to build random actions.
struct GroupCatalogEntry {
  std::string name;
  std::vector<std::vector<std::size_t>> elements;  ///< permutations; order defines element indices
  FiniteGroup group;
  std::vector<std::vector<Matrix>> reps;           ///< reps[r][w]
};

namespace detail {

inline Matrix permutation_matrix(const std::vector<std::size_t>& p) {
  const Index n = static_cast<Index>(p.size());
  Matrix m = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) m(static_cast<Index>(p[static_cast<std::size_t>(i)]), i) = 1.0;
  return m;
}

inline int parity(const std::vector<std::size_t>& p) {
  int s = 1;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) s = -s;
  }
  return s;
}

inline GroupCatalogEntry make_entry(std::string name, std::vector<std::vector<std::size_t>> gens) {
  GroupCatalogEntry e;
  e.name = std::move(name);
  e.elements = std::move(gens);
  e.group = FiniteGroup::from_permutations(e.elements);
  std::vector<Matrix> triv, sign, nat;
  for (const auto& p : e.elements) {
    triv.push_back(Matrix::Identity(1, 1));
    sign.push_back(Matrix::Constant(1, 1, static_cast<double>(parity(p))));
    nat.push_back(permutation_matrix(p));
  }
  e.reps = {triv, sign, nat};
  return e;
}

}  // namespace detail

/// Cyclic groups of order 1..6, the Klein four-group and S3, all as permutation groups.
inline std::vector<GroupCatalogEntry> group_catalog() {
  std::vector<GroupCatalogEntry> out;
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<std::size_t> rot(n);
    for (std::size_t i = 0; i < n; ++i) rot[i] = (i + 1) % n;
    auto e = detail::make_entry("C" + std::to_string(n), {rot});
    // Characters r^a -> exp(2 pi i j a / n); a is read off as the image of 0.
    for (std::size_t j = 1; j < n; ++j) {
      std::vector<Matrix> chi;
      for (const auto& p : e.elements)
        chi.push_back(Matrix::Constant(1, 1, std::polar(1.0, 2.0 * std::numbers::pi * double(j * p[0]) / double(n))));
      e.reps.push_back(std::move(chi));
    }
    out.push_back(std::move(e));
  }
  {
    auto e = detail::make_entry("V4", {{1, 0, 3, 2}, {2, 3, 0, 1}});
    for (int s = 1; s < 4; ++s) {
      std::vector<Matrix> chi;
      for (const auto& p : e.elements) {
        const int a = static_cast<int>(p[0]);
        chi.push_back(Matrix::Constant(1, 1, (__builtin_popcount(a & s) % 2) ? -1.0 : 1.0));
      }
      e.reps.push_back(std::move(chi));
    }
    out.push_back(std::move(e));
  }
  out.push_back(detail::make_entry("S3", {{1, 0, 2}, {1, 2, 0}}));
  return out;
}

/// A random acted space together with a random module over its fixed-point algebra.
struct RandomInstance {
  std::string description;
  ProjectiveAction action;
  GramModule<OperatorField> module;
};

/// Random projective action of a catalogue group on a space assembled from
/// coset orbits. On the orbit G/H the fiber carries the action induced from a
/// random representation of H (a restricted sum of catalogue representations),
/// conjugated by random unitaries V_x and multiplied by random phases.
inline ProjectiveAction random_action(const GroupCatalogEntry& g, Rng& rng, const InstanceLimits& lim,
                                      std::string* description = nullptr) {
  const FiniteGroup& grp = g.group;
  const std::size_t n = grp.order();

  // Subgroups: trivial, whole group, and the cyclic subgroups.
  std::vector<std::vector<std::size_t>> subgroups;
  auto add_sub = [&](std::vector<std::size_t> s) {
    std::sort(s.begin(), s.end());
    if (std::find(subgroups.begin(), subgroups.end(), s) == subgroups.end()) subgroups.push_back(std::move(s));
  };
  add_sub({grp.identity()});
  {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    add_sub(all);
  }
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<std::size_t> s{grp.identity()};
    for (std::size_t p = a; p != grp.identity(); p = grp.mul(a, p)) s.push_back(p);
    add_sub(s);
  }

  struct Orbit {
    std::vector<std::size_t> sub;
    std::vector<std::size_t> reps;   // coset representatives
    std::vector<std::size_t> rep_ids;  // catalogue reps summed in the fiber
    Index dim = 0;
  };
  std::vector<Orbit> orbits;
  std::size_t points = 0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const auto& sub = subgroups[rng.index(subgroups.size())];
    const std::size_t size = n / sub.size();
    if (points + size > lim.max_points) continue;
    Orbit o;
    o.sub = sub;
    std::vector<bool> covered(n, false);
    for (std::size_t a = 0; a < n; ++a) {
      if (covered[a]) continue;
      o.reps.push_back(a);
      for (std::size_t h : sub) covered[grp.mul(a, h)] = true;
    }
    const Index budget = 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(lim.max_fiber)));
    while (o.dim < budget) {
      const std::size_t r = rng.index(g.reps.size());
      const Index d = g.reps[r][0].rows();
      if (o.dim + d > lim.max_fiber) {
        if (o.dim > 0) break;
        continue;
      }
      o.rep_ids.push_back(r);
      o.dim += d;
    }
    points += size;
    orbits.push_back(std::move(o));
    if (points == lim.max_points || rng.index(3) == 0) break;
  }
  if (orbits.empty()) {
    Orbit o;
    o.sub.resize(n);
    for (std::size_t i = 0; i < n; ++i) o.sub[i] = i;
    o.reps = {grp.identity()};
    o.rep_ids = {0};
    o.dim = 1;
    points = 1;
    orbits.push_back(std::move(o));
  }

  // Points are (orbit, coset index).
  std::vector<GridPoint> pts;
  std::vector<Index> dims;
  std::vector<std::pair<std::size_t, std::size_t>> where;
  for (std::size_t k = 0; k < orbits.size(); ++k)
    for (std::size_t c = 0; c < orbits[k].reps.size(); ++c) {
      pts.push_back({"o" + std::to_string(k) + "c" + std::to_string(c), {}});
      dims.push_back(orbits[k].dim);
      where.emplace_back(k, c);
    }
  auto base = std::make_shared<const BaseSpace>(std::move(pts));
  auto space = std::make_shared<const FiberedSpace>(base, dims);
  std::vector<std::size_t> offset(orbits.size(), 0);
  for (std::size_t k = 1; k < orbits.size(); ++k) offset[k] = offset[k - 1] + orbits[k - 1].reps.size();

  std::vector<Matrix> v;
  for (std::size_t x = 0; x < where.size(); ++x) v.push_back(rng.haar_unitary(dims[x]));

  auto rho = [&](const Orbit& o, std::size_t h) {
    Matrix m = Matrix::Zero(o.dim, o.dim);
    Index off = 0;
    for (std::size_t r : o.rep_ids) {
      const Matrix& b = g.reps[r][h];
      m.block(off, off, b.rows(), b.cols()) = b;
      off += b.rows();
    }
    return m;
  };

  std::vector<std::vector<std::size_t>> perm(n, std::vector<std::size_t>(where.size()));
  std::vector<std::vector<Matrix>> us(n, std::vector<Matrix>(where.size()));
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t x = 0; x < where.size(); ++x) {
      const auto [k, c] = where[x];
      const Orbit& o = orbits[k];
      const std::size_t wg = grp.mul(w, o.reps[c]);
      std::size_t c2 = o.reps.size();
      std::size_t h = 0;
      for (std::size_t cc = 0; cc < o.reps.size() && c2 == o.reps.size(); ++cc) {
        const std::size_t cand = grp.mul(grp.inv(o.reps[cc]), wg);
        if (std::find(o.sub.begin(), o.sub.end(), cand) != o.sub.end()) {
          c2 = cc;
          h = cand;
        }
      }
      const std::size_t y = offset[k] + c2;
      perm[w][x] = y;
      us[w][x] = rng.phase() * (v[y] * rho(o, h) * v[x].adjoint());
    }
  if (description) {
    *description = g.name + " on " + std::to_string(points) + " points (";
    for (std::size_t k = 0; k < orbits.size(); ++k)
      *description += (k ? ", " : "") + std::string("|H|=") + std::to_string(orbits[k].sub.size()) +
                      " d=" + std::to_string(orbits[k].dim);
    *description += ")";
  }
  return ProjectiveAction(grp, space, std::move(perm), std::move(us));
}

/// The amplification H^n with the diagonal action I_n (x) U.
inline ProjectiveAction amplify(const ProjectiveAction& action, Index n) {
  const SpacePtr& h = action.space();
  std::vector<Index> dims;
  for (std::size_t x = 0; x < h->size(); ++x) dims.push_back(n * h->dim(x));
  auto space = std::make_shared<const FiberedSpace>(h->base_ptr(), std::move(dims));
  std::vector<std::vector<Matrix>> us(action.order());
  for (std::size_t w = 0; w < action.order(); ++w)
    for (std::size_t x = 0; x < h->size(); ++x)
      us[w].push_back(linalg::kron(Matrix::Identity(n, n), action.unitary(w, x)));
  return ProjectiveAction(action.group(), space, action.perm(), std::move(us));
}

/// The module q B^n for a random invariant projection q in M_n(B): generators
/// q e_i with Gram matrix G_ij = q_ij.
inline GramModule<OperatorField> random_projection_module(const ProjectiveAction& action, std::size_t n, Rng& rng) {
  const ProjectiveAction amp = amplify(action, static_cast<Index>(n));
  const SpacePtr& s = amp.space();
  std::vector<Matrix> herm;
  for (std::size_t x = 0; x < s->size(); ++x) herm.push_back(rng.hermitian(s->dim(x)));
  const OperatorField avg = average(amp, OperatorField(s, s, std::move(herm)));
  std::vector<Matrix> proj;
  for (std::size_t x = 0; x < s->size(); ++x) proj.push_back(linalg::positive_projection(avg[x]));
  GramModule<OperatorField> e;
  const SpacePtr& h = action.space();
  for (std::size_t i = 0; i < n; ++i) {
    e.generators.push_back("q e" + std::to_string(i + 1));
    std::vector<OperatorField> row;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Matrix> m;
      for (std::size_t x = 0; x < h->size(); ++x) {
        const Index d = h->dim(x);
        m.push_back(proj[x].block(static_cast<Index>(i) * d, static_cast<Index>(j) * d, d, d));
      }
      row.emplace_back(h, h, std::move(m));
    }
    e.gram.push_back(std::move(row));
  }
  return e;
}

/// The unit module: B itself with the single generator 1.
inline GramModule<OperatorField> unit_module(const ProjectiveAction& action) {
  GramModule<OperatorField> e;
  e.generators = {"1"};
  e.gram = {{OperatorField::identity(action.space())}};
  return e;
}

inline RandomInstance random_instance(Rng& rng, const InstanceLimits& lim = {}) {
  static const auto catalog = group_catalog();
  std::vector<const GroupCatalogEntry*> allowed;
  for (const auto& g : catalog)
    if (g.group.order() <= lim.max_group) allowed.push_back(&g);
  const auto& g = *allowed[rng.index(allowed.size())];
  std::string desc;
  ProjectiveAction action = random_action(g, rng, lim, &desc);
  const std::size_t n = 1 + rng.index(lim.max_generators);
  GramModule<OperatorField> e = random_projection_module(action, n, rng);
  desc += ", module q B^" + std::to_string(n);
  return {desc, std::move(action), std::move(e)};
}

}  // namespace tdual
