#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "tdual/algebra/model.hpp"
#include "tdual/group/spec.hpp"

namespace tdual {

/// A summand of a universal-principal-series bimodule between two models:
/// component indices on each side and the inclusion W_sigma(L) -> W_sigma(G)
/// as a list of group-element indices.
struct UpsLink {
  std::size_t small = 0;
  std::size_t big = 0;
  std::vector<std::size_t> embedding;
};

inline Component component_from_spec(const ComponentSpec& s, double tol = 1e-8) {
  if (s.dim < 1) throw ValidationError("component '" + s.id + "': fiber dimension must be positive");
  auto base = std::make_shared<const BaseSpace>(s.grid);
  auto space = FiberedSpace::uniform(base, s.dim);
  FiniteGroup group(s.table, s.elements);
  auto us = s.unitaries;
  if (us.empty()) {
    us.assign(group.order(), std::vector<Matrix>(base->size(), Matrix::Identity(s.dim, s.dim)));
  }
  if (us.size() != group.order() || s.perm.size() != group.order())
    throw ShapeError("component '" + s.id + "': one permutation and one unitary list per group element required");
  try {
    ProjectiveAction action(std::move(group), space, s.perm, std::move(us), tol);
    return Component(s.id, s.parabolic, s.sigma, std::move(action), s.weights);
  } catch (const ValidationError& e) {
    throw ValidationError("component '" + s.id + "': " + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError("component '" + s.id + "': " + e.what());
  }
}

inline ModelPtr model_from_specs(const std::string& name, const std::vector<ComponentSpec>& specs) {
  std::vector<Component> comps;
  for (const auto& s : specs) comps.push_back(component_from_spec(s));
  return std::make_shared<const AlgebraModel>(name, std::move(comps));
}

inline std::vector<UpsLink> links_from_specs(const AlgebraModel& big, const AlgebraModel& small,
                                             const std::vector<UpsLinkSpec>& specs) {
  std::vector<UpsLink> out;
  for (const auto& s : specs) {
    UpsLink l{small.require(s.small), big.require(s.big), s.embedding};
    if (l.embedding.empty() && small[l.small].group_order() == 1) l.embedding = {big[l.big].action().group().identity()};
    out.push_back(std::move(l));
  }
  return out;
}

namespace gl {

/// Sigma parameters sorted by (size, id), the canonical order inside a block.
inline std::vector<SigmaParam> sorted_sigmas(const GlSpec& spec) {
  auto s = spec.sigmas;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].size < 1 || s[i].dim < 1) throw ValidationError("sigma '" + s[i].id + "': size and dim must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (s[i].id == s[j].id) throw ValidationError("duplicate sigma label '" + s[i].id + "'");
  }
  std::stable_sort(s.begin(), s.end(), [](const SigmaParam& a, const SigmaParam& b) {
    return std::tie(a.size, a.id) < std::tie(b.size, b.id);
  });
  return s;
}

/// W_sigma for a block sequence: permutations of positions that keep every
/// block inside its ambient block and preserve sigma labels. Identity first.
inline std::vector<std::vector<std::size_t>> block_group(const std::vector<SigmaBlock>& blocks) {
  std::vector<int> sizes;
  std::vector<std::string> labels;
  std::vector<std::size_t> grouping;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    sizes.push_back(blocks[i].size);
    labels.push_back(blocks[i].sigma);
    if (i == 0 || blocks[i].ambient != blocks[i - 1].ambient) grouping.push_back(0);
    ++grouping.back();
  }
  WeylData w{Composition(sizes)};
  std::vector<std::vector<std::size_t>> out;
  for (auto e : relative_sigma_stabilizer(w, labels, grouping).in_levi) out.push_back(w.element(e));
  return out;
}

/// Positions in canonical order: stable sort by (size, sigma).
inline std::vector<std::size_t> canonical_order(const std::vector<SigmaBlock>& blocks) {
  std::vector<std::size_t> ord(blocks.size());
  for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = i;
  std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(blocks[a].size, blocks[a].sigma) < std::tie(blocks[b].size, blocks[b].sigma);
  });
  return ord;
}

inline std::string component_id(const std::vector<SigmaBlock>& blocks) {
  std::string s;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const bool opens = i == 0 || blocks[i].ambient != blocks[i - 1].ambient;
    const bool closes = i + 1 == blocks.size() || blocks[i + 1].ambient != blocks[i].ambient;
    s += (opens ? "{" : ",") + blocks[i].sigma + (closes ? "}" : "");
  }
  return s;
}

/// Permutation matrix moving tensor factor i to position p[i].
inline Matrix tensor_permutation(const std::vector<Index>& dims, const std::vector<std::size_t>& p) {
  const std::size_t k = dims.size();
  std::vector<Index> moved(k);
  for (std::size_t i = 0; i < k; ++i) moved[p[i]] = dims[i];
  auto strides = [k](const std::vector<Index>& d) {
    std::vector<Index> s(k, 1);
    for (std::size_t i = k; i-- > 1;) s[i - 1] = s[i] * d[i];
    return s;
  };
  const auto src = strides(dims), dst = strides(moved);
  Index total = 1;
  for (Index d : dims) total *= d;
  Matrix m = Matrix::Zero(total, total);
  for (Index col = 0; col < total; ++col) {
    Index row = 0;
    for (std::size_t i = 0; i < k; ++i) row += ((col / src[i]) % dims[i]) * dst[p[i]];
    m(row, col) = 1.0;
  }
  return m;
}

inline Component make_component(const std::vector<SigmaBlock>& blocks, const std::vector<double>& grid) {
  const std::size_t k = blocks.size();
  const std::size_t g = grid.size();
  std::size_t npts = 1;
  for (std::size_t i = 0; i < k; ++i) npts *= g;
  const auto ord = canonical_order(blocks);

  std::vector<std::vector<std::size_t>> tuples(npts, std::vector<std::size_t>(k));
  std::vector<GridPoint> pts;
  std::vector<double> weights;
  std::map<std::vector<std::size_t>, std::size_t> where;
  for (std::size_t t = 0; t < npts; ++t) {
    std::size_t r = t;
    for (std::size_t i = k; i-- > 0;) {
      tuples[t][i] = r % g;
      r /= g;
    }
    GridPoint p;
    double m = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double c = grid[tuples[t][ord[i]]];
      p.coords.push_back(grid[tuples[t][i]]);
      p.label += (i ? "," : "") + BaseSpace::format_coord(c);
      m += grid[tuples[t][i]] * grid[tuples[t][i]];
    }
    pts.push_back(std::move(p));
    weights.push_back(m);
    where[tuples[t]] = t;
  }

  std::vector<Index> dims;
  Index d = 1;
  std::string sigma;
  std::vector<int> sizes;
  for (const auto& b : blocks) {
    dims.push_back(b.dim);
    d *= b.dim;
    sigma += (sigma.empty() ? "" : ",") + b.sigma;
    sizes.push_back(b.size);
  }
  auto base = std::make_shared<const BaseSpace>(std::move(pts));
  auto space = FiberedSpace::uniform(base, d);

  auto perms = block_group(blocks);
  const auto listed = perms;
  FiniteGroup group = FiniteGroup::from_permutations(perms);
  if (perms != listed) throw Error("gl::make_component: stabilizer list is not closed");

  std::vector<std::vector<std::size_t>> perm(perms.size(), std::vector<std::size_t>(npts));
  std::vector<std::vector<Matrix>> us(perms.size());
  for (std::size_t w = 0; w < perms.size(); ++w) {
    const Matrix u = tensor_permutation(dims, perms[w]);
    for (std::size_t t = 0; t < npts; ++t) {
      std::vector<std::size_t> moved(k);
      for (std::size_t i = 0; i < k; ++i) moved[perms[w][i]] = tuples[t][i];
      perm[w][t] = where.at(moved);
    }
    us[w].assign(npts, u);
  }
  ProjectiveAction action(std::move(group), space, std::move(perm), std::move(us));
  return Component(component_id(blocks), Composition(sizes).str(), sigma, std::move(action), std::move(weights),
                   blocks);
}

/// The model of the Levi with block sizes `ambient`: one component per choice,
/// for every ambient block, of a multiset of sigmas filling it.
inline ModelPtr model(const GlSpec& spec, const Composition& ambient, const std::string& name) {
  if (ambient.n() != spec.n) throw ShapeError("gl::model: Levi " + ambient.str() + " is not a Levi of GL(" +
                                              std::to_string(spec.n) + ")");
  if (spec.grid.empty()) throw ValidationError("gl::model: empty character grid");
  const auto sig = sorted_sigmas(spec);

  // fillings[b] = nondecreasing index sequences into sig with sizes summing to ambient block b
  std::vector<std::vector<std::vector<std::size_t>>> fillings;
  for (int target : ambient.parts) {
    std::vector<std::vector<std::size_t>> found;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t from, int left) -> void {
      if (left == 0) {
        found.push_back(cur);
        return;
      }
      for (std::size_t s = from; s < sig.size(); ++s) {
        if (sig[s].size > left) continue;
        cur.push_back(s);
        self(self, s, left - sig[s].size);
        cur.pop_back();
      }
    };
    rec(rec, 0, target);
    fillings.push_back(std::move(found));
  }

  std::vector<Component> comps;
  std::vector<std::size_t> pick(fillings.size(), 0);
  bool more = std::all_of(fillings.begin(), fillings.end(), [](const auto& f) { return !f.empty(); });
  while (more) {
    std::vector<SigmaBlock> blocks;
    for (std::size_t b = 0; b < fillings.size(); ++b)
      for (std::size_t s : fillings[b][pick[b]]) blocks.push_back({sig[s].id, sig[s].size, sig[s].dim, b});
    comps.push_back(make_component(blocks, spec.grid));
    more = false;
    for (std::size_t b = fillings.size(); b-- > 0;) {
      if (++pick[b] < fillings[b].size()) {
        more = true;
        break;
      }
      pick[b] = 0;
    }
  }
  return std::make_shared<const AlgebraModel>(name, std::move(comps));
}

/// UPS links from the model of a Levi `small_levi` to the model of a coarser
/// Levi `big_levi`: every small component maps to the big component with the
/// same sigma blocks regrouped, and W_sigma(small) embeds by conjugation with
/// the sorting permutation.
inline std::vector<UpsLink> links(const AlgebraModel& big, const Composition& big_levi, const AlgebraModel& small,
                                  const Composition& small_levi) {
  const auto split = split_refinement(small_levi, big_levi);
  std::vector<std::size_t> owner;
  for (std::size_t b = 0; b < split.size(); ++b)
    for (std::size_t k = 0; k < split[b].blocks(); ++k) owner.push_back(b);

  std::vector<UpsLink> out;
  for (std::size_t c = 0; c < small.size(); ++c) {
    auto blocks = small[c].blocks();
    if (blocks.empty()) throw ValidationError("gl::links: component '" + small[c].id() + "' has no block data");
    for (auto& b : blocks) b.ambient = owner.at(b.ambient);
    std::vector<std::size_t> ord(blocks.size());
    for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = i;
    std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(blocks[a].ambient, blocks[a].size, blocks[a].sigma) <
             std::tie(blocks[b].ambient, blocks[b].size, blocks[b].sigma);
    });
    std::vector<std::size_t> pi(ord.size());
    std::vector<SigmaBlock> sorted;
    for (std::size_t j = 0; j < ord.size(); ++j) {
      pi[ord[j]] = j;
      sorted.push_back(blocks[ord[j]]);
    }
    const std::size_t bc = big.require(component_id(sorted));

    const auto small_perms = block_group(small[c].blocks());
    const auto big_perms = block_group(big[bc].blocks());
    UpsLink link{c, bc, {}};
    for (const auto& p : small_perms) {
      std::vector<std::size_t> q(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) q[pi[i]] = pi[p[i]];
      auto it = std::find(big_perms.begin(), big_perms.end(), q);
      if (it == big_perms.end()) throw Error("gl::links: stabilizer does not embed");
      link.embedding.push_back(static_cast<std::size_t>(it - big_perms.begin()));
    }
    out.push_back(std::move(link));
  }
  return out;
}

}  // namespace gl

/// The model of C*_r(G) described by a spec.
inline ModelPtr build_model(const GroupSpec& spec) {
  if (spec.is_table()) return model_from_specs("G", spec.table().group);
  return gl::model(spec.gl(), Composition({spec.gl().n}), "G");
}

/// The model of C*_r(L) for the Levi of the spec's parabolic.
inline ModelPtr build_levi_model(const GroupSpec& spec) {
  if (spec.is_table()) return model_from_specs("L", spec.table().levi);
  return gl::model(spec.gl(), spec.gl().parabolic, "L");
}

}  // namespace tdual
