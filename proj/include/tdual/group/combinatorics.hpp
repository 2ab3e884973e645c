#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tdual/core/finite_group.hpp"
#include "tdual/core/projective_action.hpp"

namespace tdual {

/// An ordered list of positive block sizes; labels a standard parabolic
/// subgroup of GL(n) (block upper triangular) and its block-diagonal Levi.
struct Composition {
  std::vector<int> parts;

  Composition() = default;
  explicit Composition(std::vector<int> p) : parts(std::move(p)) {
    if (parts.empty()) throw ValidationError("Composition: at least one block required");
    for (int v : parts)
      if (v < 1) throw ValidationError("Composition: block sizes must be positive");
  }

  int n() const { return std::accumulate(parts.begin(), parts.end(), 0); }
  std::size_t blocks() const { return parts.size(); }

  /// Block sizes sorted in decreasing order (the associate-class key).
  std::vector<int> multiset() const {
    auto m = parts;
    std::sort(m.begin(), m.end(), std::greater<>());
    return m;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
    return s + "]";
  }

  friend auto operator<=>(const Composition&, const Composition&) = default;
  friend bool operator==(const Composition&, const Composition&) = default;
};

/// All compositions of n: fewer blocks first, and within equal block count
/// lexicographically decreasing, so n = 3 gives [3], [2,1], [1,2], [1,1,1].
inline std::vector<Composition> enumerate_parabolics(int n) {
  if (n < 1) throw ValidationError("enumerate_parabolics: n must be at least 1");
  std::vector<Composition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int p = remaining; p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p);
      cur.pop_back();
    }
  };
  rec(rec, n);
  std::stable_sort(out.begin(), out.end(),
                   [](const Composition& a, const Composition& b) { return a.blocks() < b.blocks(); });
  return out;
}

/// Compositions with the same multiset of block sizes are associate.
struct AssociateClass {
  std::vector<int> partition;          ///< decreasing block sizes
  std::vector<Composition> members;    ///< in enumeration order
  Composition representative;          ///< lexicographically smallest member
};

inline std::vector<AssociateClass> associate_classes(int n) {
  std::vector<AssociateClass> out;
  std::map<std::vector<int>, std::size_t> where;
  for (auto& c : enumerate_parabolics(n)) {
    auto key = c.multiset();
    auto it = where.find(key);
    if (it == where.end()) {
      where.emplace(key, out.size());
      out.push_back({key, {c}, c});
    } else {
      auto& cls = out[it->second];
      cls.members.push_back(c);
      cls.representative = std::min(cls.representative, c);
    }
  }
  return out;
}

/// The Weyl group of a standard Levi: permutations of blocks of equal size.
/// A block permutation p sends block i to position p[i]; composition is
/// (z w)[i] = z[w[i]].
class WeylData {
 public:
  explicit WeylData(Composition levi) : levi_(std::move(levi)) {
    std::vector<std::size_t> p(levi_.blocks());
    std::iota(p.begin(), p.end(), 0);
    do {
      bool ok = true;
      for (std::size_t i = 0; i < p.size() && ok; ++i) ok = levi_.parts[p[i]] == levi_.parts[i];
      if (ok) elements_.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }

  const Composition& levi() const { return levi_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<std::vector<std::size_t>>& elements() const { return elements_; }
  const std::vector<std::size_t>& element(std::size_t i) const { return elements_.at(i); }

  /// Product of factorials of the block-size multiplicities.
  std::size_t expected_order() const {
    std::map<int, std::size_t> mult;
    for (int v : levi_.parts) ++mult[v];
    std::size_t o = 1;
    for (auto [size, m] : mult)
      for (std::size_t k = 2; k <= m; ++k) o *= k;
    return o;
  }

  /// Multiplication table (only for groups of modest order). Element i of
  /// the group is elements()[i]; the identity comes first in both.
  FiniteGroup group() const {
    if (order() > 5040) throw Error("WeylData::group: group too large for a multiplication table");
    auto elems = elements_;
    FiniteGroup g = FiniteGroup::from_permutations(elems);
    if (elems != elements_) throw Error("WeylData::group: element order changed");
    return g;
  }

  static std::string permutation_name(const std::vector<std::size_t>& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + std::to_string(p[i]);
    return s + ")";
  }

 private:
  Composition levi_;
  std::vector<std::vector<std::size_t>> elements_;
};

inline WeylData weyl_group(const Composition& levi) { return WeylData(levi); }

/// Elements of W fixing a labelling of the blocks: w with label[w[i]] == label[i].
inline std::vector<std::size_t> sigma_stabilizer(const WeylData& w, const std::vector<std::string>& labels) {
  if (labels.size() != w.levi().blocks()) throw ShapeError("sigma_stabilizer: one label per block required");
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < w.order(); ++e) {
    const auto& p = w.element(e);
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) ok = labels[p[i]] == labels[i];
    if (ok) out.push_back(e);
  }
  return out;
}

/// Stabilizers at two levels: blocks of the small Levi M are grouped into the
/// blocks of an intermediate Levi L (group sizes `grouping`). W_sigma(L) consists
/// of the stabilizer elements that keep every block inside its L-block.
struct RelativeStabilizer {
  std::vector<std::size_t> in_levi;   ///< W_sigma(L), as indices into WeylData of M
  std::vector<std::size_t> in_group;  ///< W_sigma(G)
  bool nested = false;                ///< W_sigma(L) is a subset of W_sigma(G)
};

inline RelativeStabilizer relative_sigma_stabilizer(const WeylData& w, const std::vector<std::string>& labels,
                                                    const std::vector<std::size_t>& grouping) {
  std::vector<std::size_t> owner;
  for (std::size_t g = 0; g < grouping.size(); ++g)
    for (std::size_t k = 0; k < grouping[g]; ++k) owner.push_back(g);
  if (owner.size() != w.levi().blocks()) throw ShapeError("relative_sigma_stabilizer: grouping does not cover the blocks");
  RelativeStabilizer r;
  r.in_group = sigma_stabilizer(w, labels);
  for (auto e : r.in_group) {
    const auto& p = w.element(e);
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) ok = owner[p[i]] == owner[i];
    if (ok) r.in_levi.push_back(e);
  }
  r.nested = std::includes(r.in_group.begin(), r.in_group.end(), r.in_levi.begin(), r.in_levi.end());
  return r;
}

/// W_{sigma,phi}: the elements of `subgroup` fixing the grid point.
inline std::vector<std::size_t> isotropy_at(const ProjectiveAction& action, const std::vector<std::size_t>& subgroup,
                                            const std::string& point) {
  const std::size_t x = action.space()->base().require_index(point);
  std::vector<std::size_t> out;
  for (auto w : subgroup)
    if (action.act(w, x) == x) out.push_back(w);
  return out;
}

inline std::vector<std::size_t> isotropy_at(const ProjectiveAction& action, const std::string& point) {
  std::vector<std::size_t> all(action.order());
  std::iota(all.begin(), all.end(), 0);
  return isotropy_at(action, all, point);
}

/// Replaces every block of P by its refinement: Q holds one composition per
/// block of P, each summing to that block's size.
inline Composition glue_parabolic(const std::vector<Composition>& q, const Composition& p) {
  if (q.size() != p.blocks()) throw ShapeError("glue_parabolic: one refinement per block of P required");
  std::vector<int> parts;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i].n() != p.parts[i])
      throw ShapeError("glue_parabolic: refinement of block " + std::to_string(i) + " has the wrong size");
    parts.insert(parts.end(), q[i].parts.begin(), q[i].parts.end());
  }
  return Composition(std::move(parts));
}

/// Inverse of glue_parabolic: splits a composition R refining P into per-block pieces.
inline std::vector<Composition> split_refinement(const Composition& r, const Composition& p) {
  std::vector<Composition> out;
  std::size_t j = 0;
  for (int block : p.parts) {
    std::vector<int> piece;
    int sum = 0;
    while (sum < block && j < r.parts.size()) {
      sum += r.parts[j];
      piece.push_back(r.parts[j++]);
    }
    if (sum != block) throw ShapeError("split_refinement: " + r.str() + " does not refine " + p.str());
    out.emplace_back(std::move(piece));
  }
  if (j != r.parts.size()) throw ShapeError("split_refinement: " + r.str() + " does not refine " + p.str());
  return out;
}

inline bool refines(const Composition& r, const Composition& p) {
  try {
    split_refinement(r, p);
    return true;
  } catch (const ShapeError&) {
    return false;
  }
}

}  // namespace tdual
