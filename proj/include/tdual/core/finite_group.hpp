#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "tdual/core/linalg.hpp"

namespace tdual {

/// A finite group presented by its multiplication table. Element 0 need not
/// be the identity; it is located and inverses are derived at construction.
class FiniteGroup {
 public:
  using Elem = std::size_t;

  FiniteGroup() : FiniteGroup(std::vector<std::vector<Elem>>{{0}}) {}

  explicit FiniteGroup(std::vector<std::vector<Elem>> table, std::vector<std::string> names = {})
      : table_(std::move(table)), names_(std::move(names)) {
    const std::size_t n = table_.size();
    if (n == 0) throw ValidationError("FiniteGroup: empty table");
    for (const auto& row : table_) {
      if (row.size() != n) throw ValidationError("FiniteGroup: table must be square");
      for (Elem e : row)
        if (e >= n) throw ValidationError("FiniteGroup: table entry out of range");
    }
    bool found = false;
    for (Elem e = 0; e < n && !found; ++e) {
      bool ok = true;
      for (Elem a = 0; a < n && ok; ++a) ok = table_[e][a] == a && table_[a][e] == a;
      if (ok) {
        identity_ = e;
        found = true;
      }
    }
    if (!found) throw ValidationError("FiniteGroup: no identity element");
    inverse_.assign(n, n);
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        if (table_[a][b] == identity_ && table_[b][a] == identity_) inverse_[a] = b;
    for (Elem a = 0; a < n; ++a)
      if (inverse_[a] == n) throw ValidationError("FiniteGroup: element without inverse");
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        for (Elem c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
            throw ValidationError("FiniteGroup: table is not associative");
    if (names_.empty())
      for (Elem a = 0; a < n; ++a) names_.push_back("g" + std::to_string(a));
    if (names_.size() != n) throw ValidationError("FiniteGroup: one name per element required");
  }

  static FiniteGroup trivial() { return FiniteGroup({{0}}, {"e"}); }

  static FiniteGroup cyclic(std::size_t n) {
    if (n == 0) throw ValidationError("FiniteGroup::cyclic: order must be positive");
    std::vector<std::vector<Elem>> t(n, std::vector<Elem>(n));
    std::vector<std::string> names;
    for (Elem a = 0; a < n; ++a) {
      names.push_back(a == 0 ? "e" : "r" + std::to_string(a));
      for (Elem b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    }
    return FiniteGroup(std::move(t), std::move(names));
  }

  /// Group generated by the given permutations of {0..k-1},
  /// composed as (p*q)[i] = p[q[i]]. The element list is returned through `perms`.
  static FiniteGroup from_permutations(std::vector<std::vector<std::size_t>>& perms) {
    if (perms.empty()) throw ValidationError("from_permutations: no elements");
    const std::size_t k = perms.front().size();
    std::vector<std::size_t> id(k);
    for (std::size_t i = 0; i < k; ++i) id[i] = i;
    std::map<std::vector<std::size_t>, Elem> pos;
    std::vector<std::vector<std::size_t>> elems{id};
    pos[id] = 0;
    for (const auto& p : perms) {
      if (p.size() != k) throw ValidationError("from_permutations: length mismatch");
      if (!pos.count(p)) {
        pos[p] = elems.size();
        elems.push_back(p);
      }
    }
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = 0; j < elems.size(); ++j) {
          auto c = compose(elems[i], elems[j]);
          if (!pos.count(c)) {
            pos[c] = elems.size();
            elems.push_back(std::move(c));
            grew = true;
          }
        }
    }
    const std::size_t n = elems.size();
    std::vector<std::vector<Elem>> t(n, std::vector<Elem>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t[i][j] = pos.at(compose(elems[i], elems[j]));
    std::vector<std::string> names;
    for (const auto& e : elems) {
      std::string s = "(";
      for (std::size_t i = 0; i < e.size(); ++i) s += (i ? " " : "") + std::to_string(e[i]);
      names.push_back(s + ")");
    }
    perms = std::move(elems);
    return FiniteGroup(std::move(t), std::move(names));
  }

  static std::vector<std::size_t> compose(const std::vector<std::size_t>& p, const std::vector<std::size_t>& q) {
    std::vector<std::size_t> r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
    return r;
  }

  std::size_t order() const { return table_.size(); }
  Elem identity() const { return identity_; }
  Elem mul(Elem a, Elem b) const { return table_.at(a).at(b); }
  Elem inv(Elem a) const { return inverse_.at(a); }
  const std::string& name(Elem a) const { return names_.at(a); }
  const std::vector<std::vector<Elem>>& table() const { return table_; }

  void require(Elem a) const {
    if (a >= order()) throw ShapeError("group element " + std::to_string(a) + " out of range");
  }

  /// True when `subset` is closed under products and contains the identity.
  bool is_subgroup(const std::vector<Elem>& subset) const {
    std::vector<bool> in(order(), false);
    for (Elem a : subset) {
      require(a);
      in[a] = true;
    }
    if (!in[identity_]) return false;
    for (Elem a : subset)
      for (Elem b : subset)
        if (!in[mul(a, b)]) return false;
    return true;
  }

 private:
  std::vector<std::vector<Elem>> table_;
  std::vector<std::string> names_;
  Elem identity_ = 0;
  std::vector<Elem> inverse_;
};

}  // namespace tdual
