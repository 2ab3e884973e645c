#pragma once

#include <string>
#include <variant>
#include <vector>

#include "tdual/core/base_space.hpp"
#include "tdual/group/combinatorics.hpp"

namespace tdual {

/// A discrete-series parameter: an opaque label with the size of the GL block
/// it lives on and the dimension of its (truncated) representation space.
struct SigmaParam {
  std::string id;
  int size = 1;
  Index dim = 1;
};

/// A fully tabulated component: grid, induced fiber dimension and the
/// projective action of W_sigma given by its multiplication table, its
/// permutation of the grid and its unitaries U_w(x).
struct ComponentSpec {
  std::string id;
  std::string parabolic;
  std::string sigma;
  std::vector<GridPoint> grid;
  Index dim = 1;
  std::vector<std::string> elements;
  std::vector<std::vector<std::size_t>> table;
  std::vector<std::vector<std::size_t>> perm;    ///< perm[w][x]
  std::vector<std::vector<Matrix>> unitaries;    ///< unitaries[w][x]; empty means identities
  std::vector<double> weights;                   ///< empty means uniform weight 1
};

/// A summand of the universal principal series: the Levi-side component
/// `small`, the group-side component `big` and the inclusion of the
/// equivariance group W_sigma(L) into W_sigma(G) (embedding[w] = image of w).
struct UpsLinkSpec {
  std::string small;
  std::string big;
  std::vector<std::size_t> embedding;
};

struct TableSpec {
  std::vector<ComponentSpec> group;
  std::vector<ComponentSpec> levi;
  std::vector<UpsLinkSpec> ups;
};

/// GL(n) data: character grid on each GL(1)-factor of A, sigma labels, the
/// parabolic P and optionally a second stage Q (one composition per block of P).
struct GlSpec {
  int n = 1;
  std::vector<double> grid;
  std::vector<SigmaParam> sigmas;
  Composition parabolic;
  std::vector<Composition> stage;
};

/// A named representation descriptor used by the example queries.
struct QuerySpec {
  std::string name;
  std::string descriptor;
};

struct GroupSpec {
  std::string name;
  std::string description;
  std::variant<TableSpec, GlSpec> body;
  std::vector<QuerySpec> queries;

  bool is_table() const { return std::holds_alternative<TableSpec>(body); }
  const TableSpec& table() const { return std::get<TableSpec>(body); }
  const GlSpec& gl() const { return std::get<GlSpec>(body); }

  const QuerySpec* query(const std::string& name) const {
    for (const auto& q : queries)
      if (q.name == name) return &q;
    return nullptr;
  }
};

}  // namespace tdual
