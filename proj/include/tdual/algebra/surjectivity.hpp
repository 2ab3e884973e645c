#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tdual/core/rng.hpp"

namespace tdual {

// Finite-dimensional checks of the statement that a sum of *-homomorphisms
// with pairwise disjoint supports is surjective. A = M_{n_1} + ... + M_{n_k};
// a quotient map picks a subset of the summands, each conjugated by a fixed
// unitary. Surjectivity of the combined map is decided by the rank of its
// matrix on the matrix-unit basis of A.

struct SurjectivityCase {
  std::string name;
  bool expected = true;
  bool surjective = false;
  Index rank = 0;
  Index target_dim = 0;
  Index single_target_dim = 0;  ///< for the repeated-quotient control: dim of one copy

  bool ok() const { return surjective == expected; }
};

struct SurjectivityReport {
  std::vector<SurjectivityCase> cases;
  bool passed() const {
    for (const auto& c : cases)
      if (!c.ok()) return false;
    return !cases.empty();
  }
};

namespace detail {

struct Quotient {
  std::vector<std::size_t> support;  ///< summands of A kept, in order
  std::vector<Matrix> twist;         ///< one unitary per kept summand
};

/// Matrix of a direct sum of quotient maps on the matrix units of A.
inline Matrix quotient_matrix(const std::vector<Index>& sizes, const std::vector<Quotient>& maps) {
  Index rows = 0, cols = 0;
  for (Index n : sizes) cols += n * n;
  for (const auto& q : maps)
    for (auto s : q.support) rows += sizes[s] * sizes[s];
  Matrix m = Matrix::Zero(rows, cols);
  Index col = 0;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const Index n = sizes[s];
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i, ++col) {
        Index row = 0;
        for (const auto& q : maps)
          for (std::size_t t = 0; t < q.support.size(); ++t) {
            const Index nt = sizes[q.support[t]];
            if (q.support[t] == s) {
              const Matrix img = q.twist[t].col(i) * q.twist[t].col(j).adjoint();
              m.block(row, col, nt * nt, 1) = linalg::vec(img);
            }
            row += nt * nt;
          }
      }
  }
  return m;
}

inline Quotient random_quotient(const std::vector<Index>& sizes, std::vector<std::size_t> support, Rng& rng) {
  Quotient q{std::move(support), {}};
  for (auto s : q.support) q.twist.push_back(rng.haar_unitary(sizes[s]));
  return q;
}

inline SurjectivityCase run_case(std::string name, bool expected, const std::vector<Index>& sizes,
                                 const std::vector<Quotient>& maps) {
  SurjectivityCase c;
  c.name = std::move(name);
  c.expected = expected;
  const Matrix m = quotient_matrix(sizes, maps);
  c.rank = linalg::numerical_rank(m, 1e-9);
  c.target_dim = m.rows();
  c.surjective = c.rank == c.target_dim;
  return c;
}

}  // namespace detail

inline SurjectivityReport surjectivity_property_tests(std::uint64_t seed = 3) {
  using detail::Quotient;
  Rng rng(seed);
  SurjectivityReport rep;

  {  // the two coordinate projections of M2 + M3
    const std::vector<Index> sizes{2, 3};
    rep.cases.push_back(detail::run_case("M2+M3 coordinate projections", true, sizes,
                                         {Quotient{{0}, {Matrix::Identity(2, 2)}}, Quotient{{1}, {Matrix::Identity(3, 3)}}}));
  }
  {  // every pair of nonempty supports in M2 + M2 + M2: surjective exactly when disjoint
    const std::vector<Index> sizes{2, 2, 2};
    for (unsigned a = 1; a < 8; ++a)
      for (unsigned b = 1; b < 8; ++b) {
        std::vector<std::size_t> sa, sb;
        for (std::size_t s = 0; s < 3; ++s) {
          if (a & (1u << s)) sa.push_back(s);
          if (b & (1u << s)) sb.push_back(s);
        }
        const bool disjoint = (a & b) == 0;
        rep.cases.push_back(detail::run_case("M2^3 supports " + std::to_string(a) + "," + std::to_string(b), disjoint,
                                             sizes, {detail::random_quotient(sizes, sa, rng),
                                                     detail::random_quotient(sizes, sb, rng)}));
      }
  }
  {  // truncation of a countable family with pairwise disjoint supports
    std::vector<Index> sizes;
    std::vector<Quotient> maps;
    for (std::size_t s = 0; s < 8; ++s) sizes.push_back(1 + static_cast<Index>(rng.index(3)));
    for (std::size_t s = 0; s < 8; s += 2) maps.push_back(detail::random_quotient(sizes, {s, s + 1}, rng));
    rep.cases.push_back(detail::run_case("disjoint family of 4 on 8 summands", true, sizes, maps));
  }
  {  // the same quotient twice: the image is the diagonal
    const std::vector<Index> sizes{2, 3};
    const Quotient q = detail::random_quotient(sizes, {1}, rng);
    auto c = detail::run_case("repeated quotient", false, sizes, {q, q});
    c.single_target_dim = 9;
    rep.cases.push_back(std::move(c));
  }
  return rep;
}

}  // namespace tdual
