#pragma once

#include <algorithm>
#include <vector>

#include "tdual/core/operator_field.hpp"

namespace tdual {

/// Finite direct sum with coordinatewise operations and the supremum norm.
/// T must provide norm(), adjoint(), hs_inner() and the arithmetic operators.
template <class T>
class DirectSum {
 public:
  DirectSum() = default;
  explicit DirectSum(std::vector<T> items) : items_(std::move(items)) {}

  std::size_t size() const { return items_.size(); }
  const T& operator[](std::size_t i) const { return items_.at(i); }
  T& operator[](std::size_t i) { return items_.at(i); }
  const std::vector<T>& items() const { return items_; }

  double norm() const {
    double n = 0.0;
    for (const auto& t : items_) n = std::max(n, t.norm());
    return n;
  }

  DirectSum adjoint() const { return map([](const T& t) { return t.adjoint(); }); }

  /// Scalar pairing: the sum of the summands' pairings. Distinct summands are orthogonal.
  cplx inner(const DirectSum& other) const {
    require_same_length(other);
    cplx s = 0.0;
    for (std::size_t i = 0; i < items_.size(); ++i) s += items_[i].hs_inner(other.items_[i]);
    return s;
  }

  template <class F>
  DirectSum map(F f) const {
    std::vector<T> out;
    out.reserve(items_.size());
    for (const auto& t : items_) out.push_back(f(t));
    return DirectSum(std::move(out));
  }

  friend DirectSum operator+(const DirectSum& a, const DirectSum& b) {
    a.require_same_length(b);
    std::vector<T> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a.items_[i] + b.items_[i]);
    return DirectSum(std::move(out));
  }

  friend DirectSum operator-(const DirectSum& a, const DirectSum& b) {
    a.require_same_length(b);
    std::vector<T> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a.items_[i] - b.items_[i]);
    return DirectSum(std::move(out));
  }

  friend DirectSum operator*(const DirectSum& a, const DirectSum& b) {
    a.require_same_length(b);
    std::vector<T> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a.items_[i] * b.items_[i]);
    return DirectSum(std::move(out));
  }

  friend DirectSum operator*(cplx s, const DirectSum& a) {
    return a.map([s](const T& t) { return s * t; });
  }

 private:
  void require_same_length(const DirectSum& other) const {
    if (other.size() != size()) throw ShapeError("DirectSum: operands have different numbers of summands");
  }

  std::vector<T> items_;
};

}  // namespace tdual
