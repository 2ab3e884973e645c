#pragma once

#include <algorithm>
#include <cstdio>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tdual/core/linalg.hpp"

namespace tdual {

/// A labelled point of a finite grid. `coords` carries the character
/// coordinates (empty for purely combinatorial points).
struct GridPoint {
  std::string label;
  std::vector<double> coords;
};

/// Finite ordered set of labelled points. Every fieldwise container in the
/// library is indexed by position in this order.
class BaseSpace {
 public:
  BaseSpace() = default;

  explicit BaseSpace(std::vector<GridPoint> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      auto [it, fresh] = index_.emplace(points_[i].label, i);
      if (!fresh) throw ValidationError("BaseSpace: duplicate point label '" + points_[i].label + "'");
    }
  }

  static BaseSpace from_labels(const std::vector<std::string>& labels) {
    std::vector<GridPoint> pts;
    pts.reserve(labels.size());
    for (const auto& l : labels) pts.push_back({l, {}});
    return BaseSpace(std::move(pts));
  }

  /// One-dimensional grid; labels are the coordinates printed with %g.
  static BaseSpace line(const std::vector<double>& xs) {
    std::vector<GridPoint> pts;
    for (double x : xs) pts.push_back({format_coord(x), {x}});
    return BaseSpace(std::move(pts));
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const GridPoint& operator[](std::size_t i) const { return points_.at(i); }
  const std::vector<GridPoint>& points() const { return points_; }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require_index(const std::string& label) const {
    auto i = index_of(label);
    if (!i) throw ValidationError("point '" + label + "' is not on the grid");
    return *i;
  }

  static std::string format_coord(double x) {
    if (x == 0.0) x = 0.0;  // normalise -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
  }

  friend bool operator==(const BaseSpace& a, const BaseSpace& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a.points_[i].label != b.points_[i].label) return false;
    return true;
  }

 private:
  std::vector<GridPoint> points_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A base space together with a finite fiber dimension at each point.
/// Zero-dimensional fibers are allowed so that quotients (which may vanish at
/// some points) stay over the same base; input data is checked with
/// require_positive().
class FiberedSpace {
 public:
  FiberedSpace(std::shared_ptr<const BaseSpace> base, std::vector<Index> dims)
      : base_(std::move(base)), dims_(std::move(dims)) {
    if (!base_) throw ShapeError("FiberedSpace: null base");
    if (dims_.size() != base_->size()) throw ShapeError("FiberedSpace: one dimension per point required");
    for (Index d : dims_)
      if (d < 0) throw ValidationError("FiberedSpace: negative fiber dimension");
  }

  void require_positive() const {
    for (std::size_t x = 0; x < dims_.size(); ++x)
      if (dims_[x] < 1)
        throw ValidationError("fiber at point '" + base_->points()[x].label + "' must have positive dimension");
  }

  static std::shared_ptr<const FiberedSpace> uniform(std::shared_ptr<const BaseSpace> base, Index d) {
    const std::size_t n = base->size();
    return std::make_shared<const FiberedSpace>(std::move(base), std::vector<Index>(n, d));
  }

  const BaseSpace& base() const { return *base_; }
  const std::shared_ptr<const BaseSpace>& base_ptr() const { return base_; }
  std::size_t size() const { return dims_.size(); }
  Index dim(std::size_t x) const { return dims_.at(x); }
  const std::vector<Index>& dims() const { return dims_; }
  Index total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), Index{0}); }

  bool same_base(const FiberedSpace& other) const {
    return base_ == other.base_ || *base_ == *other.base_;
  }

  friend bool operator==(const FiberedSpace& a, const FiberedSpace& b) {
    return a.same_base(b) && a.dims_ == b.dims_;
  }

 private:
  std::shared_ptr<const BaseSpace> base_;
  std::vector<Index> dims_;
};

using SpacePtr = std::shared_ptr<const FiberedSpace>;

}  // namespace tdual
