#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "tdual/core/linalg.hpp"

namespace tdual {

/// Seeded random source. Distributions are derived by hand from the raw
/// 64-bit engine output because the standard distributions are not
/// guaranteed to produce the same sequence across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0x5eedULL) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    if (n == 0) throw Error("Rng::index: empty range");
    return static_cast<std::size_t>(engine_() % n);
  }

  int integer(int lo, int hi) { return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1))); }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  cplx complex_normal() { return {normal(), normal()}; }

  cplx phase() {
    const double t = uniform(0.0, 2.0 * std::numbers::pi);
    return {std::cos(t), std::sin(t)};
  }

  Matrix gaussian(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
  }

  Vector gaussian_vector(Index n) { return gaussian(n, 1).col(0); }

  Matrix hermitian(Index n) {
    const Matrix g = gaussian(n, n);
    return linalg::hermitian_part(g);
  }

  /// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
  Matrix haar_unitary(Index n) {
    if (n == 0) return Matrix(0, 0);
    Eigen::HouseholderQR<Matrix> qr(gaussian(n, n));
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
      const double a = std::abs(r(j, j));
      if (a > 0) q.col(j) *= r(j, j) / a;
    }
    return q;
  }

  std::uint64_t next_seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tdual
