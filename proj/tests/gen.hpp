#pragma once

#include <random>

#include "sdopart/symlin.hpp"

namespace sdopart::testing {

// Seeded source for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double a = -1.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

  Vector vector(Index n, double a = -1.0, double b = 1.0) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = uniform(a, b);
    return v;
  }

  Matrix matrix(Index r, Index c) {
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) m(i, j) = uniform();
    return m;
  }

  SymMatd sym(Index n) {
    const Matrix a = matrix(n, n);
    return SymMatd(0.5 * (a + a.transpose()));
  }

  // PSD of the requested rank.
  SymMatd psd(Index n, Index rank) {
    const Matrix g = matrix(n, rank);
    return SymMatd(g * g.transpose());
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace sdopart::testing
