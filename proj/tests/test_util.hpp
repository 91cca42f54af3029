#pragma once

#include <random>

#include "qnl/field.hpp"
#include "qnl/fft.hpp"
#include "qnl/operators.hpp"

namespace qnl::testutil {

// Real random field from seeded low-mode Fourier data.
inline ScalarField random_scalar(const SpectralGrid& grid, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ScalarField f(grid, Rep::Physical);
  f.fill([&](const double*) { return 0.0; });
  std::size_t i = 0;
  for (auto& z : f) {
    z = gauss(rng);
    if (++i >= f.size()) break;
  }
  // smooth it so derivatives stay tame
  return mollify(f, 0.4);
}

inline VectorField random_vector(const SpectralGrid& grid, unsigned long seed) {
  VectorField v(grid, Rep::Physical);
  for (int a = 0; a < grid.dim; ++a) v.comp(a) = random_scalar(grid, seed + 101 * a);
  return v;
}

}  // namespace qnl::testutil
