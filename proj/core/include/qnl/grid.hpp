// Periodic grid geometry and wavenumber bookkeeping.
#pragma once

#include <array>
#include <cstddef>
#include <cmath>

#include "qnl/errors.hpp"

namespace qnl {

inline constexpr double kPi = 3.14159265358979323846;

// Uniform periodic grid on [0,L)^d, d in {2,3}. Wavenumbers per axis are
// 2*pi*j/L with j = -N/2 .. N/2-1. The dealias mask zeroes every mode with
// |j| > dealias_fraction * N/2 on any axis.
struct SpectralGrid {
  int dim = 2;
  std::array<int, 3> n{0, 0, 0};          // points per axis (even)
  std::array<double, 3> extent{0, 0, 0};  // L per axis
  double dealias_fraction = 2.0 / 3.0;

  static SpectralGrid isotropic(int dim, int n_per_axis, double extent_per_axis = 2 * kPi,
                                double dealias = 2.0 / 3.0) {
    SpectralGrid g;
    g.dim = dim;
    g.dealias_fraction = dealias;
    for (int a = 0; a < dim; ++a) {
      g.n[a] = n_per_axis;
      g.extent[a] = extent_per_axis;
    }
    g.validate();
    return g;
  }

  void validate() const {
    if (dim != 2 && dim != 3) throw ParameterError("grid dim must be 2 or 3");
    if (dealias_fraction <= 0.0 || dealias_fraction > 1.0)
      throw ParameterError("dealias_fraction must lie in (0,1]");
    for (int a = 0; a < dim; ++a) {
      if (n[a] <= 0 || n[a] % 2 != 0) throw ParameterError("points per axis must be even and positive");
      if (extent[a] <= 0.0) throw ParameterError("extent per axis must be positive");
    }
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n[a]);
    return s;
  }

  double volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= extent[a];
    return v;
  }

  double cell_volume() const { return volume() / static_cast<double>(size()); }

  double spacing(int axis) const { return extent[axis] / n[axis]; }

  double min_spacing() const {
    double h = spacing(0);
    for (int a = 1; a < dim; ++a) h = std::min(h, spacing(a));
    return h;
  }

  // Signed integer frequency j for FFT-ordered index i on an axis.
  int freq_index(int axis, int i) const { return i < n[axis] / 2 ? i : i - n[axis]; }

  double wavenumber(int axis, int i) const {
    return 2.0 * kPi * freq_index(axis, i) / extent[axis];
  }

  // Row-major flat index decomposition: axis 0 slowest.
  std::array<int, 3> unflatten(std::size_t idx) const {
    std::array<int, 3> c{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      c[a] = static_cast<int>(idx % n[a]);
      idx /= n[a];
    }
    return c;
  }

  // Physical coordinate along an axis for grid index i.
  double coord(int axis, int i) const { return extent[axis] * i / n[axis]; }

  bool operator==(const SpectralGrid& o) const {
    if (dim != o.dim || dealias_fraction != o.dealias_fraction) return false;
    for (int a = 0; a < dim; ++a)
      if (n[a] != o.n[a] || extent[a] != o.extent[a]) return false;
    return true;
  }
  bool operator!=(const SpectralGrid& o) const { return !(*this == o); }
};

}  // namespace qnl
