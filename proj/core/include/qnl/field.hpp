// Scalar and vector fields on a periodic grid, physical or Fourier.
#pragma once

#include <complex>
#include <vector>
#include <functional>
#include <utility>

#include "qnl/grid.hpp"
#include "qnl/errors.hpp"

namespace qnl {

using cplx = std::complex<double>;

enum class Rep { Physical, Fourier };

// Complex-valued samples; real fields simply carry (numerically) zero
// imaginary parts in physical space and conjugate symmetry in Fourier space.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(SpectralGrid grid, Rep rep = Rep::Physical)
      : grid_(std::move(grid)), rep_(rep), v_(grid_.size(), cplx(0.0, 0.0)) {}

  const SpectralGrid& grid() const { return grid_; }
  Rep rep() const { return rep_; }
  void set_rep(Rep r) { rep_ = r; }

  std::size_t size() const { return v_.size(); }
  cplx* data() { return v_.data(); }
  const cplx* data() const { return v_.data(); }
  cplx& operator[](std::size_t i) { return v_[i]; }
  const cplx& operator[](std::size_t i) const { return v_[i]; }
  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  ScalarField& operator+=(const ScalarField& o) { binary_check(o); for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i]; return *this; }
  ScalarField& operator-=(const ScalarField& o) { binary_check(o); for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i]; return *this; }
  ScalarField& operator*=(cplx c) { for (auto& x : v_) x *= c; return *this; }
  ScalarField& operator*=(double c) { for (auto& x : v_) x *= c; return *this; }

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { a += b; return a; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { a -= b; return a; }
  friend ScalarField operator*(ScalarField a, double c) { a *= c; return a; }
  friend ScalarField operator*(double c, ScalarField a) { a *= c; return a; }
  friend ScalarField operator*(ScalarField a, cplx c) { a *= c; return a; }

  // Fill from a callback over physical coordinates. Field must be physical.
  template <class F>
  void fill(F&& f) {
    if (rep_ != Rep::Physical) throw StructuralError("fill requires physical representation");
    const auto& g = grid_;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      auto c = g.unflatten(i);
      double x[3] = {g.coord(0, c[0]), g.dim > 1 ? g.coord(1, c[1]) : 0.0,
                     g.dim > 2 ? g.coord(2, c[2]) : 0.0};
      v_[i] = f(x);
    }
  }

  void binary_check(const ScalarField& o) const {
    if (grid_ != o.grid_) throw StructuralError("field grids differ");
    if (rep_ != o.rep_) throw StructuralError("field representations differ");
  }

 private:
  SpectralGrid grid_;
  Rep rep_ = Rep::Physical;
  std::vector<cplx> v_;
};

// d components on a common grid. Complex vector fields (correctors,
// modulated fields) are the same type with genuinely complex samples.
class VectorField {
 public:
  VectorField() = default;
  VectorField(const SpectralGrid& grid, Rep rep = Rep::Physical) {
    comps_.reserve(grid.dim);
    for (int a = 0; a < grid.dim; ++a) comps_.emplace_back(grid, rep);
  }

  int dim() const { return static_cast<int>(comps_.size()); }
  const SpectralGrid& grid() const { return comps_.at(0).grid(); }
  Rep rep() const { return comps_.at(0).rep(); }

  ScalarField& comp(int a) { return comps_.at(a); }
  const ScalarField& comp(int a) const { return comps_.at(a); }
  ScalarField& operator[](int a) { return comps_.at(a); }
  const ScalarField& operator[](int a) const { return comps_.at(a); }

  VectorField& operator+=(const VectorField& o) { dim_check(o); for (int a = 0; a < dim(); ++a) comps_[a] += o.comps_[a]; return *this; }
  VectorField& operator-=(const VectorField& o) { dim_check(o); for (int a = 0; a < dim(); ++a) comps_[a] -= o.comps_[a]; return *this; }
  VectorField& operator*=(double c) { for (auto& f : comps_) f *= c; return *this; }
  VectorField& operator*=(cplx c) { for (auto& f : comps_) f *= c; return *this; }

  friend VectorField operator+(VectorField a, const VectorField& b) { a += b; return a; }
  friend VectorField operator-(VectorField a, const VectorField& b) { a -= b; return a; }
  friend VectorField operator*(VectorField a, double c) { a *= c; return a; }
  friend VectorField operator*(double c, VectorField a) { a *= c; return a; }
  friend VectorField operator*(VectorField a, cplx c) { a *= c; return a; }

  void dim_check(const VectorField& o) const {
    if (dim() != o.dim()) throw StructuralError("vector field dimensions differ");
  }

 private:
  std::vector<ScalarField> comps_;
};

// Uniformly stamped sample series of fields or scalars.
template <class T>
struct Series {
  std::vector<double> t;
  std::vector<T> v;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }

  void push(double time, T value) {
    t.push_back(time);
    v.push_back(std::move(value));
  }

  // Sample spacing; throws on nonuniform stamps.
  double uniform_dt(double tol = 1e-9) const {
    if (t.size() < 2) throw StructuralError("series too short for a sample spacing");
    double dt = t[1] - t[0];
    for (std::size_t i = 2; i < t.size(); ++i)
      if (std::abs((t[i] - t[i - 1]) - dt) > tol * std::max(1.0, std::abs(dt)))
        throw StructuralError("series sample spacing is not uniform");
    return dt;
  }
};

// Walk all modes of a Fourier-ordered flat array, yielding the flat index
// and the wavevector. d-generic over dim 2 and 3.
template <class Fn>
void for_each_mode(const SpectralGrid& g, Fn&& fn) {
  double k[3] = {0, 0, 0};
  if (g.dim == 2) {
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.n[0]; ++i0) {
      k[0] = g.wavenumber(0, i0);
      for (int i1 = 0; i1 < g.n[1]; ++i1, ++idx) {
        k[1] = g.wavenumber(1, i1);
        fn(idx, k);
      }
    }
  } else {
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.n[0]; ++i0) {
      k[0] = g.wavenumber(0, i0);
      for (int i1 = 0; i1 < g.n[1]; ++i1) {
        k[1] = g.wavenumber(1, i1);
        for (int i2 = 0; i2 < g.n[2]; ++i2, ++idx) {
          k[2] = g.wavenumber(2, i2);
          fn(idx, k);
        }
      }
    }
  }
}

}  // namespace qnl
