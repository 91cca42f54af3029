#include "qnl/operators.hpp"

#include <algorithm>
#include <cmath>

namespace qnl {
namespace {

double sq(double x) { return x * x; }

double knorm2(const double* k, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += sq(k[a]);
  return s;
}

// Nyquist modes carry no usable sign information for odd derivatives; their
// symbol is zeroed there.
bool has_nyquist(const SpectralGrid& g, std::size_t idx) {
  auto c = g.unflatten(idx);
  for (int a = 0; a < g.dim; ++a)
    if (c[a] == g.n[a] / 2) return true;
  return false;
}

template <class Sym>
ScalarField apply_symbol(const ScalarField& f, Sym&& sym) {
  Rep orig = f.rep();
  ScalarField out = in_rep(f, Rep::Fourier);
  const auto& g = out.grid();
  for_each_mode(g, [&](std::size_t idx, const double* k) { out[idx] *= sym(idx, k); });
  if (orig == Rep::Physical) transform(out);
  return out;
}

}  // namespace

ScalarField laplacian(const ScalarField& f) {
  const int dim = f.grid().dim;
  return apply_symbol(f, [dim](std::size_t, const double* k) { return -knorm2(k, dim); });
}

VectorField laplacian(const VectorField& f) {
  VectorField out = f;
  for (int a = 0; a < f.dim(); ++a) out.comp(a) = laplacian(f.comp(a));
  return out;
}

ScalarField inv_laplacian(const ScalarField& f) {
  ScalarField hat = in_rep(f, Rep::Fourier);
  const auto& g = hat.grid();
  const double nd = static_cast<double>(g.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) scale = std::max(scale, std::abs(hat[i]));
  const double mean_coef = std::abs(hat[0]) / nd;
  if (mean_coef > 1e-12 * std::max(1.0, scale / nd))
    throw CompatibilityError("inv_laplacian input has nonzero mean", mean_coef);
  const int dim = g.dim;
  for_each_mode(g, [&](std::size_t idx, const double* k) {
    double k2 = knorm2(k, dim);
    hat[idx] = (k2 == 0.0) ? cplx(0.0, 0.0) : hat[idx] / (-k2);
  });
  if (f.rep() == Rep::Physical) transform(hat);
  return hat;
}

VectorField inv_laplacian(const VectorField& f) {
  VectorField out = f;
  for (int a = 0; a < f.dim(); ++a) out.comp(a) = inv_laplacian(f.comp(a));
  return out;
}

ScalarField partial(const ScalarField& f, int axis) {
  const auto& g = f.grid();
  if (axis < 0 || axis >= g.dim) throw ParameterError("partial: axis out of range");
  return apply_symbol(f, [&g, axis](std::size_t idx, const double* k) {
    return has_nyquist(g, idx) ? cplx(0.0, 0.0) : cplx(0.0, k[axis]);
  });
}

VectorField grad(const ScalarField& f) {
  ScalarField hat = in_rep(f, Rep::Fourier);
  const auto& g = hat.grid();
  VectorField out(g, Rep::Fourier);
  for_each_mode(g, [&](std::size_t idx, const double* k) {
    cplx base = has_nyquist(g, idx) ? cplx(0.0, 0.0) : hat[idx];
    for (int a = 0; a < g.dim; ++a) out.comp(a)[idx] = cplx(0.0, k[a]) * base;
  });
  if (f.rep() == Rep::Physical) transform(out);
  return out;
}

ScalarField div(const VectorField& v) {
  VectorField hat = in_rep(v, Rep::Fourier);
  const auto& g = hat.grid();
  ScalarField out(g, Rep::Fourier);
  for_each_mode(g, [&](std::size_t idx, const double* k) {
    if (has_nyquist(g, idx)) return;
    cplx s(0.0, 0.0);
    for (int a = 0; a < g.dim; ++a) s += cplx(0.0, k[a]) * hat.comp(a)[idx];
    out[idx] = s;
  });
  if (v.rep() == Rep::Physical) transform(out);
  return out;
}

VectorField grad_div(const VectorField& v) {
  VectorField hat = in_rep(v, Rep::Fourier);
  const auto& g = hat.grid();
  VectorField out(g, Rep::Fourier);
  for_each_mode(g, [&](std::size_t idx, const double* k) {
    if (has_nyquist(g, idx)) return;
    cplx s(0.0, 0.0);
    for (int a = 0; a < g.dim; ++a) s += cplx(0.0, k[a]) * hat.comp(a)[idx];
    for (int a = 0; a < g.dim; ++a) out.comp(a)[idx] = cplx(0.0, k[a]) * s;
  });
  if (v.rep() == Rep::Physical) transform(out);
  return out;
}

VectorField leray_Q(const VectorField& v) {
  VectorField hat = in_rep(v, Rep::Fourier);
  const auto& g = hat.grid();
  VectorField out(g, Rep::Fourier);
  // Nyquist rows carry the unpaired -N/2 frequency, where the even symbol
  // k (x) k / |k|^2 loses its conjugate symmetry; treat them like the
  // derivative symbols and leave them to the solenoidal part.
  double kny[3] = {0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim; ++a) kny[a] = g.wavenumber(a, g.n[a] / 2);
  for_each_mode(g, [&](std::size_t idx, const double* k) {
    double k2 = knorm2(k, g.dim);
    if (k2 == 0.0) return;  // mean flow is divergence-free
    for (int a = 0; a < g.dim; ++a)
      if (k[a] == kny[a]) return;
    cplx kdotv(0.0, 0.0);
    for (int a = 0; a < g.dim; ++a) kdotv += k[a] * hat.comp(a)[idx];
    for (int a = 0; a < g.dim; ++a) out.comp(a)[idx] = k[a] * kdotv / k2;
  });
  if (v.rep() == Rep::Physical) transform(out);
  return out;
}

VectorField leray_P(const VectorField& v) { return v - leray_Q(v); }

cplx mean(const ScalarField& f) {
  if (f.rep() == Rep::Fourier) return f[0] / static_cast<double>(f.grid().size());
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i];
  return s / static_cast<double>(f.size());
}

cplx integral(const ScalarField& f) { return mean(f) * f.grid().volume(); }

double l2_norm(const ScalarField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]);
  const double nd = static_cast<double>(f.grid().size());
  // Parseval: sum over Fourier modes carries 1/N^d relative to samples.
  if (f.rep() == Rep::Fourier) s /= nd;
  return std::sqrt(s * f.grid().volume() / nd);
}

double l2_norm(const VectorField& v) {
  double s = 0.0;
  for (int a = 0; a < v.dim(); ++a) s += sq(l2_norm(v.comp(a)));
  return std::sqrt(s);
}

double linf_norm(const ScalarField& f) {
  ScalarField p = in_rep(f, Rep::Physical);
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, std::abs(p[i]));
  return m;
}

double linf_norm(const VectorField& v) {
  VectorField p = in_rep(v, Rep::Physical);
  double m = 0.0;
  for (std::size_t i = 0; i < p.comp(0).size(); ++i) {
    double s = 0.0;
    for (int a = 0; a < v.dim(); ++a) s += std::norm(p.comp(a)[i]);
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

cplx inner(const ScalarField& f, const ScalarField& g) {
  f.binary_check(g);
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
  const double nd = static_cast<double>(f.grid().size());
  if (f.rep() == Rep::Fourier) s /= nd;
  return s * (f.grid().volume() / nd);
}

cplx inner(const VectorField& f, const VectorField& g) {
  cplx s(0.0, 0.0);
  for (int a = 0; a < f.dim(); ++a) s += inner(f.comp(a), g.comp(a));
  return s;
}

double sobolev_norm(const ScalarField& f, double s, int p) {
  if (p != 2 && p != 4) throw ParameterError("sobolev_norm supports p=2 or p=4");
  ScalarField hat = in_rep(f, Rep::Fourier);
  const auto& g = hat.grid();
  const int dim = g.dim;
  if (p == 2) {
    double acc = 0.0;
    for_each_mode(g, [&](std::size_t idx, const double* k) {
      acc += std::pow(1.0 + knorm2(k, dim), s) * std::norm(hat[idx]);
    });
    const double nd = static_cast<double>(g.size());
    return std::sqrt(acc / nd * g.volume() / nd);
  }
  for_each_mode(g, [&](std::size_t idx, const double* k) {
    hat[idx] *= std::pow(1.0 + knorm2(k, dim), s / 2.0);
  });
  transform(hat);
  double acc = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) acc += sq(std::norm(hat[i]));
  return std::pow(acc * g.cell_volume(), 0.25);
}

double sobolev_norm(const VectorField& f, double s, int p) {
  if (p == 2) {
    double acc = 0.0;
    for (int a = 0; a < f.dim(); ++a) acc += sq(sobolev_norm(f.comp(a), s, 2));
    return std::sqrt(acc);
  }
  // L4 of the filtered vector magnitude.
  VectorField hat = in_rep(f, Rep::Fourier);
  const auto& g = hat.grid();
  const int dim = g.dim;
  for (int a = 0; a < dim; ++a) {
    for_each_mode(g, [&](std::size_t idx, const double* k) {
      hat.comp(a)[idx] *= std::pow(1.0 + knorm2(k, dim), s / 2.0);
    });
  }
  transform(hat);
  double acc = 0.0;
  for (std::size_t i = 0; i < hat.comp(0).size(); ++i) {
    double m2 = 0.0;
    for (int a = 0; a < dim; ++a) m2 += std::norm(hat.comp(a)[i]);
    acc += sq(m2);
  }
  return std::pow(acc * g.cell_volume(), 0.25);
}

void dealias(ScalarField& f) {
  Rep orig = f.rep();
  if (orig == Rep::Physical) transform(f);
  const auto& g = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto c = g.unflatten(i);
    for (int a = 0; a < g.dim; ++a) {
      if (std::abs(g.freq_index(a, c[a])) > g.dealias_fraction * g.n[a] / 2.0) {
        f[i] = cplx(0.0, 0.0);
        break;
      }
    }
  }
  if (orig == Rep::Physical) transform(f);
}

void dealias(VectorField& f) {
  for (int a = 0; a < f.dim(); ++a) dealias(f.comp(a));
}

ScalarField mollify(const ScalarField& f, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("mollify: alpha must lie in (0,1)");
  const int dim = f.grid().dim;
  return apply_symbol(f, [alpha, dim](std::size_t, const double* k) {
    return std::exp(-0.5 * sq(alpha) * knorm2(k, dim));
  });
}

VectorField mollify(const VectorField& f, double alpha) {
  VectorField out = f;
  for (int a = 0; a < f.dim(); ++a) out.comp(a) = mollify(f.comp(a), alpha);
  return out;
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  ScalarField pa = in_rep(a, Rep::Physical);
  ScalarField pb = in_rep(b, Rep::Physical);
  for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= pb[i];
  return pa;
}

ScalarField multiply_dealiased(const ScalarField& a, const ScalarField& b) {
  ScalarField p = multiply(a, b);
  dealias(p);
  return p;
}

ScalarField conjugate(const ScalarField& f) {
  ScalarField p = in_rep(f, Rep::Physical);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::conj(p[i]);
  if (f.rep() == Rep::Fourier) transform(p);
  return p;
}

VectorField conjugate(const VectorField& f) {
  VectorField out = f;
  for (int a = 0; a < f.dim(); ++a) out.comp(a) = conjugate(f.comp(a));
  return out;
}

ScalarField real_part(const ScalarField& f) {
  ScalarField p = in_rep(f, Rep::Physical);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = cplx(p[i].real(), 0.0);
  if (f.rep() == Rep::Fourier) transform(p);
  return p;
}

VectorField real_part(const VectorField& f) {
  VectorField out = f;
  for (int a = 0; a < f.dim(); ++a) out.comp(a) = real_part(f.comp(a));
  return out;
}

ScalarField imag_part(const ScalarField& f) {
  ScalarField p = in_rep(f, Rep::Physical);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = cplx(p[i].imag(), 0.0);
  if (f.rep() == Rep::Fourier) transform(p);
  return p;
}

VectorField imag_part(const VectorField& f) {
  VectorField out = f;
  for (int a = 0; a < f.dim(); ++a) out.comp(a) = imag_part(f.comp(a));
  return out;
}

}  // namespace qnl
