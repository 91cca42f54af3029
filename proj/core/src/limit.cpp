#include "qnl/limit.hpp"

#include <algorithm>
#include <cmath>

#include "qnl/fft.hpp"
#include "qnl/operators.hpp"

namespace qnl {
namespace {

VectorField heat_semigroup(const VectorField& u, double dt, double kappa = 1.0) {
  const Rep orig = u.rep();
  VectorField r = in_rep(u, Rep::Fourier);
  const auto& g = r.grid();
  for_each_mode(g, [&](std::size_t idx, const double* k) {
    double k2 = 0.0;
    for (int a = 0; a < g.dim; ++a) k2 += k[a] * k[a];
    const double f = std::exp(-kappa * k2 * dt);
    for (int a = 0; a < g.dim; ++a) r[a].data()[idx] *= f;
  });
  return in_rep(r, orig);
}

// P(-(v.grad)v), dealiased products.
VectorField ns_nonlinear(const VectorField& v) {
  const auto& g = v.grid();
  VectorField out(g, Rep::Physical);
  for (int a = 0; a < g.dim; ++a) {
    VectorField ga = grad(v[a]);
    ScalarField adv(g, Rep::Physical);
    for (int b = 0; b < g.dim; ++b) adv += multiply_dealiased(v[b], in_rep(ga[b], Rep::Physical));
    out[a] -= adv;
  }
  return leray_P(out);
}

// -Q div(v (x) E), dealiased; (div(v (x) E))_j = sum_i d_i (v_i E_j).
VectorField corrector_nonlinear(const VectorField& v, const VectorField& E) {
  const auto& g = v.grid();
  VectorField pv = in_rep(v, Rep::Physical);
  VectorField pE = in_rep(E, Rep::Physical);
  VectorField out(g, Rep::Physical);
  for (int j = 0; j < g.dim; ++j) {
    VectorField flux(g, Rep::Physical);
    for (int i = 0; i < g.dim; ++i) flux[i] = multiply_dealiased(pv[i], pE[j]);
    out[j] = in_rep(div(flux), Rep::Physical);
  }
  out *= -1.0;
  return leray_Q(out);
}

void check_cfl(const VectorField& v, double dt, double c_cfl) {
  double vmax = linf_norm(v);
  const double h = v.grid().min_spacing();
  const double cap = c_cfl * h / std::max(vmax, 1e-14);
  if (dt > cap * (1.0 + 1e-12)) throw StabilityError("dt exceeds advective CFL", cap);
}

}  // namespace

double ns_dt_max(const VectorField& v, double c_cfl) {
  if (c_cfl <= 0.0) throw ParameterError("c_cfl must be positive");
  return c_cfl * v.grid().min_spacing() / std::max(linf_norm(v), 1e-14);
}

VectorField ns_step(const VectorField& v, double dt, double c_cfl) {
  if (dt <= 0.0) throw ParameterError("dt must be positive");
  const double dn = l2_norm(div(v));
  if (dn > 1e-10 * std::max(1.0, l2_norm(v)))
    throw StructuralError("ns_step input is not divergence-free");
  check_cfl(v, dt, c_cfl);

  VectorField k1 = ns_nonlinear(v);
  VectorField mid = heat_semigroup(v + k1 * dt, dt);
  VectorField k2 = ns_nonlinear(mid);
  VectorField out = heat_semigroup(v + k1 * (0.5 * dt), dt) + k2 * (0.5 * dt);
  return leray_P(out);
}

VectorField corrector_step(const VectorField& E, const VectorField& v0, const VectorField& v1,
                           double dt, double c_cfl, double kappa) {
  if (dt <= 0.0) throw ParameterError("dt must be positive");
  if (kappa <= 0.0) throw ParameterError("kappa must be positive");
  const double en = l2_norm(E);
  if (en > 0.0) {
    const double pn = l2_norm(leray_P(E));
    if (pn > 1e-8 * en) throw StructuralError("corrector_step input is not a gradient field");
  }
  check_cfl(v0, dt, c_cfl);

  VectorField k1 = corrector_nonlinear(v0, E);
  VectorField mid = heat_semigroup(E + k1 * dt, dt, kappa);
  VectorField k2 = corrector_nonlinear(v1, mid);
  VectorField out = heat_semigroup(E + k1 * (0.5 * dt), dt, kappa) + k2 * (0.5 * dt);
  // both stages land in the range of Q already; keep the invariant exact
  return leray_Q(out);
}

Series<LimitState> coupled_limit_run(const VectorField& v0, const VectorField& Eplus0, double T,
                                     double dt, int store_every) {
  if (T <= 0.0 || dt <= 0.0) throw ParameterError("T and dt must be positive");
  if (store_every < 1) throw ParameterError("store_every must be >= 1");
  const long steps = std::max<long>(1, std::lround(std::ceil(T / dt - 1e-9)));
  dt = T / static_cast<double>(steps);

  Series<LimitState> out;
  VectorField v = leray_P(v0);
  VectorField E = Eplus0;
  auto store = [&](long n) {
    LimitState s;
    s.v = v;
    s.Eplus = E;
    s.Eminus = conjugate(E);
    s.t = n * dt;
    out.push(s.t, std::move(s));
  };
  store(0);
  for (long n = 1; n <= steps; ++n) {
    VectorField vn = ns_step(v, dt);
    E = corrector_step(E, v, vn, dt);
    v = std::move(vn);
    if (n % store_every == 0 || n == steps) store(n);
  }
  return out;
}

VectorField corrector_forcing(const VectorField& Eplus, const VectorField& Eminus,
                              double* imag_residual) {
  if (!(Eplus.grid() == Eminus.grid())) throw StructuralError("corrector grids differ");
  const auto& g = Eplus.grid();
  VectorField pp = in_rep(Eplus, Rep::Physical);
  VectorField pm = in_rep(Eminus, Rep::Physical);
  VectorField out(g, Rep::Physical);
  for (int l = 0; l < g.dim; ++l) {
    VectorField col(g, Rep::Physical);
    for (int j = 0; j < g.dim; ++j) {
      ScalarField e = multiply_dealiased(pp[j], pp[l]);
      e += multiply_dealiased(pm[j], pm[l]);
      col[j] = std::move(e);
    }
    out[l] = in_rep(div(col), Rep::Physical);
  }
  out = leray_P(out);
  if (imag_residual) *imag_residual = l2_norm(imag_part(out));
  return real_part(out);
}

}  // namespace qnl
