#include "qnl/nsp.hpp"

#include <algorithm>
#include <cmath>

#include "qnl/fft.hpp"

namespace qnl {
namespace {

// Pointwise function of a physical field, dealiased afterwards.
template <class F>
ScalarField pointwise(const ScalarField& a, F&& f) {
  ScalarField r = in_rep(a, Rep::Physical);
  for (auto& z : r) z = f(z.real());
  dealias(r);
  return r;
}

void check_positive(const ScalarField& rho) {
  for (std::size_t i = 0; i < rho.size(); ++i)
    if (!(rho[i].real() > 0.0)) throw DomainError("density not positive", i);
}

void check_finite(const VectorField& u, double t) {
  for (int c = 0; c < u.dim(); ++c)
    for (const auto& z : u[c])
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DivergenceError("solution lost finiteness at t=" + std::to_string(t));
}

// Exact heat semigroup of mu Lap + (nu+mu) grad div, applied in Fourier
// space by splitting each mode into parts along and across k.
VectorField viscous_semigroup(const VectorField& u, double dt, double mu, double nu) {
  const Rep orig = u.rep();
  VectorField r = in_rep(u, Rep::Fourier);
  const auto& g = r.grid();
  const int d = g.dim;
  const double fl_rate = 2.0 * mu + nu;  // longitudinal: (2mu+nu)|k|^2
  for_each_mode(g, [&](std::size_t idx, const double* k) {
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) k2 += k[a] * k[a];
    if (k2 == 0.0) return;
    cplx along = 0.0;
    for (int a = 0; a < d; ++a) along += k[a] * r[a].data()[idx];
    along /= k2;
    const double ft = std::exp(-mu * k2 * dt);
    const double fl = std::exp(-fl_rate * k2 * dt);
    for (int a = 0; a < d; ++a) {
      const cplx par = k[a] * along;
      r[a].data()[idx] = ft * (r[a].data()[idx] - par) + fl * par;
    }
  });
  return in_rep(r, orig);
}

// Right-hand side with the linear viscous part removed; what remains is
// treated explicitly under the integrating factor.
StateRhs explicit_rhs(const ScalarField& rho, const VectorField& u, const ScalarField& V,
                      const FluidParams& p) {
  const auto& g = rho.grid();
  const int d = g.dim;
  check_positive(rho);

  StateRhs out{ScalarField(g, Rep::Physical), VectorField(g, Rep::Physical)};

  // drho = -div(rho u)
  VectorField flux(g, Rep::Physical);
  for (int a = 0; a < d; ++a) flux[a] = multiply_dealiased(rho, u[a]);
  out.drho = div(flux);
  out.drho *= -1.0;
  out.drho = in_rep(out.drho, Rep::Physical);

  // advection -(u . grad) u
  for (int a = 0; a < d; ++a) {
    VectorField ga = grad(u[a]);
    ScalarField adv(g, Rep::Physical);
    for (int b = 0; b < d; ++b) adv += multiply_dealiased(u[b], in_rep(ga[b], Rep::Physical));
    out.du[a] -= adv;
  }

  // pressure -(1/rho) grad rho^gamma
  ScalarField inv_rho = pointwise(rho, [](double x) { return 1.0 / x; });
  VectorField gp = grad(pointwise(rho, [&](double x) { return std::pow(x, p.gamma); }));
  for (int a = 0; a < d; ++a) out.du[a] -= multiply_dealiased(inv_rho, in_rep(gp[a], Rep::Physical));

  // viscous correction (1/rho - 1) (mu Lap u + (nu+mu) grad div u); the
  // rho=1 part lives in the semigroup.
  ScalarField dev = in_rep(inv_rho, Rep::Physical);
  for (auto& z : dev) z -= 1.0;
  VectorField visc = laplacian(u);
  VectorField gd = grad_div(u);
  for (int a = 0; a < d; ++a) {
    ScalarField w = in_rep(visc[a], Rep::Physical);
    w *= p.mu;
    ScalarField w2 = in_rep(gd[a], Rep::Physical);
    w2 *= p.nu + p.mu;
    w += w2;
    out.du[a] += multiply_dealiased(dev, w);
  }

  // electrostatic force grad V (acceleration form: rho grad V / rho)
  VectorField gV = grad(V);
  for (int a = 0; a < d; ++a) out.du[a] += in_rep(gV[a], Rep::Physical);

  return out;
}

}  // namespace

ScalarField pressure_pi(const ScalarField& rho, double gamma) {
  if (gamma <= 1.0) throw ParameterError("gamma must exceed 1");
  ScalarField r = in_rep(rho, Rep::Physical);
  check_positive(r);
  for (auto& z : r) {
    const double x = z.real();
    z = (std::pow(x, gamma) - 1.0 - gamma * (x - 1.0)) / (gamma - 1.0);
  }
  return r;
}

ScalarField poisson_solve(const ScalarField& rho, double lambda) {
  if (lambda <= 0.0) throw ParameterError("lambda must be positive");
  ScalarField src = in_rep(rho, Rep::Physical);
  for (auto& z : src) z -= 1.0;
  const cplx m = mean(src);
  if (std::abs(m) > 1e-10)
    throw CompatibilityError("charge source has nonzero mean", std::abs(m));
  for (auto& z : src) z -= m;  // exact mean-zero gauge before inversion
  src = inv_laplacian(src);
  src *= 1.0 / (lambda * lambda);
  return in_rep(src, Rep::Physical);
}

PlasmaState make_state(ScalarField rho, VectorField u, FluidParams params, double t) {
  params.validate();
  if (!(rho.grid() == u.grid())) throw StructuralError("rho and u live on different grids");
  if (u.dim() != u.grid().dim) throw StructuralError("velocity component count mismatch");
  PlasmaState s;
  s.rho = in_rep(rho, Rep::Physical);
  check_positive(s.rho);
  s.u = in_rep(u, Rep::Physical);
  s.V = poisson_solve(s.rho, params.lambda);
  s.t = t;
  s.params = params;
  return s;
}

StateRhs rhs(const PlasmaState& state) {
  // explicit_rhs carries the (1/rho - 1) share of the viscous terms; the
  // rho = 1 share (what the semigroup integrates) is added back here.
  StateRhs r = explicit_rhs(state.rho, state.u, state.V, state.params);
  VectorField visc = laplacian(state.u);
  VectorField gd = grad_div(state.u);
  for (int a = 0; a < state.u.dim(); ++a) {
    ScalarField w = in_rep(visc[a], Rep::Physical);
    w *= state.params.mu;
    ScalarField w2 = in_rep(gd[a], Rep::Physical);
    w2 *= state.params.nu + state.params.mu;
    w += w2;
    r.du[a] += w;
  }
  return r;
}

double dt_max(const PlasmaState& state, double c_cfl) {
  if (c_cfl <= 0.0) throw ParameterError("c_cfl must be positive");
  const FluidParams& p = state.params;
  double rho_max = 0.0, u_max = 0.0;
  for (const auto& z : in_rep(state.rho, Rep::Physical))
    rho_max = std::max(rho_max, z.real());
  for (int a = 0; a < state.u.dim(); ++a)
    u_max = std::max(u_max, linf_norm(state.u[a]));
  const double cs = std::sqrt(p.gamma * std::pow(rho_max, p.gamma - 1.0));
  const double h = state.rho.grid().min_spacing();
  return c_cfl * std::min(p.lambda, h / (cs + u_max));
}

PlasmaState step(const PlasmaState& state, double dt, double c_cfl) {
  if (dt <= 0.0) throw ParameterError("dt must be positive");
  const double cap = dt_max(state, c_cfl);
  if (dt > cap * (1.0 + 1e-12)) throw StabilityError("dt exceeds stability limit", cap);
  const FluidParams& p = state.params;

  StateRhs k1 = explicit_rhs(state.rho, state.u, state.V, p);

  ScalarField rho1 = state.rho;
  {
    ScalarField d1 = k1.drho;
    d1 *= dt;
    rho1 += d1;
  }
  VectorField u1 = state.u;
  {
    VectorField d1 = k1.du;
    d1 *= dt;
    u1 += d1;
    u1 = viscous_semigroup(u1, dt, p.mu, p.nu);
  }
  ScalarField V1 = poisson_solve(rho1, p.lambda);

  StateRhs k2 = explicit_rhs(rho1, u1, V1, p);

  PlasmaState out;
  out.params = p;
  out.t = state.t + dt;

  out.rho = state.rho;
  {
    ScalarField d = k1.drho;
    d += k2.drho;
    d *= 0.5 * dt;
    out.rho += d;
  }

  {
    VectorField half = k1.du;
    half *= 0.5 * dt;
    VectorField base = state.u;
    base += half;
    out.u = viscous_semigroup(base, dt, p.mu, p.nu);
    VectorField tail = k2.du;
    tail *= 0.5 * dt;
    out.u += tail;
  }

  check_finite(out.u, out.t);
  out.V = poisson_solve(out.rho, p.lambda);
  return out;
}

double dissipation_rate(const PlasmaState& state) {
  const FluidParams& p = state.params;
  double s = 0.0;
  for (int a = 0; a < state.u.dim(); ++a) {
    VectorField g = grad(state.u[a]);
    for (int b = 0; b < g.dim(); ++b) {
      const double n = l2_norm(g[b]);
      s += p.mu * n * n;
    }
  }
  const double dn = l2_norm(div(state.u));
  s += (p.nu + p.mu) * dn * dn;
  return s;
}

EnergyReport energy(const PlasmaState& state, double dissipation_accum) {
  EnergyReport r;
  ScalarField ke(state.rho.grid(), Rep::Physical);
  for (int a = 0; a < state.u.dim(); ++a) {
    ScalarField ua = in_rep(state.u[a], Rep::Physical);
    ScalarField sq = ua;
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = ua[i] * ua[i];
    ke += sq;
  }
  ScalarField rho = in_rep(state.rho, Rep::Physical);
  for (std::size_t i = 0; i < ke.size(); ++i) ke[i] = 0.5 * rho[i].real() * ke[i].real();
  r.kinetic = integral(ke).real();
  r.internal = integral(pressure_pi(state.rho, state.params.gamma)).real();
  VectorField gV = grad(state.V);
  double e = 0.0;
  for (int a = 0; a < gV.dim(); ++a) {
    const double n = l2_norm(gV[a]);
    e += n * n;
  }
  // the work term int rho u . grad V balances (lambda^2/2) d/dt int |grad V|^2,
  // so the exact discrete identity needs the half
  r.electric = 0.5 * state.params.lambda * state.params.lambda * e;
  r.dissipation_accum = dissipation_accum;
  r.total_plus_dissipation = r.kinetic + r.internal + r.electric + dissipation_accum;
  return r;
}

VectorField electric_field(const PlasmaState& state) { return grad(state.V); }

Trajectory run(const PlasmaState& initial, const RunOptions& opts) {
  if (opts.T <= 0.0) throw ParameterError("T must be positive");
  double dt = opts.dt > 0.0 ? opts.dt : dt_max(initial, opts.c_cfl);
  const long steps = std::max<long>(1, std::lround(std::ceil(opts.T / dt - 1e-9)));
  dt = opts.T / static_cast<double>(steps);

  Trajectory traj;
  traj.dt = dt;
  traj.steps = steps;
  traj.diagnostics.names = {"kinetic", "internal", "electric", "dissipation", "total",
                            "qu_l2",   "pu_l2",    "sigma_l2", "sigma_max"};

  PlasmaState s = initial;
  double diss = 0.0;
  double prev_rate = dissipation_rate(s);

  auto record = [&](long n) {
    if (opts.diagnostics_every > 0 && n % opts.diagnostics_every == 0) {
      EnergyReport e = energy(s, diss);
      VectorField q = leray_Q(s.u);
      VectorField pp = s.u;
      pp -= q;
      double ql = 0.0, pl = 0.0;
      for (int a = 0; a < q.dim(); ++a) {
        const double nq = l2_norm(q[a]), np = l2_norm(pp[a]);
        ql += nq * nq;
        pl += np * np;
      }
      ScalarField sig = in_rep(s.rho, Rep::Physical);
      for (auto& z : sig) z -= 1.0;
      traj.diagnostics.step.push_back(n);
      traj.diagnostics.t.push_back(s.t);
      traj.diagnostics.rows.push_back({e.kinetic, e.internal, e.electric, diss,
                                       e.total_plus_dissipation, std::sqrt(ql), std::sqrt(pl),
                                       l2_norm(sig), linf_norm(sig)});
    }
    // only exact multiples: keeps snapshot stamps uniform
    if (opts.snapshot_every > 0 && n % opts.snapshot_every == 0) {
      traj.snapshots.push(s.t, s);
      traj.snapshot_dissipation.push_back(diss);
    }
  };

  record(0);
  for (long n = 1; n <= steps; ++n) {
    s = step(s, dt, opts.c_cfl * 1.000001);
    const double rate = dissipation_rate(s);
    diss += 0.5 * dt * (prev_rate + rate);
    prev_rate = rate;
    record(n);
  }
  return traj;
}

}  // namespace qnl
