// The lambda=0 side: incompressible Navier-Stokes for the limit velocity
// v, the pseudo-parabolic corrector equation with its PE=0 invariance,
// and the corrector forcing diagnostic of the augmented limit system.
#pragma once

#include "qnl/field.hpp"

namespace qnl {

struct LimitState {
  VectorField v;       // divergence-free
  VectorField Eplus;   // complex gradient field
  VectorField Eminus;  // conj(Eplus) when seeded from real data
  double t = 0.0;
};

// One step of d_t v = P(-(v.grad)v) + Lap v (unit viscosity), heat part
// exact in Fourier space, Heun otherwise. Throws StabilityError past the
// advective CFL limit, StructuralError on input with div v != 0.
VectorField ns_step(const VectorField& v, double dt, double c_cfl = 0.5);

// Advective limit c_cfl * h / |v|_inf.
double ns_dt_max(const VectorField& v, double c_cfl = 0.5);

// One step of d_t E - kappa Lap E + Q div(v (x) E) = 0 with v sampled at
// the two stage times (pass v1 = v0 for a frozen field). Q is applied at
// every stage so PE = 0 is maintained. kappa = 1 is the limit equation as
// written; matching a finite-lambda run with shear/bulk viscosities mu, nu
// calls for the acoustic damping coefficient kappa = mu + nu/2.
VectorField corrector_step(const VectorField& E, const VectorField& v0, const VectorField& v1,
                           double dt, double c_cfl = 0.5, double kappa = 1.0);

// Run both systems over [0, T]; one-way coupling v -> E. Eminus is
// evolved as the conjugate of Eplus.
Series<LimitState> coupled_limit_run(const VectorField& v0, const VectorField& Eplus0, double T,
                                     double dt, int store_every = 1);

// P div(Eplus (x) Eplus + Eminus (x) Eminus), dealiased; real part
// returned, the imaginary residual norm stored if requested.
VectorField corrector_forcing(const VectorField& Eplus, const VectorField& Eminus,
                              double* imag_residual = nullptr);

}  // namespace qnl
