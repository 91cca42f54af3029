// Compressible Navier-Stokes-Poisson time integration for fixed Debye
// length lambda, in velocity form, with the energy functional monitored.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnl/field.hpp"
#include "qnl/operators.hpp"

namespace qnl {

struct FluidParams {
  double gamma = 5.0 / 3.0;
  double mu = 1.0;
  double nu = 1.0;
  double lambda = 0.1;

  void validate() const {
    if (gamma <= 1.0) throw ParameterError("gamma must exceed 1");
    if (mu <= 0.0) throw ParameterError("mu must be positive");
    if (2.0 * mu + 3.0 * nu < 0.0) throw ParameterError("2*mu + 3*nu must be nonnegative");
    if (lambda <= 0.0) throw ParameterError("lambda must be positive");
  }
};

// Charge density, velocity and (derived) electrostatic potential at one
// time instant. V is always recomputed from rho, never prescribed.
struct PlasmaState {
  ScalarField rho;   // physical rep, positive, mean 1
  VectorField u;     // physical rep
  ScalarField V;     // mean zero, lambda^2 Lap V = rho - 1
  double t = 0.0;
  FluidParams params;
};

struct EnergyReport {
  double kinetic = 0.0;            // int rho |u|^2 / 2
  double internal = 0.0;           // int pi
  double electric = 0.0;           // int lambda^2 |grad V|^2
  double dissipation_accum = 0.0;  // int_0^t int mu|grad u|^2 + (nu+mu)(div u)^2
  double total_plus_dissipation = 0.0;
};

// pi = (rho^gamma - 1 - gamma (rho - 1)) / (gamma - 1), pointwise.
ScalarField pressure_pi(const ScalarField& rho, double gamma);

// Solve lambda^2 Lap V = rho - 1 on the torus, mean-zero gauge.
ScalarField poisson_solve(const ScalarField& rho, double lambda);

// Consistent state from (rho, u): derives V, validates invariants.
PlasmaState make_state(ScalarField rho, VectorField u, FluidParams params, double t = 0.0);

struct StateRhs {
  ScalarField drho;
  VectorField du;
};

// Full right-hand side in velocity form (viscous terms included).
StateRhs rhs(const PlasmaState& state);

// Advective/oscillation stability limit: c_cfl * min(lambda, h/(c_s+|u|_inf)).
double dt_max(const PlasmaState& state, double c_cfl = 0.5);

// One step of the integrating-factor Heun scheme (viscous part exact in
// Fourier space, everything else explicit).
PlasmaState step(const PlasmaState& state, double dt, double c_cfl = 0.5);

// Instantaneous dissipation rate int mu|grad u|^2 + (nu+mu)(div u)^2.
double dissipation_rate(const PlasmaState& state);

EnergyReport energy(const PlasmaState& state, double dissipation_accum = 0.0);

// Named per-step scalar diagnostics with uniform stamps.
struct DiagnosticsSeries {
  std::vector<std::string> names;
  std::vector<long> step;
  std::vector<double> t;
  std::vector<std::vector<double>> rows;  // one row per sample, aligned with names

  void check_monotone() const {
    for (std::size_t i = 1; i < t.size(); ++i)
      if (t[i] <= t[i - 1]) throw StructuralError("diagnostic stamps must strictly increase");
  }
};

struct RunOptions {
  double T = 1.0;
  double dt = 0.0;            // 0: use dt_max at t=0
  double c_cfl = 0.5;
  int snapshot_every = 12;    // in steps; 0 disables snapshots
  int diagnostics_every = 1;  // in steps
};

struct Trajectory {
  Series<PlasmaState> snapshots;
  std::vector<double> snapshot_dissipation;  // accumulated dissipation at each snapshot
  DiagnosticsSeries diagnostics;
  double dt = 0.0;
  long steps = 0;
};

// Fixed-dt run with per-step diagnostics and fixed-interval snapshots.
// Diagnostics columns: step,t,kinetic,internal,electric,dissipation,total,
// qu_l2,pu_l2,sigma_l2,sigma_max.
Trajectory run(const PlasmaState& initial, const RunOptions& opts);

// Electric field grad V of a state.
VectorField electric_field(const PlasmaState& state);

}  // namespace qnl
