// Experiment orchestration: configuration round-trip, the scenario
// library, lambda sweeps with per-member isolation, cross-lambda
// comparisons, and deterministic report emission.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnl/acoustic.hpp"
#include "qnl/corrector.hpp"
#include "qnl/defect.hpp"
#include "qnl/nsp.hpp"

namespace qnl {

struct ExperimentConfig {
  int dim = 2;
  int N = 128;
  double L = 2.0 * kPi;

  double gamma = 5.0 / 3.0;
  double mu = 1.0;
  double nu = 1.0;

  std::vector<double> lambda_list = {0.2, 0.1, 0.05, 0.025};
  double T = 1.0;
  double c_cfl = 0.5;
  int steps_per_lambda = 32;  // dt = lambda / steps_per_lambda

  std::string scenario = "well_prepared";
  unsigned long seed = 1;
  double amplitude = 0.1;

  std::string out_dir;        // empty: no files
  int snapshot_every = 0;     // 0: derived from the averaging-window constraint
  int diagnostics_every = 1;

  bool analyze_correctors = true;
  bool analyze_defect = true;
  bool analyze_strichartz = true;
  bool analyze_rates = true;
  bool parallel = true;

  void validate() const;
};

ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

// Named defaults: "desk" (d=2, N=128) and "heavy" (d=3, N=32).
ExperimentConfig profile_config(const std::string& name);

// Initial states. Registry: well_prepared, ill_prepared,
// acoustic_single_mode, taylor_green. The ill-prepared density
// perturbation is amplitude*lambda*cos(x1) so the initial energy stays
// lambda-uniform; the gradient velocity part amplitude*cos(x1)e1 is
// lambda-independent and excites the fast oscillation.
PlasmaState scenario_state(const std::string& name, const SpectralGrid& grid,
                           const FluidParams& params, double amplitude, unsigned long seed);

// Seeded solenoidal low-mode field with |u|_inf = amplitude.
VectorField random_solenoidal(const SpectralGrid& grid, double amplitude, unsigned long seed);

// Everything measured on one sweep member.
struct MemberResult {
  double lambda = 0.0;
  bool failed = false;
  std::string error;

  DiagnosticsSeries diagnostics;
  EnergyReport initial_energy;
  double dt = 0.0;

  double sup_qu = 0.0;              // sup_t ||Qu||_L2
  double sup_pu_minus_v = 0.0;      // sup_{t in [0.2,T]} ||Pu - v_NS||_L2
  double osc_peak_freq = 0.0;       // temporal DFT peak of the dominant Qu mode
  double osc_target_freq = 0.0;     // sqrt(gamma |k|^2 + 1/lambda^2)
  double osc_bin_width = 0.0;
  double r_corrector = 0.0;         // sup_t ||u - 2Im(e^{it/l}Eplus) - v_NS||
  double scaled_resid_l2 = 0.0;     // ||lambda resid||_{L2 t,x}
  double corrector_mismatch = 0.0;  // evolved vs freshly extracted Eplus at T
  double strichartz_monitor = 0.0;  // lambda^{-1/2} ||sigma||_{L4 W^{-7/2,4}}
  double low_freq_mass = 0.0;       // R = 4
  double max_cross_pairing = 0.0;
  double defect_total_mass = 0.0;
};

struct SweepBundle {
  ExperimentConfig config;
  std::vector<MemberResult> members;  // ordered as lambda_list
};

// Run one member end to end (also the `simulate` subcommand workhorse).
MemberResult run_member(const ExperimentConfig& config, double lambda);

// Full sweep with per-member failure isolation.
SweepBundle sweep(const ExperimentConfig& config);

// Deterministic emission: per-member diagnostics CSVs, rate-fit CSV,
// versioned summary JSON. Returns the summary JSON text.
std::string report(const SweepBundle& bundle, const std::string& out_dir);

// Trajectory + aligned analysis series for one lambda; used by run_member
// and directly by the acceptance checks that need the raw fields.
struct MemberFields {
  Trajectory traj;                 // analysis samples (t <= T) plus margin
  std::size_t analysis_count = 0;  // samples with t <= T
  Series<VectorField> u, E;        // aligned with snapshots
  Series<VectorField> v_ns;        // incompressible run, same stamps
};

MemberFields run_member_fields(const ExperimentConfig& config, double lambda);

}  // namespace qnl
