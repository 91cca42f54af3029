#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qnl/acoustic.hpp"
#include "qnl/corrector.hpp"
#include "qnl/defect.hpp"
#include "qnl/errors.hpp"
#include "qnl/field_io.hpp"
#include "qnl/harness.hpp"
#include "qnl/limit.hpp"
#include "qnl/operators.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out;
  std::string profile = "desk";
  long seed = -1;
  double lambda = 0.0;
};

qnl::ExperimentConfig resolve_config(const CommonArgs& a) {
  qnl::ExperimentConfig c =
      a.config_path.empty() ? qnl::profile_config(a.profile) : qnl::load_config(a.config_path);
  if (a.seed >= 0) c.seed = static_cast<unsigned long>(a.seed);
  if (!a.out.empty()) c.out_dir = a.out;
  c.validate();
  return c;
}

double pick_lambda(const qnl::ExperimentConfig& c, const CommonArgs& a) {
  return a.lambda > 0.0 ? a.lambda : c.lambda_list.front();
}

void add_common(CLI::App* cmd, CommonArgs& a, bool with_lambda) {
  cmd->add_option("--config", a.config_path, "JSON experiment config");
  cmd->add_option("--out", a.out, "output directory");
  cmd->add_option("--profile", a.profile, "built-in profile")
      ->check(CLI::IsMember({"desk", "heavy"}));
  cmd->add_option("--seed", a.seed, "override initial-condition seed");
  if (with_lambda) cmd->add_option("--lambda", a.lambda, "single coupling value to run");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_diagnostics_csv(const qnl::DiagnosticsSeries& d, const std::string& path) {
  std::ostringstream csv;
  csv << "step,t";
  for (const auto& n : d.names) csv << "," << n;
  csv << "\n";
  for (std::size_t i = 0; i < d.t.size(); ++i) {
    csv << d.step[i] << "," << fmt(d.t[i]);
    for (double x : d.rows[i]) csv << "," << fmt(x);
    csv << "\n";
  }
  qnl::atomic_write_text(path, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasineutral-limit simulator and analysis toolkit"};
  app.require_subcommand(1);

  CommonArgs sim_a, sweep_a, ext_a, lim_a, def_a, rep_a;
  auto* sim = app.add_subcommand("simulate", "run one trajectory, write diagnostics");
  add_common(sim, sim_a, true);
  auto* swp = app.add_subcommand("sweep", "run the full lambda sweep and write the report");
  add_common(swp, sweep_a, false);
  auto* ext = app.add_subcommand("extract", "extract oscillation correctors from one run");
  add_common(ext, ext_a, true);
  auto* lim = app.add_subcommand("limit", "evolve the limit system (incompressible + corrector)");
  add_common(lim, lim_a, true);
  auto* def = app.add_subcommand("defect", "angular defect-measure surrogate for one run");
  add_common(def, def_a, true);
  auto* rep = app.add_subcommand("report", "run the sweep and print the summary");
  add_common(rep, rep_a, false);

  CLI11_PARSE(app, argc, argv);
  namespace fs = std::filesystem;

  try {
    if (*sim) {
      qnl::ExperimentConfig c = resolve_config(sim_a);
      const double lam = pick_lambda(c, sim_a);
      qnl::MemberResult r = qnl::run_member(c, lam);
      const std::string dir = c.out_dir.empty() ? "." : c.out_dir;
      fs::create_directories(dir);
      write_diagnostics_csv(r.diagnostics, dir + "/diagnostics_lambda_" + fmt(lam) + ".csv");
      std::cout << "lambda=" << lam << " dt=" << r.dt << " sup|Qu|=" << r.sup_qu
                << " sup|Pu-v|=" << r.sup_pu_minus_v << "\n";
    } else if (*swp || *rep) {
      qnl::ExperimentConfig c = resolve_config(*swp ? sweep_a : rep_a);
      qnl::SweepBundle b = qnl::sweep(c);
      const std::string text = qnl::report(b, c.out_dir.empty() ? "out" : c.out_dir);
      if (*rep) std::cout << text;
      else std::cout << "sweep complete: " << b.members.size() << " members\n";
    } else if (*ext) {
      qnl::ExperimentConfig c = resolve_config(ext_a);
      const double lam = pick_lambda(c, ext_a);
      qnl::MemberFields mf = qnl::run_member_fields(c, lam);
      qnl::CorrectorPair pair =
          qnl::extract_correctors(mf.E, lam, qnl::ExtractionMethod::Windowed);
      qnl::OscillationDecomposition d;
      d.lambda = lam;
      d.pair = pair;
      qnl::WindowedAverage h = qnl::average_H(mf.E, lam);
      d.E2 = h.value;
      d.E1 = qnl::complement_G(mf.E, h);
      d.W = qnl::build_W(d.E1, mf.traj.snapshots.v.front());
      qnl::Series<qnl::VectorField> u_series;
      for (std::size_t i = 0; i < d.W.size(); ++i) u_series.push(mf.u.t[i], mf.u.v[i]);
      d.v = qnl::split_velocity(u_series, d.W);
      const std::string dir = c.out_dir.empty() ? "extract_out" : c.out_dir;
      qnl::write_decomposition(d, dir);
      std::cout << "wrote decomposition to " << dir << "\n";
    } else if (*lim) {
      qnl::ExperimentConfig c = resolve_config(lim_a);
      const double lam = pick_lambda(c, lim_a);
      qnl::SpectralGrid grid = qnl::SpectralGrid::isotropic(c.dim, c.N, c.L);
      qnl::FluidParams p{c.gamma, c.mu, c.nu, lam};
      qnl::PlasmaState s0 = qnl::scenario_state(c.scenario, grid, p, c.amplitude, c.seed);
      qnl::VectorField v0 = qnl::leray_P(s0.u);
      qnl::VectorField E0 = qnl::leray_Q(s0.u);
      E0 *= 0.5;
      const double dt = std::min(0.01, qnl::ns_dt_max(v0, c.c_cfl));
      auto states = qnl::coupled_limit_run(v0, E0, c.T, dt, 10);
      const std::string dir = c.out_dir.empty() ? "limit_out" : c.out_dir;
      fs::create_directories(dir);
      qnl::write_field(dir + "/v_final.qnlf", states.v.back().v);
      qnl::write_field(dir + "/Eplus_final.qnlf", states.v.back().Eplus, true);
      std::cout << "limit run: " << states.size() << " stored states, final |v|="
                << qnl::l2_norm(states.v.back().v) << "\n";
    } else if (*def) {
      qnl::ExperimentConfig c = resolve_config(def_a);
      const double lam = pick_lambda(c, def_a);
      qnl::MemberFields mf = qnl::run_member_fields(c, lam);
      qnl::CorrectorPair pair =
          qnl::extract_correctors(mf.E, lam, qnl::ExtractionMethod::Windowed);
      qnl::ResidualFields resid = qnl::residual_field(mf.E, pair, lam);
      qnl::Series<qnl::VectorField> trunc;
      for (std::size_t i = 0; i < mf.analysis_count; ++i)
        trunc.push(resid.scaled.t[i], resid.scaled.v[i]);
      qnl::AngularDefectSpectrum spec = qnl::angular_spectrum(trunc, 32);
      const std::string dir = c.out_dir.empty() ? "." : c.out_dir;
      fs::create_directories(dir);
      qnl::write_spectrum(spec, dir + "/defect_spectrum.json");
      std::cout << "defect surrogate total mass " << spec.total_mass
                << " low-frequency mass " << qnl::low_frequency_mass(trunc, 4.0) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
