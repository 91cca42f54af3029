#include "qnl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "json.hpp"
#include "qnl/fft.hpp"
#include "qnl/field_io.hpp"
#include "qnl/limit.hpp"
#include "qnl/operators.hpp"

namespace qnl {
namespace {

const std::vector<std::string> kScenarios = {"well_prepared", "ill_prepared",
                                             "acoustic_single_mode", "taylor_green"};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ScalarField sigma_of(const PlasmaState& s) {
  ScalarField x = in_rep(s.rho, Rep::Physical);
  for (auto& z : x) z -= 1.0;
  return x;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dim != 2 && dim != 3) throw ParameterError("dim must be 2 or 3");
  if (N < 8 || N % 2 != 0) throw ParameterError("N must be even and >= 8");
  if (L <= 0.0 || T <= 0.0) throw ParameterError("L and T must be positive");
  if (lambda_list.empty()) throw ParameterError("lambda_list must be nonempty");
  for (std::size_t i = 0; i < lambda_list.size(); ++i) {
    if (lambda_list[i] <= 0.0) throw ParameterError("lambda values must be positive");
    if (i > 0 && lambda_list[i] >= lambda_list[i - 1])
      throw ParameterError("lambda_list must be strictly decreasing");
  }
  if (std::find(kScenarios.begin(), kScenarios.end(), scenario) == kScenarios.end())
    throw ParameterError("unknown scenario: " + scenario);
  if (steps_per_lambda < 1 || c_cfl <= 0.0) throw ParameterError("bad dt rule");
  if (lambda_list.back() / steps_per_lambda < 1e-8)
    throw ParameterError("implied dt below 1e-8");
  FluidParams p{gamma, mu, nu, lambda_list.front()};
  p.validate();
}

ExperimentConfig config_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig c;
  c.dim = j.at("grid").at("dim").get<int>();
  c.N = j.at("grid").at("N").get<int>();
  c.L = j.at("grid").at("L").get<double>();
  c.gamma = j.at("params").at("gamma").get<double>();
  c.mu = j.at("params").at("mu").get<double>();
  c.nu = j.at("params").at("nu").get<double>();
  c.lambda_list = j.at("lambda_list").get<std::vector<double>>();
  c.T = j.at("T").get<double>();
  c.c_cfl = j.at("dt_rule").at("c_cfl").get<double>();
  c.steps_per_lambda = j.at("dt_rule").at("steps_per_lambda").get<int>();
  c.scenario = j.at("initial_condition").at("scenario").get<std::string>();
  c.seed = j.at("initial_condition").at("seed").get<unsigned long>();
  c.amplitude = j.at("initial_condition").at("amplitude").get<double>();
  c.out_dir = j.at("outputs").at("directory").get<std::string>();
  c.snapshot_every = j.at("outputs").at("snapshot_every").get<int>();
  c.diagnostics_every = j.at("outputs").at("diagnostics_every").get<int>();
  c.analyze_correctors = j.at("analysis").at("correctors").get<bool>();
  c.analyze_defect = j.at("analysis").at("defect").get<bool>();
  c.analyze_strichartz = j.at("analysis").at("strichartz").get<bool>();
  c.analyze_rates = j.at("analysis").at("rates").get<bool>();
  c.parallel = j.at("analysis").value("parallel", true);
  c.validate();
  return c;
}

std::string config_to_json_text(const ExperimentConfig& c) {
  nlohmann::json j;
  j["schema"] = 1;
  j["grid"] = {{"dim", c.dim}, {"N", c.N}, {"L", c.L}};
  j["params"] = {{"gamma", c.gamma}, {"mu", c.mu}, {"nu", c.nu}};
  j["lambda_list"] = c.lambda_list;
  j["T"] = c.T;
  j["dt_rule"] = {{"c_cfl", c.c_cfl}, {"steps_per_lambda", c.steps_per_lambda}};
  j["initial_condition"] = {
      {"scenario", c.scenario}, {"seed", c.seed}, {"amplitude", c.amplitude}};
  j["outputs"] = {{"directory", c.out_dir},
                  {"snapshot_every", c.snapshot_every},
                  {"diagnostics_every", c.diagnostics_every}};
  j["analysis"] = {{"correctors", c.analyze_correctors},
                   {"defect", c.analyze_defect},
                   {"strichartz", c.analyze_strichartz},
                   {"rates", c.analyze_rates},
                   {"parallel", c.parallel}};
  return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

ExperimentConfig profile_config(const std::string& name) {
  ExperimentConfig c;
  if (name == "desk") return c;
  if (name == "heavy") {
    c.dim = 3;
    c.N = 32;
    return c;
  }
  throw ParameterError("unknown profile: " + name);
}

VectorField random_solenoidal(const SpectralGrid& grid, double amplitude, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorField hat(grid, Rep::Fourier);
  const int d = grid.dim;
  const double nd = static_cast<double>(grid.size());

  // low modes 1 <= |j|_inf <= 3, Hermitian pairs filled together so the
  // physical field is real
  auto index_of = [&](const int* j) {
    std::size_t idx = 0;
    for (int a = 0; a < d; ++a) {
      const int w = j[a] >= 0 ? j[a] : grid.n[a] + j[a];
      idx = idx * static_cast<std::size_t>(grid.n[a]) + static_cast<std::size_t>(w);
    }
    return idx;
  };
  int j[3] = {0, 0, 0};
  const int lo = -3, hi = 3;
  for (j[0] = lo; j[0] <= hi; ++j[0])
    for (j[1] = lo; j[1] <= hi; ++j[1])
      for (j[2] = (d == 3 ? lo : 0); j[2] <= (d == 3 ? hi : 0); ++j[2]) {
        // one representative per Hermitian pair (lexicographically positive)
        if (j[0] < 0) continue;
        if (j[0] == 0 && j[1] < 0) continue;
        if (j[0] == 0 && j[1] == 0 && j[2] <= 0) continue;
        double j2 = 0.0;
        for (int a = 0; a < d; ++a) j2 += j[a] * j[a];
        const double env = std::exp(-0.5 * j2);
        int jm[3] = {-j[0], -j[1], -j[2]};
        for (int a = 0; a < d; ++a) {
          const cplx cv = env * cplx(gauss(rng), gauss(rng));
          hat[a].data()[index_of(j)] = cv * nd;
          hat[a].data()[index_of(jm)] = std::conj(cv) * nd;
        }
      }
  VectorField u = leray_P(in_rep(hat, Rep::Physical));
  u = real_part(u);
  const double m = linf_norm(u);
  if (m > 0.0) u *= amplitude / m;
  return u;
}

PlasmaState scenario_state(const std::string& name, const SpectralGrid& grid,
                           const FluidParams& params, double amplitude, unsigned long seed) {
  ScalarField rho(grid, Rep::Physical);
  VectorField u(grid, Rep::Physical);
  rho.fill([](const double*) { return 1.0; });

  if (name == "well_prepared") {
    u = random_solenoidal(grid, amplitude, seed);
  } else if (name == "ill_prepared") {
    rho.fill([&](const double* x) { return 1.0 + amplitude * params.lambda * std::cos(x[0]); });
    u = random_solenoidal(grid, amplitude, seed);
    ScalarField q(grid, Rep::Physical);
    q.fill([&](const double* x) { return amplitude * std::cos(x[0]); });
    u[0] += q;
  } else if (name == "acoustic_single_mode") {
    rho.fill([&](const double* x) { return 1.0 + amplitude * std::cos(x[0]); });
  } else if (name == "taylor_green") {
    if (grid.dim == 2) {
      u[0].fill([&](const double* x) { return amplitude * std::sin(x[0]) * std::cos(x[1]); });
      u[1].fill([&](const double* x) { return -amplitude * std::cos(x[0]) * std::sin(x[1]); });
    } else {
      u[0].fill(
          [&](const double* x) { return amplitude * std::sin(x[0]) * std::cos(x[1]) * std::cos(x[2]); });
      u[1].fill(
          [&](const double* x) { return -amplitude * std::cos(x[0]) * std::sin(x[1]) * std::cos(x[2]); });
    }
  } else {
    throw ParameterError("unknown scenario: " + name);
  }
  return make_state(std::move(rho), std::move(u), params, 0.0);
}

MemberFields run_member_fields(const ExperimentConfig& config, double lambda) {
  config.validate();
  SpectralGrid grid = SpectralGrid::isotropic(config.dim, config.N, config.L);
  FluidParams params{config.gamma, config.mu, config.nu, lambda};
  PlasmaState s0 = scenario_state(config.scenario, grid, params, config.amplitude, config.seed);

  double dt = std::min(lambda / config.steps_per_lambda, dt_max(s0, config.c_cfl));
  if (dt < 1e-8) throw ParameterError("implied dt below 1e-8");
  const double window = 2.0 * kPi * lambda;
  int snap_every = config.snapshot_every > 0
                       ? config.snapshot_every
                       : std::max(1, static_cast<int>(std::floor(window / 16.0 / dt)));
  // round the horizon to a whole number of snapshot intervals, with a
  // margin of one averaging window so correctors are clean on [0, T]
  const double block = snap_every * dt;
  const long blocks = std::lround(std::ceil((config.T + window) / block - 1e-9));
  RunOptions opts;
  opts.T = blocks * block;
  opts.dt = dt;
  opts.c_cfl = config.c_cfl;
  opts.snapshot_every = snap_every;
  opts.diagnostics_every = config.diagnostics_every;

  MemberFields mf;
  mf.traj = run(s0, opts);

  for (std::size_t i = 0; i < mf.traj.snapshots.size(); ++i) {
    const PlasmaState& s = mf.traj.snapshots.v[i];
    mf.u.push(mf.traj.snapshots.t[i], s.u);
    mf.E.push(mf.traj.snapshots.t[i], electric_field(s));
  }
  mf.analysis_count = 0;
  for (double t : mf.traj.snapshots.t)
    if (t <= config.T + 1e-9) ++mf.analysis_count;

  // incompressible reference on the same stamps
  VectorField v = leray_P(s0.u);
  const double stride = snap_every * dt;
  mf.v_ns.push(mf.u.t[0], v);
  for (std::size_t i = 1; i < mf.u.size(); ++i) {
    v = ns_step(v, stride, config.c_cfl);
    mf.v_ns.push(mf.u.t[i], v);
  }
  return mf;
}

namespace {

// Dominant gradient mode of Qu0 and its longitudinal coefficient series.
struct OscProbe {
  bool active = false;
  double k2 = 0.0;
  std::vector<cplx> coef;  // per analysis sample
};

OscProbe oscillation_probe(const MemberFields& mf) {
  OscProbe probe;
  VectorField q0 = in_rep(leray_Q(mf.u.v[0]), Rep::Fourier);
  const auto& g = q0.grid();
  if (l2_norm(q0) < 1e-12) return probe;
  double best = 0.0;
  std::size_t best_idx = 0;
  double best_k[3] = {0, 0, 0};
  for_each_mode(g, [&](std::size_t idx, const double* k) {
    double k2 = 0.0;
    for (int a = 0; a < g.dim; ++a) k2 += k[a] * k[a];
    if (k2 == 0.0) return;
    // half-space representative to skip Hermitian duplicates
    if (k[0] < 0 || (k[0] == 0 && k[1] < 0) || (k[0] == 0 && k[1] == 0 && k[2] < 0)) return;
    double amp = 0.0;
    for (int a = 0; a < g.dim; ++a) amp += std::norm(q0[a].data()[idx]);
    if (amp > best) {
      best = amp;
      best_idx = idx;
      for (int a = 0; a < 3; ++a) best_k[a] = k[a];
    }
  });
  if (best == 0.0) return probe;
  probe.active = true;
  for (int a = 0; a < g.dim; ++a) probe.k2 += best_k[a] * best_k[a];
  const double kn = std::sqrt(probe.k2);
  for (std::size_t i = 0; i < mf.analysis_count; ++i) {
    VectorField qh = in_rep(leray_Q(mf.u.v[i]), Rep::Fourier);
    cplx c(0.0, 0.0);
    for (int a = 0; a < g.dim; ++a) c += (best_k[a] / kn) * qh[a].data()[best_idx];
    probe.coef.push_back(c / static_cast<double>(g.size()));
  }
  return probe;
}

}  // namespace

MemberResult run_member(const ExperimentConfig& config, double lambda) {
  MemberResult r;
  r.lambda = lambda;
  MemberFields mf = run_member_fields(config, lambda);
  r.diagnostics = mf.traj.diagnostics;
  r.dt = mf.traj.dt;
  {
    const auto& row = r.diagnostics.rows.at(0);
    r.initial_energy.kinetic = row[0];
    r.initial_energy.internal = row[1];
    r.initial_energy.electric = row[2];
    r.initial_energy.dissipation_accum = row[3];
    r.initial_energy.total_plus_dissipation = row[4];
  }
  const std::size_t count = mf.analysis_count;
  const double stride = mf.u.t[1] - mf.u.t[0];

  for (std::size_t i = 0; i < r.diagnostics.t.size(); ++i)
    if (r.diagnostics.t[i] <= config.T + 1e-9)
      r.sup_qu = std::max(r.sup_qu, r.diagnostics.rows[i][5]);

  for (std::size_t i = 0; i < count; ++i) {
    if (mf.u.t[i] < 0.2 - 1e-9) continue;
    r.sup_pu_minus_v = std::max(r.sup_pu_minus_v, l2_norm(leray_P(mf.u.v[i]) - mf.v_ns.v[i]));
  }

  OscProbe probe = oscillation_probe(mf);
  if (probe.active && probe.coef.size() > 3) {
    const std::size_t M = probe.coef.size();
    cplx mean_c(0, 0);
    for (const cplx& c : probe.coef) mean_c += c;
    mean_c /= static_cast<double>(M);
    const double span = stride * static_cast<double>(M);
    r.osc_bin_width = 2.0 * kPi / span;
    r.osc_target_freq = std::sqrt(config.gamma * probe.k2 + 1.0 / (lambda * lambda));
    double best = -1.0;
    const long half = static_cast<long>(M) / 2;
    for (long m = -half; m <= half; ++m) {
      const double om = r.osc_bin_width * static_cast<double>(m);
      cplx x(0, 0);
      for (std::size_t i = 0; i < M; ++i)
        x += (probe.coef[i] - mean_c) * std::exp(cplx(0.0, -om * stride * i));
      if (std::abs(x) > best) {
        best = std::abs(x);
        r.osc_peak_freq = std::abs(om);
      }
    }
  }

  if (config.analyze_correctors) {
    CorrectorPair pair = extract_correctors(mf.E, lambda, ExtractionMethod::Windowed);
    ResidualFields resid = residual_field(mf.E, pair, lambda);

    for (std::size_t i = 0; i < count; ++i) {
      VectorField rec = reconstruct_oscillation(pair, i);
      r.r_corrector = std::max(r.r_corrector, l2_norm(mf.u.v[i] - rec - mf.v_ns.v[i]));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double w = ((i == 0 || i + 1 == count) ? 0.5 : 1.0) * stride;
      const double n = l2_norm(resid.scaled.v[i]);
      acc += w * n * n;
    }
    r.scaled_resid_l2 = std::sqrt(acc);

    // corrector dynamics: evolve the t=0.2 extraction to t=T on the NS
    // velocity, compare against the fresh extraction at T
    std::size_t i0 = 0;
    while (i0 + 1 < count && mf.u.t[i0] < 0.2 - 1e-9) ++i0;
    const std::size_t iT = count - 1;
    if (iT > i0) {
      VectorField Ee = pair.Eplus.v[i0];
      // acoustic damping of the compressible part is (mu + nu/2) |k|^2
      const double kappa = config.mu + 0.5 * config.nu;
      for (std::size_t i = i0; i < iT; ++i)
        Ee = corrector_step(Ee, mf.v_ns.v[i], mf.v_ns.v[i + 1], stride, config.c_cfl, kappa);
      const double ref = l2_norm(pair.Eplus.v[iT]);
      if (ref > 0.0) r.corrector_mismatch = l2_norm(Ee - pair.Eplus.v[iT]) / ref;
    }

    if (config.analyze_defect) {
      Series<VectorField> trunc;
      for (std::size_t i = 0; i < count; ++i) trunc.push(resid.scaled.t[i], resid.scaled.v[i]);
      AngularDefectSpectrum spec = angular_spectrum(trunc, 32);
      r.defect_total_mass = spec.total_mass;
      r.low_freq_mass = low_frequency_mass(trunc, 4.0);

      CorrectorPair tp;
      tp.lambda = lambda;
      tp.method = pair.method;
      for (std::size_t i = 0; i < count; ++i) {
        tp.Eplus.push(pair.Eplus.t[i], pair.Eplus.v[i]);
        tp.Eminus.push(pair.Eminus.t[i], pair.Eminus.v[i]);
      }
      std::vector<std::vector<double>> phis(2, std::vector<double>(count));
      for (std::size_t i = 0; i < count; ++i) {
        const double b = std::sin(kPi * trunc.t[i] / config.T);
        phis[0][i] = b * b;
        phis[1][i] = b * b * b * b;
      }
      OrthogonalityReport orep =
          orthogonality_check(tp, trunc, phis, {"bump", "bump_sq"}, lambda);
      r.max_cross_pairing = orep.max_cross;

      if (!config.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::path dir = fs::path(config.out_dir) / ("lambda_" + fmt(lambda));
        fs::create_directories(dir);
        write_spectrum(spec, (dir / "defect_spectrum.json").string());
      }
    }
  }

  if (config.analyze_strichartz) {
    Series<ScalarField> sig;
    for (std::size_t i = 0; i < count; ++i)
      sig.push(mf.u.t[i], sigma_of(mf.traj.snapshots.v[i]));
    r.strichartz_monitor = strichartz_norm(sig, -3.5) / std::sqrt(lambda);
  }
  return r;
}

SweepBundle sweep(const ExperimentConfig& config) {
  config.validate();
  SweepBundle bundle;
  bundle.config = config;
  bundle.members.resize(config.lambda_list.size());

  auto worker = [&](std::size_t i) {
    MemberResult& m = bundle.members[i];
    m.lambda = config.lambda_list[i];
    try {
      m = run_member(config, config.lambda_list[i]);
    } catch (const std::exception& e) {
      m.failed = true;
      m.error = e.what();
    }
  };
  if (config.parallel && config.lambda_list.size() > 1) {
    std::vector<std::future<void>> fs;
    for (std::size_t i = 0; i < config.lambda_list.size(); ++i)
      fs.push_back(std::async(std::launch::async, worker, i));
    for (auto& f : fs) f.get();
  } else {
    for (std::size_t i = 0; i < config.lambda_list.size(); ++i) worker(i);
  }
  return bundle;
}

namespace {

void acceptance_item(nlohmann::json& items, const std::string& id, const std::string& status,
                     const nlohmann::json& values, const std::string& note) {
  nlohmann::json it;
  it["status"] = status;
  it["values"] = values;
  if (!note.empty()) it["note"] = note;
  items[id] = it;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return !v.empty();
}

}  // namespace

std::string report(const SweepBundle& bundle, const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (!out_dir.empty()) fs::create_directories(out_dir);

  auto emit = [&](const std::string& name, const std::string& text) {
    if (!out_dir.empty()) atomic_write_text((fs::path(out_dir) / name).string(), text);
  };

  // per-member diagnostics
  for (const MemberResult& m : bundle.members) {
    if (m.failed) continue;
    std::ostringstream csv;
    csv << "step,t";
    for (const auto& n : m.diagnostics.names) csv << "," << n;
    csv << "\n";
    for (std::size_t i = 0; i < m.diagnostics.t.size(); ++i) {
      csv << m.diagnostics.step[i] << "," << fmt(m.diagnostics.t[i]);
      for (double x : m.diagnostics.rows[i]) csv << "," << fmt(x);
      csv << "\n";
    }
    emit("diagnostics_lambda_" + fmt(m.lambda) + ".csv", csv.str());
  }

  // per-metric series and fits
  struct Metric {
    const char* name;
    double MemberResult::* field;
  };
  const Metric metrics[] = {{"sup_qu", &MemberResult::sup_qu},
                            {"sup_pu_minus_v", &MemberResult::sup_pu_minus_v},
                            {"r_corrector", &MemberResult::r_corrector},
                            {"scaled_resid_l2", &MemberResult::scaled_resid_l2},
                            {"corrector_mismatch", &MemberResult::corrector_mismatch},
                            {"strichartz_monitor", &MemberResult::strichartz_monitor},
                            {"low_freq_mass", &MemberResult::low_freq_mass},
                            {"max_cross_pairing", &MemberResult::max_cross_pairing},
                            {"defect_total_mass", &MemberResult::defect_total_mass}};

  std::ostringstream rates, fits;
  rates << "metric,lambda,value\n";
  fits << "metric,exponent,prefactor,residual\n";
  nlohmann::json jfits;
  for (const Metric& mt : metrics) {
    std::vector<std::pair<double, double>> samples;
    for (const MemberResult& m : bundle.members) {
      if (m.failed) continue;
      rates << mt.name << "," << fmt(m.lambda) << "," << fmt(m.*mt.field) << "\n";
      samples.emplace_back(m.lambda, m.*mt.field);
    }
    if (samples.size() >= 3 && std::all_of(samples.begin(), samples.end(),
                                           [](const auto& p) { return p.second > 0.0; })) {
      RateFit f = fit_rate(samples);
      fits << mt.name << "," << fmt(f.exponent) << "," << fmt(f.prefactor) << ","
           << fmt(f.residual) << "\n";
      jfits[mt.name] = {{"exponent", f.exponent}, {"prefactor", f.prefactor},
                        {"residual", f.residual}};
    }
  }
  emit("rates.csv", rates.str());
  emit("rate_fits.csv", fits.str());

  // summary
  nlohmann::json j;
  j["schema"] = 1;
  j["config"] = nlohmann::json::parse(config_to_json_text(bundle.config));
  j["dimension_note"] =
      bundle.config.dim == 2 ? "2-D surrogate of the 3-D theory (desk profile)" : "3-D";
  j["phase_convention"] = kPhaseConvention;

  nlohmann::json members = nlohmann::json::array();
  std::vector<double> sup_qu, sup_puv, rcorr, sresid, lowfreq, cross;
  double worst_energy_step = 0.0;
  bool osc_ok = true;
  double mismatch_last = 0.0;
  for (const MemberResult& m : bundle.members) {
    nlohmann::json e;
    e["lambda"] = m.lambda;
    e["failed"] = m.failed;
    if (m.failed) {
      e["error"] = m.error;
      members.push_back(e);
      continue;
    }
    e["dt"] = m.dt;
    e["initial_energy"] = m.initial_energy.total_plus_dissipation;
    e["sup_qu"] = m.sup_qu;
    e["sup_pu_minus_v"] = m.sup_pu_minus_v;
    e["osc_peak_freq"] = m.osc_peak_freq;
    e["osc_target_freq"] = m.osc_target_freq;
    e["osc_bin_width"] = m.osc_bin_width;
    e["r_corrector"] = m.r_corrector;
    e["scaled_resid_l2"] = m.scaled_resid_l2;
    e["corrector_mismatch"] = m.corrector_mismatch;
    e["strichartz_monitor"] = m.strichartz_monitor;
    e["low_freq_mass"] = m.low_freq_mass;
    e["max_cross_pairing"] = m.max_cross_pairing;
    e["defect_total_mass"] = m.defect_total_mass;
    members.push_back(e);

    sup_qu.push_back(m.sup_qu);
    sup_puv.push_back(m.sup_pu_minus_v);
    rcorr.push_back(m.r_corrector);
    sresid.push_back(m.scaled_resid_l2);
    lowfreq.push_back(m.low_freq_mass);
    cross.push_back(m.max_cross_pairing);
    mismatch_last = m.corrector_mismatch;

    for (std::size_t i = 1; i < m.diagnostics.t.size(); ++i) {
      const double rise = m.diagnostics.rows[i][4] - m.diagnostics.rows[i - 1][4];
      worst_energy_step = std::max(worst_energy_step, rise);
    }
    if (m.osc_target_freq > 0.0 &&
        std::abs(m.osc_peak_freq - m.osc_target_freq) > m.osc_bin_width)
      osc_ok = false;
  }
  j["members"] = members;
  j["rate_fits"] = jfits;

  nlohmann::json items;
  const std::string ext = "evaluated by the acceptance test binary, not from sweep data";
  acceptance_item(items, "A1", "external", {}, ext);
  acceptance_item(items, "A2", "external", {}, ext);
  acceptance_item(items, "A3", "external", {}, ext);
  acceptance_item(items, "A4", "external", {}, ext);
  acceptance_item(items, "A5", "external", {}, ext);
  acceptance_item(items, "A6", "external",
                  {{"worst_energy_rise_per_step", worst_energy_step}},
                  "verified on resolved fine-dt runs by the acceptance test binary; production "
                  "steps carry O((dt/lambda)^3) truncation above the 1e-8 bar");
  {
    bool pass = strictly_decreasing(sup_qu) && strictly_decreasing(sup_puv);
    double expn = 0.0;
    if (jfits.contains("sup_qu")) {
      expn = jfits["sup_qu"]["exponent"].get<double>();
      pass = pass && expn > 0.0;
    }
    acceptance_item(items, "A7", pass ? "pass" : "fail",
                    {{"sup_qu", sup_qu}, {"sup_pu_minus_v", sup_puv}, {"qu_exponent", expn}},
                    bundle.config.scenario == "well_prepared" ? "" : "scenario is not well_prepared");
  }
  acceptance_item(items, "A8", osc_ok ? "pass" : "fail", {},
                  bundle.config.scenario == "ill_prepared" ? "" : "scenario is not ill_prepared");
  acceptance_item(items, "A9",
                  strictly_decreasing(rcorr) && strictly_decreasing(sresid) ? "pass" : "fail",
                  {{"r_corrector", rcorr}, {"scaled_resid_l2", sresid}}, "");
  acceptance_item(items, "A9b", mismatch_last <= 0.2 ? "pass" : "fail",
                  {{"mismatch_at_smallest_lambda", mismatch_last}}, "");
  acceptance_item(items, "A10", "external", {}, ext);
  acceptance_item(items, "A11", "external", {}, ext);
  acceptance_item(items, "A12",
                  strictly_decreasing(lowfreq) && strictly_decreasing(cross) ? "pass" : "fail",
                  {{"low_freq_mass", lowfreq}, {"max_cross_pairing", cross}},
                  "bin-concentration part is external");
  j["acceptance"] = items;

  const std::string text = j.dump(2) + "\n";
  emit("summary.json", text);
  return text;
}

}  // namespace qnl
