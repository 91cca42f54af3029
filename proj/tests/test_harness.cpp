#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qnl/harness.hpp"
#include "qnl/operators.hpp"

using namespace qnl;

TEST_CASE("config round trip and validation") {
  ExperimentConfig c = profile_config("desk");
  c.N = 32;
  c.seed = 9;
  c.lambda_list = {0.2, 0.1};
  c.out_dir = "some/dir";
  ExperimentConfig back = config_from_json_text(config_to_json_text(c));
  CHECK(config_to_json_text(back) == config_to_json_text(c));
  CHECK(back.N == 32);
  CHECK(back.seed == 9);
  CHECK(back.lambda_list == c.lambda_list);

  ExperimentConfig bad = c;
  bad.lambda_list = {0.1, 0.2};
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = c;
  bad.scenario = "nonsense";
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  CHECK_THROWS_AS(profile_config("laptop"), ParameterError);
}

TEST_CASE("scenario library invariants") {
  SpectralGrid g = SpectralGrid::isotropic(2, 32);
  FluidParams p;
  p.lambda = 0.1;

  PlasmaState wp = scenario_state("well_prepared", g, p, 0.1, 3);
  ScalarField sig = wp.rho;
  for (auto& z : sig) z -= 1.0;
  CHECK(l2_norm(sig) < 1e-13);
  CHECK(l2_norm(leray_Q(wp.u)) / l2_norm(wp.u) < 1e-12);
  CHECK(std::abs(linf_norm(wp.u) - 0.1) < 1e-12);

  PlasmaState ip = scenario_state("ill_prepared", g, p, 0.1, 3);
  CHECK(std::abs(mean(ip.rho) - 1.0) < 1e-13);
  CHECK(l2_norm(leray_Q(ip.u)) > 1e-3);  // oscillation is excited

  // determinism and (ID)-type boundedness
  PlasmaState wp2 = scenario_state("well_prepared", g, p, 0.1, 3);
  CHECK(l2_norm(wp2.u - wp.u) == 0.0);
  PlasmaState other = scenario_state("well_prepared", g, p, 0.1, 4);
  CHECK(l2_norm(other.u - wp.u) > 1e-6);
  for (double lam : {0.2, 0.05}) {
    FluidParams q = p;
    q.lambda = lam;
    EnergyReport e = energy(scenario_state("ill_prepared", g, q, 0.1, 3));
    CHECK(std::isfinite(e.total_plus_dissipation));
    CHECK(e.total_plus_dissipation < 10.0);
  }

  CHECK_THROWS_AS(scenario_state("nope", g, p, 0.1, 3), ParameterError);
}

TEST_CASE("random_solenoidal is divergence-free with the requested amplitude") {
  SpectralGrid g = SpectralGrid::isotropic(2, 32);
  VectorField u = random_solenoidal(g, 0.25, 11);
  CHECK(l2_norm(div(u)) / l2_norm(u) < 1e-12);
  CHECK(std::abs(linf_norm(u) - 0.25) < 1e-12);
  // real field
  double im = 0.0;
  for (int a = 0; a < u.dim(); ++a)
    for (const cplx& z : u.comp(a)) im = std::max(im, std::abs(z.imag()));
  CHECK(im < 1e-14);
}

TEST_CASE("single-member sweep duplicates a direct run") {
  ExperimentConfig c;
  c.N = 32;
  c.T = 0.2;
  c.lambda_list = {0.1};
  c.analyze_defect = false;
  c.analyze_strichartz = false;
  c.parallel = false;
  MemberResult direct = run_member(c, 0.1);
  SweepBundle b = sweep(c);
  REQUIRE(b.members.size() == 1);
  CHECK(!b.members[0].failed);
  CHECK(b.members[0].sup_qu == direct.sup_qu);
  CHECK(b.members[0].scaled_resid_l2 == direct.scaled_resid_l2);
  CHECK(b.members[0].dt == direct.dt);
}

TEST_CASE("report determinism and structure") {
  ExperimentConfig c;
  c.N = 16;
  c.T = 0.1;
  c.lambda_list = {0.2, 0.1};
  c.analyze_defect = false;
  c.analyze_strichartz = false;
  c.parallel = false;
  SweepBundle b = sweep(c);
  const std::string a1 = report(b, "");
  const std::string a2 = report(b, "");
  CHECK(a1 == a2);
  CHECK(a1.find("\"schema\": 1") != std::string::npos);
  CHECK(a1.find("\"acceptance\"") != std::string::npos);
  CHECK(a1.find("A12") != std::string::npos);

  SweepBundle empty;
  empty.config = c;
  const std::string e = report(empty, "");
  CHECK(e.find("\"members\": []") != std::string::npos);
}

TEST_CASE("member fields have aligned uniform stamps") {
  ExperimentConfig c;
  c.N = 16;
  c.T = 0.2;
  c.lambda_list = {0.1};
  MemberFields mf = run_member_fields(c, 0.1);
  mf.traj.snapshots.uniform_dt();
  CHECK(mf.u.size() == mf.traj.snapshots.size());
  CHECK(mf.E.size() == mf.u.size());
  CHECK(mf.v_ns.size() == mf.u.size());
  CHECK(mf.analysis_count >= 2);
  CHECK(mf.analysis_count <= mf.u.size());
  // margin: the last analysis sample reaches T, the series extends past it
  CHECK(mf.u.t[mf.analysis_count - 1] >= c.T - 1.5 * mf.traj.snapshots.uniform_dt());
  CHECK(mf.u.t.back() >= c.T + 2.0 * kPi * 0.1 - 1e-9);
}
