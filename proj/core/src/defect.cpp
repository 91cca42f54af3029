#include "qnl/defect.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "qnl/fft.hpp"
#include "qnl/field_io.hpp"
#include "qnl/operators.hpp"

namespace qnl {
namespace {

constexpr double kGoldenAngle = 2.399963229728653;  // pi (3 - sqrt 5)

std::vector<std::array<double, 3>> make_centers(int dim, int B) {
  std::vector<std::array<double, 3>> c(B);
  if (dim == 2) {
    for (int i = 0; i < B; ++i) {
      const double th = (i + 0.5) * 2.0 * kPi / B;
      c[i] = {std::cos(th), std::sin(th), 0.0};
    }
  } else {
    // Fibonacci sphere lattice: near-equal-area, no preferred axis
    for (int i = 0; i < B; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / B;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double ph = i * kGoldenAngle;
      c[i] = {r * std::cos(ph), r * std::sin(ph), z};
    }
  }
  return c;
}

}  // namespace

int direction_bin(const AngularDefectSpectrum& spec, const double* k) {
  if (spec.dim == 2) {
    double th = std::atan2(k[1], k[0]);
    if (th < 0.0) th += 2.0 * kPi;
    int b = static_cast<int>(th / (2.0 * kPi / spec.bins));
    return std::min(b, spec.bins - 1);
  }
  const double n = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
  int best = 0;
  double best_dot = -2.0;
  for (int b = 0; b < spec.bins; ++b) {
    const double dot =
        (k[0] * spec.centers[b][0] + k[1] * spec.centers[b][1] + k[2] * spec.centers[b][2]) / n;
    if (dot > best_dot) {
      best_dot = dot;
      best = b;
    }
  }
  return best;
}

AngularDefectSpectrum angular_spectrum(const Series<VectorField>& scaled_residual, int B) {
  if (scaled_residual.empty()) throw StructuralError("angular_spectrum: empty residual series");
  if (B < 2) throw ParameterError("angular_spectrum needs at least 2 bins");
  const auto& g = scaled_residual.v[0].grid();
  AngularDefectSpectrum spec;
  spec.dim = g.dim;
  spec.bins = B;
  spec.centers = make_centers(g.dim, B);
  spec.matrices.assign(B, Mat3{});
  spec.masses.assign(B, 0.0);
  spec.window_t0 = scaled_residual.t.front();
  spec.window_t1 = scaled_residual.t.back();

  const double nd = static_cast<double>(g.size());
  const double weight = g.volume() / (nd * nd);  // Parseval: sum w = ||f||_L2^2
  const int d = g.dim;
  for (const auto& sample : scaled_residual.v) {
    VectorField hat = in_rep(sample, Rep::Fourier);
    for_each_mode(g, [&](std::size_t idx, const double* k) {
      double k2 = 0.0;
      for (int a = 0; a < d; ++a) k2 += k[a] * k[a];
      if (k2 == 0.0) return;
      double w = 0.0;
      for (int a = 0; a < d; ++a) w += std::norm(hat[a].data()[idx]);
      w *= weight;
      const int b = direction_bin(spec, k);
      for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c) spec.matrices[b][a * d + c] += w * k[a] * k[c] / k2;
    });
  }
  const double inv_n = 1.0 / static_cast<double>(scaled_residual.size());
  for (int b = 0; b < B; ++b) {
    for (auto& m : spec.matrices[b]) m *= inv_n;
    double tr = 0.0;
    for (int a = 0; a < d; ++a) tr += spec.matrices[b][a * d + a];
    spec.masses[b] = tr;
    spec.total_mass += tr;
  }
  return spec;
}

double pairing_with_symbol(const AngularDefectSpectrum& spec, const std::vector<Mat3>& a) {
  if (static_cast<int>(a.size()) != spec.bins)
    throw StructuralError("pairing_with_symbol: bin count mismatch");
  const int d = spec.dim;
  double s = 0.0;
  for (int b = 0; b < spec.bins; ++b)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s += a[b][i * d + j] * spec.matrices[b][j * d + i];
  return s;
}

OrthogonalityReport orthogonality_check(const CorrectorPair& pair,
                                        const Series<VectorField>& scaled_residual,
                                        const std::vector<std::vector<double>>& testfns,
                                        const std::vector<std::string>& names, double lambda) {
  if (testfns.size() != names.size())
    throw StructuralError("orthogonality_check: names/testfns mismatch");
  const std::size_t n = scaled_residual.size();
  if (pair.Eplus.size() != n || pair.Eminus.size() != n)
    throw StructuralError("orthogonality_check: series misaligned");
  const double dt = scaled_residual.uniform_dt();

  OrthogonalityReport rep;
  rep.names = names;
  for (const auto& phi : testfns) {
    if (phi.size() != n) throw StructuralError("orthogonality_check: test weight length");
    cplx pm(0, 0), rp(0, 0), rm(0, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = ((i == 0 || i + 1 == n) ? 0.5 : 1.0) * dt * phi[i];
      const cplx ph = std::exp(cplx(0.0, scaled_residual.t[i] / lambda));
      VectorField ep = pair.Eplus.v[i] * ph;
      VectorField em = pair.Eminus.v[i] * std::conj(ph);
      pm += w * inner(ep, em);
      rp += w * inner(scaled_residual.v[i], ep);
      rm += w * inner(scaled_residual.v[i], em);
    }
    rep.plus_minus.push_back(std::abs(pm));
    rep.resid_plus.push_back(std::abs(rp));
    rep.resid_minus.push_back(std::abs(rm));
    rep.max_cross = std::max({rep.max_cross, std::abs(pm), std::abs(rp), std::abs(rm)});
  }
  return rep;
}

double low_frequency_mass(const Series<VectorField>& scaled_residual, double R) {
  if (scaled_residual.empty()) throw StructuralError("low_frequency_mass: empty series");
  const auto& g = scaled_residual.v[0].grid();
  double cutoff = 1e300;
  for (int a = 0; a < g.dim; ++a) {
    const double kmax = g.dealias_fraction * (g.n[a] / 2) * (2.0 * kPi / g.extent[a]);
    cutoff = std::min(cutoff, kmax);
  }
  if (!(R > 0.0) || R > cutoff)
    throw ParameterError("low_frequency_mass: R outside (0, dealias cutoff]");
  const double dt = scaled_residual.size() > 1 ? scaled_residual.uniform_dt() : 1.0;
  const double nd = static_cast<double>(g.size());
  double acc = 0.0;
  for (std::size_t s = 0; s < scaled_residual.size(); ++s) {
    const double w = ((s == 0 || s + 1 == scaled_residual.size()) ? 0.5 : 1.0) * dt;
    VectorField hat = in_rep(scaled_residual.v[s], Rep::Fourier);
    for_each_mode(g, [&](std::size_t idx, const double* k) {
      double k2 = 0.0;
      for (int a = 0; a < g.dim; ++a) k2 += k[a] * k[a];
      if (k2 == 0.0 || k2 > R * R) return;
      double m2 = 0.0;
      for (int a = 0; a < g.dim; ++a) m2 += std::norm(hat[a].data()[idx]);
      acc += w * std::sqrt(m2) / nd;
    });
  }
  return acc;
}

void write_spectrum(const AngularDefectSpectrum& spec, const std::string& path) {
  nlohmann::json j;
  j["surrogate"] = true;
  j["dim"] = spec.dim;
  j["total_mass"] = spec.total_mass;
  j["window"] = {spec.window_t0, spec.window_t1};
  auto& bins = j["bins"];
  bins = nlohmann::json::array();
  for (int b = 0; b < spec.bins; ++b) {
    nlohmann::json e;
    e["center_direction"] = std::vector<double>(spec.centers[b].begin(),
                                                spec.centers[b].begin() + spec.dim);
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < spec.dim; ++i) {
      std::vector<double> row(spec.dim);
      for (int c = 0; c < spec.dim; ++c) row[c] = spec.matrices[b][i * spec.dim + c];
      rows.push_back(row);
    }
    e["matrix"] = rows;
    e["mass"] = spec.masses[b];
    bins.push_back(e);
  }
  atomic_write_text(path, j.dump(2) + "\n");
}

}  // namespace qnl
