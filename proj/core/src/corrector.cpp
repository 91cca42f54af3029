#include "qnl/corrector.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "qnl/fft.hpp"
#include "qnl/field_io.hpp"
#include "qnl/operators.hpp"

namespace qnl {
namespace {

void check_nonempty(const Series<VectorField>& s, const char* what) {
  if (s.empty()) throw StructuralError(std::string(what) + ": empty series");
}

void check_aligned(const Series<VectorField>& a, const Series<VectorField>& b) {
  if (a.t.size() != b.t.size()) throw StructuralError("series lengths differ");
  for (std::size_t i = 0; i < a.t.size(); ++i)
    if (std::abs(a.t[i] - b.t[i]) > 1e-9) throw StructuralError("series time stamps misaligned");
}

}  // namespace

Series<VectorField> modulate_T(const Series<VectorField>& s, double lambda, int sign) {
  if (lambda <= 0.0) throw ParameterError("lambda must be positive");
  if (sign != 1 && sign != -1) throw ParameterError("modulation sign must be +-1");
  Series<VectorField> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const cplx phase = std::exp(cplx(0.0, -sign * s.t[i] / lambda));
    out.push(s.t[i], s.v[i] * phase);
  }
  return out;
}

WindowedAverage average_H(const Series<VectorField>& s, double lambda) {
  check_nonempty(s, "average_H");
  if (lambda <= 0.0) throw ParameterError("lambda must be positive");
  const double window = 2.0 * kPi * lambda;
  const double dt_required = window / 16.0;
  if (s.size() < 2) throw SamplingError("average_H needs more than one sample", dt_required);
  const double dt = s.uniform_dt();
  if (dt > dt_required * (1.0 + 1e-9))
    throw SamplingError("sampling too coarse for the averaging window", dt_required);

  WindowedAverage out;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ahead = n - 1 - i;
    std::size_t nfull = static_cast<std::size_t>(std::floor(window / dt + 1e-9));
    double rem = window - static_cast<double>(nfull) * dt;
    if (rem < 1e-12 * dt) rem = 0.0;
    bool shrunk = false;
    if (nfull > ahead) {
      nfull = ahead;
      rem = 0.0;
      shrunk = true;
    } else if (rem > 0.0 && nfull == ahead) {
      rem = 0.0;
      shrunk = true;
    }

    VectorField acc(s.v[i].grid(), s.v[i].rep());
    double length = static_cast<double>(nfull) * dt + rem;
    if (nfull == 0 && rem == 0.0) {
      // degenerate trailing window: the sample itself
      out.value.push(s.t[i], s.v[i]);
      out.shrunken.push_back(true);
      continue;
    }
    for (std::size_t j = 0; j <= nfull; ++j) {
      const double w = (j == 0 || j == nfull) ? 0.5 * dt : dt;
      acc += s.v[i + j] * w;
    }
    if (rem > 0.0) {
      const VectorField& fa = s.v[i + nfull];
      const VectorField& fb = s.v[i + nfull + 1];
      const double frac = rem / dt;
      // endpoint value by linear interpolation, then trapezoid over rem
      VectorField fi = fa * (1.0 - frac) + fb * frac;
      acc += (fa + fi) * (0.5 * rem);
    }
    out.value.push(s.t[i], acc * (1.0 / length));
    out.shrunken.push_back(shrunk);
  }
  return out;
}

Series<VectorField> complement_G(const Series<VectorField>& s, const WindowedAverage& h) {
  check_aligned(s, h.value);
  Series<VectorField> out;
  for (std::size_t i = 0; i < s.size(); ++i) out.push(s.t[i], s.v[i] - h.value.v[i]);
  return out;
}

Series<VectorField> build_W(const Series<VectorField>& E1, const PlasmaState& state0) {
  check_nonempty(E1, "build_W");
  if (state0.rho.size() == 0) throw StructuralError("build_W requires the initial state");
  const double lambda = state0.params.lambda;
  const auto& g = state0.rho.grid();

  VectorField m0(g, Rep::Physical);
  for (int a = 0; a < g.dim; ++a) m0[a] = multiply(state0.rho, state0.u[a]);
  VectorField W0 = leray_Q(m0) * (1.0 / lambda);  // grad inv_lap div(rho0 u0) / lambda

  Series<VectorField> out;
  out.push(E1.t[0], W0);
  if (E1.size() > 1) {
    const double dt = E1.uniform_dt();
    VectorField acc = W0;
    for (std::size_t i = 1; i < E1.size(); ++i) {
      acc += (E1.v[i - 1] + E1.v[i]) * (0.5 * dt);
      out.push(E1.t[i], acc);
    }
  }
  return out;
}

CorrectorPair extract_correctors(const Series<VectorField>& E, double lambda,
                                 ExtractionMethod method, const DuhamelData* duhamel) {
  check_nonempty(E, "extract_correctors");
  CorrectorPair out;
  out.method = method;
  out.lambda = lambda;
  if (method == ExtractionMethod::Windowed) {
    Series<VectorField> plus = modulate_T(E, lambda, +1);
    Series<VectorField> minus = modulate_T(E, lambda, -1);
    for (auto& f : plus.v) f *= lambda;
    for (auto& f : minus.v) f *= lambda;
    WindowedAverage hp = average_H(plus, lambda);
    WindowedAverage hm = average_H(minus, lambda);
    out.Eplus = std::move(hp.value);
    out.Eminus = std::move(hm.value);
    out.shrunken = std::move(hp.shrunken);
    return out;
  }
  if (!duhamel) throw StructuralError("duhamel extraction needs the source history");
  check_aligned(E, duhamel->source);
  const double dt = E.uniform_dt();
  const cplx half_over_i = cplx(0.0, -0.5);  // 1/(2i)
  VectorField base = duhamel->E0 * (0.5 * lambda) + duhamel->Et0 * (lambda * lambda) * half_over_i;
  VectorField base_m = duhamel->E0 * (0.5 * lambda) - duhamel->Et0 * (lambda * lambda) * half_over_i;
  Series<VectorField> mod_p = modulate_T(duhamel->source, lambda, +1);
  Series<VectorField> mod_m = modulate_T(duhamel->source, lambda, -1);
  VectorField acc_p = base, acc_m = base_m;
  out.Eplus.push(E.t[0], base);
  out.Eminus.push(E.t[0], base_m);
  for (std::size_t i = 1; i < E.size(); ++i) {
    acc_p += (mod_p.v[i - 1] + mod_p.v[i]) * (0.5 * dt) * half_over_i;
    acc_m += (mod_m.v[i - 1] + mod_m.v[i]) * (0.5 * dt) * (-half_over_i);
    out.Eplus.push(E.t[i], acc_p);
    out.Eminus.push(E.t[i], acc_m);
  }
  return out;
}

Series<VectorField> split_velocity(const Series<VectorField>& u, const Series<VectorField>& W) {
  check_aligned(u, W);
  Series<VectorField> out;
  for (std::size_t i = 0; i < u.size(); ++i) out.push(u.t[i], u.v[i] - W.v[i]);
  return out;
}

ResidualFields residual_field(const Series<VectorField>& E, const CorrectorPair& pair,
                              double lambda) {
  check_aligned(E, pair.Eplus);
  check_aligned(E, pair.Eminus);
  ResidualFields out;
  for (std::size_t i = 0; i < E.size(); ++i) {
    const cplx ph = std::exp(cplx(0.0, E.t[i] / lambda));
    VectorField rec = pair.Eplus.v[i] * ph + pair.Eminus.v[i] * std::conj(ph);
    VectorField r = E.v[i] - rec * (1.0 / lambda);
    out.scaled.push(E.t[i], r * lambda);
    out.resid.push(E.t[i], std::move(r));
  }
  return out;
}

VectorField reconstruct_oscillation(const CorrectorPair& pair, std::size_t i) {
  if (i >= pair.Eplus.size()) throw StructuralError("reconstruct_oscillation: index out of range");
  const cplx ph = std::exp(cplx(0.0, pair.Eplus.t[i] / pair.lambda));
  return imag_part(pair.Eplus.v[i] * ph) * 2.0;
}

cplx weak_pairing(const Series<VectorField>& s, const Series<VectorField>& testfn) {
  check_aligned(s, testfn);
  if (s.size() < 2) throw StructuralError("weak_pairing needs at least two samples");
  const double dt = s.uniform_dt();
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double w = (i == 0 || i + 1 == s.size()) ? 0.5 * dt : dt;
    acc += w * inner(s.v[i], testfn.v[i]);
  }
  return acc;
}

void write_decomposition(const OscillationDecomposition& d, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  auto dump = [&](const char* stem, const Series<VectorField>& s, bool complex_samples) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::ostringstream name;
      name << stem << "_" << i << ".qnlf";
      write_field((fs::path(directory) / name.str()).string(), s.v[i], complex_samples);
    }
  };
  dump("E1", d.E1, false);
  dump("E2", d.E2, false);
  dump("W", d.W, false);
  dump("v", d.v, false);
  dump("Eplus", d.pair.Eplus, true);
  dump("Eminus", d.pair.Eminus, true);

  nlohmann::json m;
  m["lambda"] = d.lambda;
  m["times"] = d.pair.Eplus.t;
  m["method"] = d.pair.method == ExtractionMethod::Windowed ? "windowed" : "duhamel";
  m["convention"] = kPhaseConvention;
  m["flags"]["shrunken_windows"] = d.pair.shrunken;
  atomic_write_text((fs::path(directory) / "manifest.json").string(), m.dump(2) + "\n");
}

}  // namespace qnl
