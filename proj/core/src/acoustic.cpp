#include "qnl/acoustic.hpp"

#include <algorithm>
#include <cmath>

#include "qnl/fft.hpp"

namespace qnl {
namespace {

ScalarField divergence_of_tensor(const VectorField& rows_first_index,
                                 const std::vector<ScalarField>& entries, const SpectralGrid& g) {
  // entries laid out row-major (a*d+b) = T_ab; returns div_a div_b T_ab.
  (void)rows_first_index;
  const int d = g.dim;
  ScalarField out(g, Rep::Physical);
  for (int a = 0; a < d; ++a) {
    VectorField row(g, Rep::Physical);
    for (int b = 0; b < d; ++b) row[b] = entries[a * d + b];
    out += in_rep(partial(div(row), a), Rep::Physical);
  }
  return out;
}

}  // namespace

KGSources assemble_sources(const PlasmaState& state) {
  const auto& g = state.rho.grid();
  const int d = g.dim;
  const FluidParams& p = state.params;

  KGSources out{ScalarField(g, Rep::Physical), ScalarField(g, Rep::Physical),
                ScalarField(g, Rep::Physical), ScalarField(g, Rep::Physical), 0.0};

  // F1 = -(2mu+nu) Lap div u
  out.F1 = in_rep(laplacian(div(state.u)), Rep::Physical);
  out.F1 *= -(2.0 * p.mu + p.nu);

  // F2 = div( div(rho u (x) u) + (gamma-1) grad pi )
  std::vector<ScalarField> momentum_flux;
  momentum_flux.reserve(d * d);
  ScalarField rho = in_rep(state.rho, Rep::Physical);
  for (int a = 0; a < d; ++a) {
    ScalarField ma = multiply_dealiased(rho, state.u[a]);
    for (int b = 0; b < d; ++b) momentum_flux.push_back(multiply_dealiased(ma, state.u[b]));
  }
  out.F2 = divergence_of_tensor(state.u, momentum_flux, g);
  {
    ScalarField pres = in_rep(laplacian(pressure_pi(state.rho, p.gamma)), Rep::Physical);
    pres *= p.gamma - 1.0;
    out.F2 += pres;
  }

  // F3 = -div(sigma grad V), directly and through the quadratic form
  // lambda^2 [ div div(grad V (x) grad V) - Lap |grad V|^2 / 2 ].
  ScalarField sigma = rho;
  for (auto& z : sigma) z -= 1.0;
  VectorField gV = grad(state.V);
  {
    VectorField flux(g, Rep::Physical);
    for (int a = 0; a < d; ++a) flux[a] = multiply_dealiased(sigma, in_rep(gV[a], Rep::Physical));
    out.F3 = in_rep(div(flux), Rep::Physical);
    out.F3 *= -1.0;
  }
  {
    std::vector<ScalarField> tens;
    tens.reserve(d * d);
    ScalarField half_sq(g, Rep::Physical);
    for (int a = 0; a < d; ++a) {
      ScalarField ga = in_rep(gV[a], Rep::Physical);
      for (int b = 0; b < d; ++b) tens.push_back(multiply_dealiased(ga, in_rep(gV[b], Rep::Physical)));
      half_sq += tens[a * d + a];
    }
    half_sq *= 0.5;
    ScalarField alt = divergence_of_tensor(gV, tens, g);
    alt -= in_rep(laplacian(half_sq), Rep::Physical);
    alt *= -(p.lambda * p.lambda);
    out.F3_alt = alt;
  }
  {
    ScalarField diff = out.F3;
    diff -= out.F3_alt;
    out.f3_discrepancy = l2_norm(diff);
  }
  return out;
}

KGResidualReport kg_residual(const Series<PlasmaState>& snapshots) {
  if (snapshots.t.size() < 3) throw StructuralError("kg_residual needs at least 3 snapshots");
  const double dt = snapshots.t[1] - snapshots.t[0];
  for (std::size_t i = 1; i < snapshots.t.size(); ++i)
    if (std::abs(snapshots.t[i] - snapshots.t[i - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw StructuralError("kg_residual requires uniform snapshot spacing");

  auto sigma_of = [](const PlasmaState& s) {
    ScalarField x = in_rep(s.rho, Rep::Physical);
    for (auto& z : x) z -= 1.0;
    return x;
  };

  KGResidualReport rep;
  for (std::size_t i = 1; i + 1 < snapshots.t.size(); ++i) {
    const PlasmaState& s = snapshots.v[i];
    const double lam = s.params.lambda, gam = s.params.gamma;
    ScalarField sig = sigma_of(s);

    ScalarField dtt = sigma_of(snapshots.v[i + 1]);
    dtt += sigma_of(snapshots.v[i - 1]);
    {
      ScalarField mid = sig;
      mid *= 2.0;
      dtt -= mid;
    }
    dtt *= 1.0 / (dt * dt);

    ScalarField res = dtt;
    {
      ScalarField lap = in_rep(laplacian(sig), Rep::Physical);
      lap *= gam;
      res -= lap;
    }
    {
      ScalarField mass = sig;
      mass *= 1.0 / (lam * lam);
      res += mass;
    }
    KGSources src = assemble_sources(s);
    res -= src.F1;
    res -= src.F2;
    res -= src.F3;

    rep.t.push_back(snapshots.t[i]);
    rep.residual_l2.push_back(l2_norm(res));
  }
  for (double r : rep.residual_l2) {
    rep.max = std::max(rep.max, r);
    rep.mean += r;
  }
  if (!rep.residual_l2.empty()) rep.mean /= static_cast<double>(rep.residual_l2.size());
  return rep;
}

ScalarField rescale(const ScalarField& f, double lambda, RescaleDirection dir) {
  if (lambda <= 0.0) throw ParameterError("lambda must be positive");
  const double s = dir == RescaleDirection::Forward ? 1.0 / lambda : lambda;
  SpectralGrid g = f.grid();
  for (int a = 0; a < g.dim; ++a) g.extent[a] *= s;
  g.validate();
  ScalarField out(g, f.rep());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

double rescale_norm_factor(double lambda, double q, double k, double p, int d) {
  if (lambda <= 0.0) throw ParameterError("lambda must be positive");
  return std::pow(lambda, -1.0 / q + k - static_cast<double>(d) / p);
}

KGSolution kg_solve_linear(const ScalarField& w0, const ScalarField& wt0, double m, double T,
                           double dt, double c2, const Series<ScalarField>* source,
                           int store_every) {
  if (m <= 0.0) throw ParameterError("mass must be positive");
  if (dt <= 0.0 || T <= 0.0) throw ParameterError("dt and T must be positive");
  if (!(w0.grid() == wt0.grid())) throw StructuralError("w0/wt0 grid mismatch");
  const auto& g = w0.grid();
  const int d = g.dim;

  double k2max = 0.0;
  for (int a = 0; a < d; ++a) {
    const double kn = kPi * g.n[a] / g.extent[a];
    k2max += kn * kn;
  }
  const double omega_max = std::sqrt(c2 * k2max + m * m);
  const double dt_req = (kPi / 4.0) / omega_max;
  if (dt > dt_req) throw StabilityError("dt under-resolves the fastest mode", dt_req);

  const long steps = std::max<long>(1, std::lround(std::ceil(T / dt - 1e-9)));
  if (source) {
    if (source->t.size() < static_cast<std::size_t>(steps) + 1)
      throw StructuralError("source series shorter than the solve");
    if (std::abs(source->t[1] - source->t[0] - dt) > 1e-9)
      throw StructuralError("source series dt mismatch");
  }

  ScalarField w = in_rep(w0, Rep::Fourier);
  ScalarField wt = in_rep(wt0, Rep::Fourier);
  ScalarField fs_prev(g, Rep::Fourier);
  if (source) fs_prev = in_rep(source->v[0], Rep::Fourier);

  KGSolution out;
  out.w.push(0.0, in_rep(w, Rep::Physical));
  out.wt.push(0.0, in_rep(wt, Rep::Physical));

  for (long n = 1; n <= steps; ++n) {
    ScalarField fs_next(g, Rep::Fourier);
    if (source) fs_next = in_rep(source->v[n], Rep::Fourier);
    ScalarField wn(g, Rep::Fourier), wtn(g, Rep::Fourier);
    for_each_mode(g, [&](std::size_t idx, const double* k) {
      double k2 = 0.0;
      for (int a = 0; a < d; ++a) k2 += k[a] * k[a];
      const double om = std::sqrt(c2 * k2 + m * m);
      const double c = std::cos(om * dt), s = std::sin(om * dt);
      const cplx wv = w.data()[idx], wtv = wt.data()[idx];
      cplx nw = c * wv + (s / om) * wtv;
      cplx nwt = -om * s * wv + c * wtv;
      if (source) {
        // homogeneous Duhamel kernel sin(om (dt - s))/om applied to -F,
        // trapezoid over the step endpoints
        const cplx f0 = fs_prev.data()[idx], f1 = fs_next.data()[idx];
        nw += (0.5 * dt) * (-(s / om) * f0);
        nwt += (0.5 * dt) * (-c * f0 - f1);
      }
      wn.data()[idx] = nw;
      wtn.data()[idx] = nwt;
    });
    w = wn;
    wt = wtn;
    fs_prev = fs_next;
    if (n % store_every == 0 || n == steps) {
      out.w.push(n * dt, in_rep(w, Rep::Physical));
      out.wt.push(n * dt, in_rep(wt, Rep::Physical));
    }
  }
  return out;
}

double strichartz_norm(const Series<ScalarField>& series, double s) {
  if (series.t.empty()) throw StructuralError("strichartz_norm on empty series");
  const double dt = series.t.size() > 1 ? series.t[1] - series.t[0]
                                        : 1.0;  // single sample: unit weight
  for (std::size_t i = 1; i < series.t.size(); ++i)
    if (std::abs(series.t[i] - series.t[i - 1] - dt) > 1e-9)
      throw StructuralError("strichartz_norm requires uniform sampling");
  double acc = 0.0;
  for (const auto& f : series.v) {
    const double n = sobolev_norm(f, s, 4.0);
    acc += dt * n * n * n * n;
  }
  return std::pow(acc, 0.25);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw StructuralError("fit_rate needs at least 3 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].second <= 0.0)
      throw DomainError("fit_rate requires positive values", i);
    if (i > 0 && samples[i].first >= samples[i - 1].first)
      throw StructuralError("fit_rate requires strictly decreasing lambda");
  }
  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : samples) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  RateFit fit;
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.prefactor = std::exp((sy - fit.exponent * sx) / n);
  double rss = 0.0;
  for (const auto& [x, y] : samples) {
    const double e = std::log(y) - std::log(fit.prefactor) - fit.exponent * std::log(x);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

DampedModeFit fit_damped_mode(const std::vector<double>& samples, double dt) {
  if (samples.size() < 8) throw StructuralError("fit_damped_mode needs at least 8 samples");
  if (dt <= 0.0) throw ParameterError("dt must be positive");
  // Three-term recurrence s_{n+1} = a s_n + b s_{n-1} holds exactly for a
  // damped sinusoid; least squares for (a, b).
  double saa = 0, sab = 0, sbb = 0, sar = 0, sbr = 0;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const double pa = samples[i], pb = samples[i - 1], r = samples[i + 1];
    saa += pa * pa;
    sab += pa * pb;
    sbb += pb * pb;
    sar += pa * r;
    sbr += pb * r;
  }
  const double det = saa * sbb - sab * sab;
  if (std::abs(det) < 1e-30) throw StructuralError("fit_damped_mode: degenerate signal");
  const double a = (sar * sbb - sbr * sab) / det;
  const double b = (saa * sbr - sab * sar) / det;
  if (b >= 0.0) throw StructuralError("fit_damped_mode: signal is not oscillatory");
  const double decay = std::sqrt(-b);  // e^{-delta dt}
  double carg = a / (2.0 * decay);
  carg = std::clamp(carg, -1.0, 1.0);
  DampedModeFit fit;
  fit.delta = -std::log(decay) / dt;
  fit.omega_damped = std::acos(carg) / dt;
  fit.omega_natural = std::sqrt(fit.omega_damped * fit.omega_damped + fit.delta * fit.delta);
  return fit;
}

}  // namespace qnl
