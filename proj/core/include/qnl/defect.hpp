// Discrete angular-spectrum surrogate of the oscillation defect: energy of
// the scaled residual field binned by frequency direction with the
// k (x) k / |k|^2 matrix structure, symbol pairings, orthogonality
// pairings, and the low-frequency mass probe. Every emitted file carries
// "surrogate": true; the x dependence is integrated out.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "qnl/corrector.hpp"
#include "qnl/field.hpp"

namespace qnl {

using Mat3 = std::array<double, 9>;  // d x d block row-major, d = 2 or 3

struct AngularDefectSpectrum {
  int dim = 2;
  int bins = 0;
  std::vector<std::array<double, 3>> centers;  // unit direction per bin
  std::vector<Mat3> matrices;                  // PSD accumulation per bin
  std::vector<double> masses;                  // trace per bin
  double total_mass = 0.0;
  double window_t0 = 0.0;
  double window_t1 = 0.0;
};

// Bin a unit direction: uniform angular sectors in d=2, nearest center of
// a Fibonacci sphere lattice in d=3.
int direction_bin(const AngularDefectSpectrum& spec, const double* k);

// Time-averaged |hat residual(k)|^2 * (k (x) k / |k|^2) per direction bin,
// k = 0 excluded. Input is the scaled residual series lambda * resid.
AngularDefectSpectrum angular_spectrum(const Series<VectorField>& scaled_residual, int B);

// sum_bins tr(a_bin * matrix_bin) for an x-constant matrix symbol.
double pairing_with_symbol(const AngularDefectSpectrum& spec, const std::vector<Mat3>& a);

// Cross pairings of Prop-6.2 type against sampled scalar time weights phi:
//   plus_minus  = <phi e^{+it/l} Eplus, e^{-it/l} Eminus>
//   resid_plus  = <phi lambda*resid, e^{+it/l} Eplus>
//   resid_minus = <phi lambda*resid, e^{-it/l} Eminus>
struct OrthogonalityReport {
  std::vector<std::string> names;
  std::vector<double> plus_minus;
  std::vector<double> resid_plus;
  std::vector<double> resid_minus;
  double max_cross = 0.0;
};

OrthogonalityReport orthogonality_check(const CorrectorPair& pair,
                                        const Series<VectorField>& scaled_residual,
                                        const std::vector<std::vector<double>>& testfns,
                                        const std::vector<std::string>& names, double lambda);

// Time-integrated sum over |k| <= R of |hat(lambda resid)(k)| (continuum
// Fourier-coefficient normalization). R must sit below the dealias cutoff.
double low_frequency_mass(const Series<VectorField>& scaled_residual, double R);

// JSON emission: {bins: [...], total_mass, window, surrogate: true}.
void write_spectrum(const AngularDefectSpectrum& spec, const std::string& path);

}  // namespace qnl
