// Two-scale machinery for the fast plasma oscillation: modulation by
// e^{±it/lambda}, the sliding-window averaging operator H and its
// complement G, the primitive W of the oscillatory electric field, the
// velocity splitting u = v + W, corrector extraction E+/E-, and the
// residual field that the defect diagnostics consume.
//
// Phase convention (recorded in every emitted manifest): with
//   E(t) = (1/lambda) ( e^{+it/lambda} A + e^{-it/lambda} conj(A) ),
// extraction returns Eplus ~ A and Eminus ~ conj(A); the residual is
//   resid = E - (1/lambda)(e^{+it/lambda} Eplus + e^{-it/lambda} Eminus),
// and the oscillatory gradient velocity is reconstructed as
//   2 Im( e^{+it/lambda} Eplus ).
#pragma once

#include <string>
#include <vector>

#include "qnl/field.hpp"
#include "qnl/nsp.hpp"

namespace qnl {

inline constexpr const char* kPhaseConvention =
    "Eplus=H[lambda e^{-is/l}E]; resid=E-(e^{+it/l}Eplus+e^{-it/l}Eminus)/lambda; "
    "u_osc=2 Im(e^{+it/l}Eplus)";

// Pointwise multiplication of each sample by e^{-i sign t/lambda};
// sign=+1 is the "+" modulation (phase removal for the e^{+it/lambda}
// tone), sign=-1 its exact inverse.
Series<VectorField> modulate_T(const Series<VectorField>& s, double lambda, int sign);

// Sliding-window mean (1/2pi lambda) int_t^{t+2pi lambda}; trapezoidal
// quadrature with a linearly interpolated fractional right endpoint.
// Trailing windows that would leave the series shrink and are flagged.
struct WindowedAverage {
  Series<VectorField> value;
  std::vector<bool> shrunken;
};

WindowedAverage average_H(const Series<VectorField>& s, double lambda);

// G = identity - H on the samples where H is defined.
Series<VectorField> complement_G(const Series<VectorField>& s, const WindowedAverage& h);

// Cumulative trapezoidal primitive of E1 with W(0) = grad inv_lap
// div(rho0 u0) / lambda from the continuity equation.
Series<VectorField> build_W(const Series<VectorField>& E1, const PlasmaState& state0);

enum class ExtractionMethod { Windowed, Duhamel };

// Source history and initial data for the Duhamel route: the field
// equation lambda^2 d_tt E + E = F integrated per mode.
struct DuhamelData {
  Series<VectorField> source;  // F sampled at the E series stamps
  VectorField E0;
  VectorField Et0;
};

struct CorrectorPair {
  Series<VectorField> Eplus;   // complex gradient fields
  Series<VectorField> Eminus;
  std::vector<bool> shrunken;  // windowed method only
  ExtractionMethod method = ExtractionMethod::Windowed;
  double lambda = 0.0;
};

CorrectorPair extract_correctors(const Series<VectorField>& E, double lambda,
                                 ExtractionMethod method,
                                 const DuhamelData* duhamel = nullptr);

// v = u - W samplewise; stamps must align.
Series<VectorField> split_velocity(const Series<VectorField>& u, const Series<VectorField>& W);

// resid = E - (e^{+it/l}Eplus + e^{-it/l}Eminus)/lambda, plus the
// L2-bounded object lambda*resid.
struct ResidualFields {
  Series<VectorField> resid;
  Series<VectorField> scaled;  // lambda * resid
};

ResidualFields residual_field(const Series<VectorField>& E, const CorrectorPair& pair,
                              double lambda);

// Oscillatory velocity 2 Im(e^{+it/lambda} Eplus) at sample i.
VectorField reconstruct_oscillation(const CorrectorPair& pair, std::size_t i);

// Space-time quadrature <series, testfn> with a trapezoidal rule in t;
// test weights are samples of a smooth bump aligned with the series.
cplx weak_pairing(const Series<VectorField>& s, const Series<VectorField>& testfn);

// The whole decomposition of one trajectory, bundled.
struct OscillationDecomposition {
  Series<VectorField> E1;   // G E (oscillatory part)
  Series<VectorField> E2;   // H E (averaged part)
  Series<VectorField> W;
  Series<VectorField> v;    // u - W
  CorrectorPair pair;
  double lambda = 0.0;
};

// Bundle directory: field files plus a JSON manifest {lambda, times,
// flags, method, convention}.
void write_decomposition(const OscillationDecomposition& d, const std::string& directory);

}  // namespace qnl
