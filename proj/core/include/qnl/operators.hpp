// Differential operators, Leray projection, norms and mollification.
// All symbol actions are exact in Fourier space; results come back in the
// representation of the input field.
#pragma once

#include "qnl/field.hpp"
#include "qnl/fft.hpp"

namespace qnl {

// --- differential operators -------------------------------------------------

ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& f);

// Mean-zero inverse with mode 0 mapped to 0. Input mean must vanish to
// within 1e-12 of the field scale; otherwise CompatibilityError.
ScalarField inv_laplacian(const ScalarField& f);
VectorField inv_laplacian(const VectorField& f);

// Single partial derivative along one axis.
ScalarField partial(const ScalarField& f, int axis);

VectorField grad(const ScalarField& f);
ScalarField div(const VectorField& v);
VectorField grad_div(const VectorField& v);

// --- Leray projection -------------------------------------------------------

// Q = grad inv_laplacian div (gradient part), P = I - Q (divergence-free part).
VectorField leray_Q(const VectorField& v);
VectorField leray_P(const VectorField& v);

// --- reductions -------------------------------------------------------------

// Mean over the domain (works in either representation).
cplx mean(const ScalarField& f);

// L2 norm with the continuum normalization: ||1|| = sqrt(volume).
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);

double linf_norm(const ScalarField& f);
double linf_norm(const VectorField& v);

// L2 inner product <f,g> = integral of f * conj(g).
cplx inner(const ScalarField& f, const ScalarField& g);
cplx inner(const VectorField& f, const VectorField& g);

// Spectral quadrature of f over the domain.
cplx integral(const ScalarField& f);

// Sobolev-type norm per W^{s,p} = (I-Delta)^{-s/2} L^p with p in {2,4}.
// p=2: (sum (1+|k|^2)^s |F|^2)^{1/2} (continuum normalization);
// p=4: L4 physical norm of the field filtered by (1+|k|^2)^{s/2}.
double sobolev_norm(const ScalarField& f, double s, int p);
double sobolev_norm(const VectorField& f, double s, int p);

// --- filters ----------------------------------------------------------------

// 2/3-rule style mask: zero modes with |j| > dealias_fraction * N/2 per axis.
void dealias(ScalarField& f);
void dealias(VectorField& f);

// Gaussian low-pass multiplier exp(-(alpha|k|)^2/2); unit mass. alpha in (0,1).
ScalarField mollify(const ScalarField& f, double alpha);
VectorField mollify(const VectorField& f, double alpha);

// --- pointwise algebra ------------------------------------------------------

// Pointwise (physical) product with a dealias mask applied to the result.
ScalarField multiply_dealiased(const ScalarField& a, const ScalarField& b);

// Pointwise product without dealiasing.
ScalarField multiply(const ScalarField& a, const ScalarField& b);

// Complex conjugate (in physical space samples; Fourier input is toggled).
ScalarField conjugate(const ScalarField& f);
VectorField conjugate(const VectorField& f);

ScalarField real_part(const ScalarField& f);
VectorField real_part(const VectorField& f);
ScalarField imag_part(const ScalarField& f);
VectorField imag_part(const VectorField& f);

}  // namespace qnl
