// Discrete Fourier transform service for fields.
//
// Normalization: forward transform is the plain sum  F(k) = sum_x f(x) e^{-ik.x},
// inverse divides by N^d. A constant field c therefore has mass c*N^d at mode 0.
#pragma once

#include "qnl/field.hpp"

namespace qnl {

// Toggle representation in place.
void transform(ScalarField& f);
void transform(VectorField& f);

// Copies in a requested representation.
ScalarField in_rep(const ScalarField& f, Rep rep);
VectorField in_rep(const VectorField& f, Rep rep);

}  // namespace qnl
