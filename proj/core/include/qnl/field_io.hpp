// Flat binary field files and plain-text debug dumps.
//
// Layout: magic "QNLF", version, dim, N per axis, L per axis, representation
// flag, complex flag, component count, then row-major 64-bit floats per
// component (real plane, then imaginary plane when complex).
#pragma once

#include <string>

#include "qnl/field.hpp"

namespace qnl {

void write_field(const std::string& path, const ScalarField& f, bool complex_samples = false);
void write_field(const std::string& path, const VectorField& f, bool complex_samples = false);

ScalarField read_scalar_field(const std::string& path);
VectorField read_vector_field(const std::string& path);

// One value per line (re [tab im when complex]).
void write_text_dump(const std::string& path, const ScalarField& f, bool complex_samples = false);

// Write-temp-then-rename helper used by every emitter.
void atomic_write_text(const std::string& path, const std::string& contents);

}  // namespace qnl
