#pragma once

#include "tomo/kernels.hpp"
#include "tomo/phase_space.hpp"
#include "tomo/tomogram.hpp"

namespace tomo {

/// Moyal (Groenewald) product of two Weyl symbols sampled on the same grid,
/// evaluated as the twisted convolution of their Fourier transforms on the
/// grid's DFT frequencies with |frequency| <= band. Throws IncompatibleLattices
/// when the grids differ.
PhaseSpaceFunction groenewald_product(const PhaseSpaceFunction& f, const PhaseSpaceFunction& g,
                                      double band = 12.0);

/// (A * B)(x) = int K(x1, x2, x) A(x1) B(x2) dx1 dx2 for tomograms of the
/// kernel's scheme, evaluated in factored order: the x1 and x2 integrals
/// against the quantizers map A and B back to Weyl symbols, the Groenewald
/// integral is the Moyal product, and the dequantizer maps the result back
/// onto A's lattice. Symplectic and quadratic schemes are supported.
/// Throws IncompatibleLattices when A and B are sampled differently.
Tomogram star_product(const Tomogram& a, const Tomogram& b, const KernelEvaluator& k);

/// Mean over directions (or centres) of int W(X) dX; for the tomogram of an
/// operator A this is Tr A.
cplx star_trace(const Tomogram& w);

}  // namespace tomo
