#ifndef NLWAVE_SPECTRAL_HPP
#define NLWAVE_SPECTRAL_HPP

#include <functional>
#include <span>
#include <vector>

#include "nlwave/grid.hpp"

namespace nlwave {

// Forward transform; coefficients are DFT/n so that a unit-amplitude single
// cosine mode has coefficients 1/2 at +/-k.
SpectralField forward(const RealField& u);
RealField inverse(const SpectralField& s);

// Evaluates a real frequency symbol on the grid's frequency set (FFT
// ordering). Throws std::domain_error if the symbol is non-finite anywhere.
std::vector<double> sample_symbol(const Grid& grid,
                                  const std::function<double(double)>& sigma);

// u -> F^{-1}[ sigma(xi) * F u ]. The symbol must be real and even so the
// result stays real; a large imaginary residual is rejected.
RealField apply_symbol(const RealField& u,
                       const std::function<double(double)>& sigma);
RealField apply_symbol(const RealField& u, std::span<const double> table);

// Norms use the continuum-consistent dx weighting: l2_norm^2 = dx * sum u_j^2,
// so grid refinement converges to the integrals on the periodic domain.
double l2_norm(const RealField& u);
double sup_norm(const RealField& u);
// Frequency-side Sobolev norm with the normalization that s = 0 reproduces
// l2_norm. Requires s >= 0.
double sobolev_norm(const RealField& u, double s);
double inner_product(const RealField& u, const RealField& v);
double mean(const RealField& u);

}  // namespace nlwave

#endif
