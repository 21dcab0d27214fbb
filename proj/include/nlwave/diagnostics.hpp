#ifndef NLWAVE_DIAGNOSTICS_HPP
#define NLWAVE_DIAGNOSTICS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "nlwave/kernels.hpp"
#include "nlwave/nonlinearity.hpp"
#include "nlwave/solver.hpp"

namespace nlwave {

// E = |P1 v1|^2 + |P2 v2|^2 + 2 int F(u1,u2) dx, constant along solutions
// when the exactness condition holds and the velocities are zero-mean.
struct EnergyBreakdown {
  double kinetic1 = 0.0;
  double kinetic2 = 0.0;
  double potential = 0.0;
  double total = 0.0;
};

EnergyBreakdown energy(const State& s, const WaveOperator& k1,
                       const WaveOperator& k2, const NonlinearitySpec& nl);

enum class CertificateStatus { NegativeEnergy, PositiveEnergy, NotCertified };

// A recorded choice of (nu, b, t0) with the verified sign data that makes the
// concavity criterion applicable to
//   Phi(t) = |P1 u1|^2 + |P2 u2|^2 + b (t + t0)^2.
struct BlowupCertificate {
  CertificateStatus status = CertificateStatus::NotCertified;
  double nu = 0.0;
  double b = 0.0;
  double t0 = 0.0;
  double pairing = 0.0;        // <P1 u1(0), P1 v1(0)> + <P2 u2(0), P2 v2(0)>
  double displacement = 0.0;   // |P1 u1(0)|^2 + |P2 u2(0)|^2
  double initial_energy = 0.0; // E(0)
  double phi0 = 0.0;           // Phi(0) for the chosen (b, t0)
  double dphi0 = 0.0;          // Phi'(0) = 2 pairing + 2 b t0
  double levine_bound = 0.0;   // phi0 / (nu dphi0); 0 if not certified
};

// Negative-energy branch: E(0) < 0 certifies with b = -E(0) and
// t0 = max(0, -pairing/b) + 1. Positive-energy branch: E(0) > 0 certifies
// when pairing^2 < E(0) * displacement, with b = -E(0) and t0 the negative
// root of the midpoint of (pairing^2/E0^2, displacement/E0). Anything else
// returns NotCertified. The growth condition for nu is the caller's
// responsibility (check_growth_condition on a box covering the run).
BlowupCertificate build_certificate(const InitialData& init, double nu,
                                    const WaveOperator& k1,
                                    const WaveOperator& k2,
                                    const NonlinearitySpec& nl);

// Upper bound on the blow-up time of a functional with phi(0) = phi0 > 0,
// phi'(0) = dphi0 > 0 satisfying the concavity condition for nu > 0:
// t1 <= phi0 / (nu * dphi0).
double levine_bound(double phi0, double dphi0, double nu);

// Phi evaluated at every snapshot of a run.
std::vector<double> phi_series(const SimulationResult& result,
                               const BlowupCertificate& cert,
                               const WaveOperator& k1, const WaveOperator& k2);

struct ConcavityReport {
  bool pass = false;
  double worst_margin = 0.0;  // min of phi phi'' - (1+nu) phi'^2 (raw)
  double worst_scaled = 0.0;  // worst margin divided by its rounding scale
  std::size_t worst_index = 0;
};

// Finite-difference check of phi phi'' - (1+nu) (phi')^2 >= 0 at interior
// points of a uniformly spaced series (spacing dt, length >= 5). The margin
// is compared against -tol * max(1, phi^2/dt^2) to absorb rounding.
ConcavityReport verify_concavity(std::span<const double> phi, double nu,
                                 double dt, double tol = 1e-9);

// Length of the maximal prefix on which central differences still resolve
// the series: consecutive samples may grow by at most max_ratio. Near a
// blow-up the tail violates this and its finite-difference margins carry
// only truncation error.
std::size_t concavity_resolved_prefix(std::span<const double> phi,
                                      double max_ratio = 1.004);

}  // namespace nlwave

#endif
