#include "nlwave/diagnostics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nlwave/spectral.hpp"

namespace nlwave {

namespace {

// |P w|^2 and <P a, P b> computed on the frequency side (Parseval) with the
// zero-mode admissibility check.
double check_zero_mode(const SpectralField& s, const char* what) {
  auto c = s.coefficients();
  double sumsq = 0.0;
  for (auto z : c) sumsq += std::norm(z);
  if (std::abs(c[0]) > zero_mode_tol * std::sqrt(sumsq))
    throw std::domain_error(std::string(what) +
                            " has a non-negligible mean; the kinetic weight "
                            "is undefined on the zero mode");
  return sumsq;
}

double weighted_sq(const RealField& w, std::span<const double> weight,
                   const char* what) {
  SpectralField s = forward(w);
  check_zero_mode(s, what);
  auto c = s.coefficients();
  double acc = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j)
    acc += weight[j] * weight[j] * std::norm(c[j]);
  return w.grid()->period() * acc;
}

double weighted_pairing(const RealField& a, const RealField& b,
                        std::span<const double> weight, const char* what) {
  SpectralField sa = forward(a);
  SpectralField sb = forward(b);
  check_zero_mode(sa, what);
  check_zero_mode(sb, what);
  auto ca = sa.coefficients();
  auto cb = sb.coefficients();
  double acc = 0.0;
  for (std::size_t j = 0; j < ca.size(); ++j)
    acc += weight[j] * weight[j] * (ca[j] * std::conj(cb[j])).real();
  return a.grid()->period() * acc;
}

double potential_integral(const RealField& u1, const RealField& u2,
                          const NonlinearitySpec& nl) {
  // 2 int F dx with the same dx-weighted nodal sum as l2_norm
  const auto a = u1.values();
  const auto b = u2.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += nl.density(a[i], b[i]);
  return 2.0 * u1.grid()->spacing() * acc;
}

}  // namespace

EnergyBreakdown energy(const State& s, const WaveOperator& k1,
                       const WaveOperator& k2, const NonlinearitySpec& nl) {
  const KernelTables t1 = k1.tables(*s.u1.grid());
  const KernelTables t2 = k2.tables(*s.u2.grid());
  EnergyBreakdown e;
  e.kinetic1 = weighted_sq(s.v1, t1.weight, "v1");
  e.kinetic2 = weighted_sq(s.v2, t2.weight, "v2");
  e.potential = potential_integral(s.u1, s.u2, nl);
  e.total = e.kinetic1 + e.kinetic2 + e.potential;
  return e;
}

double levine_bound(double phi0, double dphi0, double nu) {
  if (!(phi0 > 0.0) || !(dphi0 > 0.0) || !(nu > 0.0))
    throw std::invalid_argument(
        "levine_bound requires phi0 > 0, dphi0 > 0, nu > 0");
  return phi0 / (nu * dphi0);
}

BlowupCertificate build_certificate(const InitialData& init, double nu,
                                    const WaveOperator& k1,
                                    const WaveOperator& k2,
                                    const NonlinearitySpec& nl) {
  if (!(nu > 0.0))
    throw std::invalid_argument("certificate requires nu > 0");
  const KernelTables t1 = k1.tables(*init.u1.grid());
  const KernelTables t2 = k2.tables(*init.u2.grid());

  BlowupCertificate c;
  c.nu = nu;
  c.initial_energy = weighted_sq(init.v1, t1.weight, "v1") +
                     weighted_sq(init.v2, t2.weight, "v2") +
                     potential_integral(init.u1, init.u2, nl);
  c.pairing = weighted_pairing(init.u1, init.v1, t1.weight, "u1/v1") +
              weighted_pairing(init.u2, init.v2, t2.weight, "u2/v2");
  c.displacement = weighted_sq(init.u1, t1.weight, "u1") +
                   weighted_sq(init.u2, t2.weight, "u2");

  const double e0 = c.initial_energy;
  if (e0 < 0.0) {
    c.b = -e0;
    c.t0 = std::max(0.0, -c.pairing / c.b) + 1.0;
    c.status = CertificateStatus::NegativeEnergy;
  } else if (e0 > 0.0 && c.pairing * c.pairing < e0 * c.displacement) {
    c.b = -e0;
    // t0^2 strictly between pairing^2/E0^2 and displacement/E0; the negative
    // root makes Phi'(0) = 2(pairing - E0 t0) > 0 for either sign of pairing.
    const double lo = c.pairing * c.pairing / (e0 * e0);
    const double hi = c.displacement / e0;
    c.t0 = -std::sqrt(0.5 * (lo + hi));
    c.status = CertificateStatus::PositiveEnergy;
  } else {
    c.status = CertificateStatus::NotCertified;
    return c;
  }

  c.phi0 = c.displacement + c.b * c.t0 * c.t0;
  c.dphi0 = 2.0 * c.pairing + 2.0 * c.b * c.t0;
  if (!(c.phi0 > 0.0) || !(c.dphi0 > 0.0)) {
    // Construction guarantees positivity; rounding at the boundary of the
    // admissible region can void it, in which case there is no certificate.
    c.status = CertificateStatus::NotCertified;
    c.levine_bound = 0.0;
    return c;
  }
  c.levine_bound = levine_bound(c.phi0, c.dphi0, nu);
  return c;
}

std::vector<double> phi_series(const SimulationResult& result,
                               const BlowupCertificate& cert,
                               const WaveOperator& k1, const WaveOperator& k2) {
  if (result.snapshots.empty()) return {};
  const GridPtr& g = result.snapshots.front().u1.grid();
  const KernelTables t1 = k1.tables(*g);
  const KernelTables t2 = k2.tables(*g);
  std::vector<double> phi;
  phi.reserve(result.snapshots.size());
  for (const Snapshot& s : result.snapshots) {
    const double tau = s.t + cert.t0;
    phi.push_back(weighted_sq(s.u1, t1.weight, "u1") +
                  weighted_sq(s.u2, t2.weight, "u2") + cert.b * tau * tau);
  }
  return phi;
}

std::size_t concavity_resolved_prefix(std::span<const double> phi,
                                      double max_ratio) {
  std::size_t k = 1;
  while (k < phi.size()) {
    const double prev = std::fabs(phi[k - 1]);
    const double cur = std::fabs(phi[k]);
    if (cur > max_ratio * std::max(prev, 1e-300)) break;
    ++k;
  }
  return k;
}

ConcavityReport verify_concavity(std::span<const double> phi, double nu,
                                 double dt, double tol) {
  if (phi.size() < 5)
    throw std::invalid_argument("concavity check needs at least 5 points");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  ConcavityReport rep;
  rep.pass = true;
  bool first = true;
  for (std::size_t k = 1; k + 1 < phi.size(); ++k) {
    const double d1 = (phi[k + 1] - phi[k - 1]) / (2.0 * dt);
    const double d2 = (phi[k + 1] - 2.0 * phi[k] + phi[k - 1]) / (dt * dt);
    const double margin = phi[k] * d2 - (1.0 + nu) * d1 * d1;
    const double scale = std::max(1.0, phi[k] * phi[k] / (dt * dt));
    const double scaled = margin / scale;
    if (first || scaled < rep.worst_scaled) {
      first = false;
      rep.worst_scaled = scaled;
      rep.worst_margin = margin;
      rep.worst_index = k;
    }
    if (scaled < -tol) rep.pass = false;
  }
  return rep;
}

}  // namespace nlwave
