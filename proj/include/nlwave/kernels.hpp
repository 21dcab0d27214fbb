#ifndef NLWAVE_KERNELS_HPP
#define NLWAVE_KERNELS_HPP

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nlwave/grid.hpp"

namespace nlwave {

// Relative tolerance on the mean below which a field counts as zero-mean for
// the kinetic-weight operator (undefined on the zero mode).
inline constexpr double zero_mode_tol = 1e-10;

enum class KernelFamily { Exponential, HigherOrder, Gaussian, MildlySingular, Custom };

// A convolution kernel described by its frequency symbol together with the
// claimed decay certificate (r, C): 0 <= symbol(xi) <= C (1+xi^2)^(-r/2).
// The symbol must be even and nonnegative; this is enforced wherever it is
// sampled on a grid.
struct KernelSpec {
  KernelFamily family = KernelFamily::Custom;
  std::string name = "custom";
  std::vector<double> params;
  std::function<double(double)> symbol;
  double decay_exponent = 2.0;  // r
  double decay_constant = 1.0;  // C
};

// symbol (1+xi^2)^{-1}; Green's function of 1 - Dxx. Reduces the system to
// the coupled improved Boussinesq equations.
KernelSpec exponential_kernel();

// symbol (1 + a xi^2 + b xi^4)^{-1}; Green's function of 1 - a Dxx + b Dxxxx.
// Reduces the system to the coupled higher-order Boussinesq equations.
KernelSpec higher_order_kernel(double a, double b);

// symbol exp(-width xi^2); C-infinity kernel satisfying the decay bound for
// every exponent. Certified here with r = 4 and the exact fitted constant.
KernelSpec gaussian_kernel(double width);

KernelSpec custom_kernel(std::function<double(double)> symbol, double r,
                         double C, std::string name = "custom");

struct DecayReport {
  bool pass = false;
  // Most negative slack over the samples: min(bound - symbol, symbol).
  // Negative beyond tolerance means the certificate fails.
  double worst_margin = 0.0;
  double worst_frequency = 0.0;
  double worst_symbol = 0.0;
  double worst_bound = 0.0;
  std::size_t checked = 0;
};

// Pointwise check of 0 <= symbol(xi) <= C (1+xi^2)^(-r/2) over the sample
// set. Non-finite samples are filtered out; an empty remainder is an error.
DecayReport verify_decay(const KernelSpec& k, double r, double C,
                         std::span<const double> frequencies);

// w -> (beta * w)_xx, the multiplier -xi^2 symbol(xi).
RealField convolved_dxx(const KernelSpec& k, const RealField& w);

// The kinetic-energy weight operator, multiplier |xi|^{-1} symbol(xi)^{-1/2}
// on nonzero modes. Requires w to be zero-mean within zero_mode_tol; the zero
// mode of the result is zero.
RealField kinetic_weight(const KernelSpec& k, const RealField& w);
// Inverse weight, multiplier |xi| symbol(xi)^{1/2}; annihilates the zero
// mode, so weight_inv(weight(w)) = w exactly on zero-mean fields.
RealField kinetic_weight_inv(const KernelSpec& k, const RealField& w);

// Applies a precompiled weight table (KernelTables::weight) with the same
// zero-mode admissibility check as kinetic_weight.
RealField apply_kinetic_weight_table(const RealField& w,
                                     std::span<const double> weight);

// Radially smooth kernel gamma(|x|) with a derivative jump at the origin:
// gamma(0) > 0, gamma'(0) < 0, gamma'' integrable and bounded. For these,
// (beta * w)_xx = gamma'' * w - lambda w with lambda = -2 gamma'(0) > 0;
// the Dirac part of beta'' is absorbed exactly by the -lambda w term.
class SingularKernelDescriptor {
 public:
  SingularKernelDescriptor(std::function<double(double)> gamma_second,
                           double gamma_prime_at_zero, double gamma_at_zero);

  double lambda() const { return -2.0 * gamma_prime_at_zero_; }
  double gamma_prime_at_zero() const { return gamma_prime_at_zero_; }
  double gamma_at_zero() const { return gamma_at_zero_; }
  const std::function<double(double)>& gamma_second() const {
    return gamma_second_;
  }

  // Trapezoid cosine transform of gamma'' over the grid's period window,
  // sampled at the grid frequencies (FFT ordering). Computed once per
  // (descriptor, grid) pair and cached; safe for concurrent readers.
  const std::vector<double>& gamma_second_transform(const Grid& grid) const;

 private:
  std::function<double(double)> gamma_second_;
  double gamma_prime_at_zero_;
  double gamma_at_zero_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

// gamma(rho) = exp(-rho)/2, the Green's function of 1 - Dxx; lambda = 1.
SingularKernelDescriptor exponential_descriptor();

// w -> gamma'' * w - lambda w, the mildly singular realization of
// (beta * w)_xx.
RealField singular_convolved_dxx(const SingularKernelDescriptor& d,
                                 const RealField& w);

// Frequency tables for one kernel on one grid, precomputed for the solver
// and diagnostics hot paths.
struct KernelTables {
  std::vector<double> dxx;         // -xi^2 symbol(xi)
  std::vector<double> weight;      // |xi|^{-1} symbol^{-1/2}, zero-mode slot 0
  std::vector<double> weight_inv;  // |xi| symbol^{1/2}
};

// One component's convolution operator, either a frequency-symbol kernel or
// a mildly singular descriptor.
class WaveOperator {
 public:
  WaveOperator(KernelSpec spec) : impl_(std::move(spec)) {}
  WaveOperator(SingularKernelDescriptor d) : impl_(std::move(d)) {}

  bool is_singular() const {
    return std::holds_alternative<SingularKernelDescriptor>(impl_);
  }
  const KernelSpec* spec() const { return std::get_if<KernelSpec>(&impl_); }
  const SingularKernelDescriptor* descriptor() const {
    return std::get_if<SingularKernelDescriptor>(&impl_);
  }

  // Evolution multiplier -xi^2 symbol(xi) only; defined for every kernel in
  // the class.
  std::vector<double> dxx_table(const Grid& grid) const;
  // All three tables; throws if the symbol vanishes at a nonzero grid
  // frequency, where the kinetic weight is undefined.
  KernelTables tables(const Grid& grid) const;
  RealField apply_dxx(const RealField& w) const;

 private:
  std::variant<KernelSpec, SingularKernelDescriptor> impl_;
};

}  // namespace nlwave

#endif
