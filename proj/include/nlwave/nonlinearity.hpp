#ifndef NLWAVE_NONLINEARITY_HPP
#define NLWAVE_NONLINEARITY_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace nlwave {

struct Box {
  double u1_lo, u1_hi, u2_lo, u2_hi;
  static Box symmetric(double r) { return {-r, r, -r, r}; }
};

// The nonlinear data of the problem: a potential G with G(0,0) = 0 and its
// gradient (grad1, grad2). The stress f_i = u_i + grad_i G is what the
// kernels convolve; the energy density is F = (u1^2+u2^2)/2 + G.
class NonlinearitySpec {
 public:
  std::string family = "custom";
  std::vector<double> params;
  std::function<double(double, double)> potential;  // G
  std::function<double(double, double)> grad1;      // dG/du1
  std::function<double(double, double)> grad2;      // dG/du2

  double density(double a, double b) const {
    return 0.5 * (a * a + b * b) + potential(a, b);
  }
  double stress1(double a, double b) const { return a + grad1(a, b); }
  double stress2(double a, double b) const { return b + grad2(a, b); }
};

// Isotropic medium: G = W(u1^2+u2^2)/2, grad_i = u_i W'(u1^2+u2^2). Exact by
// construction; requires W(0) = 0.
NonlinearitySpec isotropic_family(std::function<double(double)> W,
                                  std::function<double(double)> W_prime);

// G = k1 (u1^4 + u2^4)/4 + k2 u1^2 u2^2 / 2. k1 < 0, k2 = 0 is the designated
// focusing (blow-up) family; k1 > 0, k2 >= 0 the designated defocusing
// (global) family.
NonlinearitySpec quartic_family(double k1, double k2);

// G == 0: the free linear problem.
NonlinearitySpec zero_nonlinearity();

NonlinearitySpec custom_nonlinearity(std::function<double(double, double)> G,
                                     std::function<double(double, double)> g1,
                                     std::function<double(double, double)> g2,
                                     std::string family = "custom");

// Result of sampling one of the hypothesis predicates on a box. worst_margin
// is the most negative slack found (>= 0 everywhere means the predicate holds
// with room); fail means a violation beyond the absolute+relative tolerance.
struct HypothesisReport {
  std::string predicate;
  Box box{};
  std::size_t samples_per_axis = 0;
  double worst_margin = 0.0;
  double worst_u1 = 0.0, worst_u2 = 0.0;
  double tolerance = 0.0;  // effective tolerance at the worst sample
  bool pass = false;
};

// Central-difference check of the exactness condition
// d(grad1)/du2 = d(grad2)/du1 on a samples x samples grid.
HypothesisReport check_exactness(const NonlinearitySpec& nl, Box box,
                                 std::size_t samples = 201, double h = 1e-4,
                                 double tol = 1e-6);

// Growth condition for finite-time blow-up with parameter nu > 0:
// u1 f1 + u2 f2 <= 2 (1 + 2 nu) F on the box.
HypothesisReport check_growth_condition(const NonlinearitySpec& nl, double nu,
                                        Box box, std::size_t samples = 201);

// Potential lower bound for the smooth-kernel global regime:
// G(a,b) >= -k (a^2 + b^2).
HypothesisReport check_potential_lower_bound(const NonlinearitySpec& nl,
                                             double k, Box box,
                                             std::size_t samples = 201);

// Gradient power bound for the mildly-singular global regime:
// |grad_i|^{q_i} <= c [G + k (a^2+b^2)] for i = 1,2 with q_i > 1.
HypothesisReport check_gradient_power_bound(const NonlinearitySpec& nl,
                                            double c, double k, double q1,
                                            double q2, Box box,
                                            std::size_t samples = 201);

}  // namespace nlwave

#endif
