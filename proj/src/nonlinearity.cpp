#include "nlwave/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace nlwave {

namespace {

constexpr double kAbsTol = 1e-9;
constexpr double kRelTol = 1e-9;

// Shared sampling loop: slack(a, b) must be >= 0 when the predicate holds;
// scale(a, b) sets the relative part of the tolerance.
template <class Slack, class Scale>
HypothesisReport sample_predicate(std::string predicate, Box box,
                                  std::size_t samples, Slack slack,
                                  Scale scale) {
  if (samples < 1)
    throw std::invalid_argument("predicate sampling requires samples >= 1");
  HypothesisReport rep;
  rep.predicate = std::move(predicate);
  rep.box = box;
  rep.samples_per_axis = samples;
  rep.pass = true;
  bool first = true;
  const double d1 =
      samples > 1 ? (box.u1_hi - box.u1_lo) / double(samples - 1) : 0.0;
  const double d2 =
      samples > 1 ? (box.u2_hi - box.u2_lo) / double(samples - 1) : 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double a = box.u1_lo + d1 * double(i);
    for (std::size_t j = 0; j < samples; ++j) {
      const double b = box.u2_lo + d2 * double(j);
      const double s = slack(a, b);
      const double tol = kAbsTol + kRelTol * scale(a, b);
      if (first || s < rep.worst_margin) {
        first = false;
        rep.worst_margin = s;
        rep.worst_u1 = a;
        rep.worst_u2 = b;
        rep.tolerance = tol;
      }
      if (s < -tol) rep.pass = false;
    }
  }
  return rep;
}

}  // namespace

NonlinearitySpec isotropic_family(std::function<double(double)> W,
                                  std::function<double(double)> W_prime) {
  if (!W || !W_prime)
    throw std::invalid_argument("isotropic family requires W and W'");
  NonlinearitySpec nl;
  nl.family = "isotropic";
  nl.potential = [W](double a, double b) { return 0.5 * W(a * a + b * b); };
  nl.grad1 = [W_prime](double a, double b) { return a * W_prime(a * a + b * b); };
  nl.grad2 = [W_prime](double a, double b) { return b * W_prime(a * a + b * b); };
  return nl;
}

NonlinearitySpec quartic_family(double k1, double k2) {
  NonlinearitySpec nl;
  nl.family = "quartic";
  nl.params = {k1, k2};
  nl.potential = [k1, k2](double a, double b) {
    return 0.25 * k1 * (a * a * a * a + b * b * b * b) +
           0.5 * k2 * a * a * b * b;
  };
  nl.grad1 = [k1, k2](double a, double b) { return k1 * a * a * a + k2 * a * b * b; };
  nl.grad2 = [k1, k2](double a, double b) { return k1 * b * b * b + k2 * a * a * b; };
  return nl;
}

NonlinearitySpec zero_nonlinearity() {
  NonlinearitySpec nl = quartic_family(0.0, 0.0);
  nl.family = "zero";
  nl.params.clear();
  return nl;
}

NonlinearitySpec custom_nonlinearity(std::function<double(double, double)> G,
                                     std::function<double(double, double)> g1,
                                     std::function<double(double, double)> g2,
                                     std::string family) {
  if (!G || !g1 || !g2)
    throw std::invalid_argument("custom nonlinearity requires G, g1, g2");
  NonlinearitySpec nl;
  nl.family = std::move(family);
  nl.potential = std::move(G);
  nl.grad1 = std::move(g1);
  nl.grad2 = std::move(g2);
  return nl;
}

HypothesisReport check_exactness(const NonlinearitySpec& nl, Box box,
                                 std::size_t samples, double h, double tol) {
  if (!(h > 0.0)) throw std::invalid_argument("exactness check requires h > 0");
  auto rep = sample_predicate(
      "exactness", box, samples,
      [&](double a, double b) {
        const double d12 = (nl.grad1(a, b + h) - nl.grad1(a, b - h)) / (2 * h);
        const double d21 = (nl.grad2(a + h, b) - nl.grad2(a - h, b)) / (2 * h);
        return -std::fabs(d12 - d21);
      },
      [](double, double) { return 0.0; });
  // Mixed partials agree within the caller's tolerance, not the sampler's.
  rep.tolerance = tol;
  rep.pass = rep.worst_margin >= -tol;
  return rep;
}

HypothesisReport check_growth_condition(const NonlinearitySpec& nl, double nu,
                                        Box box, std::size_t samples) {
  if (!(nu > 0.0))
    throw std::invalid_argument("growth condition requires nu > 0");
  return sample_predicate(
      "growth_condition", box, samples,
      [&](double a, double b) {
        const double lhs = a * nl.stress1(a, b) + b * nl.stress2(a, b);
        const double rhs = 2.0 * (1.0 + 2.0 * nu) * nl.density(a, b);
        return rhs - lhs;
      },
      [&](double a, double b) {
        return std::fabs(a * nl.stress1(a, b)) + std::fabs(b * nl.stress2(a, b)) +
               2.0 * (1.0 + 2.0 * nu) * std::fabs(nl.density(a, b));
      });
}

HypothesisReport check_potential_lower_bound(const NonlinearitySpec& nl,
                                             double k, Box box,
                                             std::size_t samples) {
  if (k < 0.0)
    throw std::invalid_argument("potential lower bound requires k >= 0");
  return sample_predicate(
      "potential_lower_bound", box, samples,
      [&](double a, double b) {
        return nl.potential(a, b) + k * (a * a + b * b);
      },
      [&](double a, double b) {
        return std::fabs(nl.potential(a, b)) + k * (a * a + b * b);
      });
}

HypothesisReport check_gradient_power_bound(const NonlinearitySpec& nl,
                                            double c, double k, double q1,
                                            double q2, Box box,
                                            std::size_t samples) {
  if (!(c > 0.0))
    throw std::invalid_argument("gradient power bound requires c > 0");
  if (k < 0.0)
    throw std::invalid_argument("gradient power bound requires k >= 0");
  if (!(q1 > 1.0) || !(q2 > 1.0))
    throw std::invalid_argument("gradient power bound requires q1, q2 > 1");
  return sample_predicate(
      "gradient_power_bound", box, samples,
      [&](double a, double b) {
        const double rhs =
            c * (nl.potential(a, b) + k * (a * a + b * b));
        const double s1 = rhs - std::pow(std::fabs(nl.grad1(a, b)), q1);
        const double s2 = rhs - std::pow(std::fabs(nl.grad2(a, b)), q2);
        return std::min(s1, s2);
      },
      [&](double a, double b) {
        return c * (std::fabs(nl.potential(a, b)) + k * (a * a + b * b)) +
               std::pow(std::fabs(nl.grad1(a, b)), q1) +
               std::pow(std::fabs(nl.grad2(a, b)), q2);
      });
}

}  // namespace nlwave
