#ifndef NLWAVE_TESTS_SUPPORT_HPP
#define NLWAVE_TESTS_SUPPORT_HPP

#include <cmath>
#include <numbers>
#include <random>

#include "nlwave/grid.hpp"
#include "nlwave/spectral.hpp"

namespace testsup {

inline constexpr double pi = std::numbers::pi;

// Random band-limited field: cosine/sine modes up to max_mode with
// coefficients in [-1, 1]. Zero-mean unless a constant offset is requested.
inline nlwave::RealField random_band_limited(const nlwave::GridPtr& g,
                                             std::mt19937& rng, int max_mode,
                                             double mean_offset = 0.0) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const double theta = 2.0 * pi / g->period();
  std::vector<double> a(max_mode + 1), b(max_mode + 1);
  for (int m = 1; m <= max_mode; ++m) {
    a[m] = coef(rng);
    b[m] = coef(rng);
  }
  std::vector<double> v(g->size(), mean_offset);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double x = g->nodes()[i];
    for (int m = 1; m <= max_mode; ++m)
      v[i] += a[m] * std::cos(m * theta * x) + b[m] * std::sin(m * theta * x);
  }
  return nlwave::RealField(g, std::move(v));
}

inline double sup_diff(const nlwave::RealField& a, const nlwave::RealField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

}  // namespace testsup

#endif
