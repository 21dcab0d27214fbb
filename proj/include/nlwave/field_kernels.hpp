#ifndef NLWAVE_FIELD_KERNELS_HPP
#define NLWAVE_FIELD_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <span>

// Low-level array kernels behind the field operations. The primary versions
// (nlwave::fk) run the elementwise loops under OpenMP once the array is long
// enough to amortize the fork, and compute reductions in fixed-size blocks
// combined in index order, so results are identical for any thread count.
// nlwave::fk::ref holds the plain serial loops used as the reference in
// tests and in the benchmark.
namespace nlwave::fk {

// Arrays shorter than this take the serial path; fork/join overhead
// dominates below a few tens of thousands of elements.
inline constexpr std::ptrdiff_t parallel_grain = 32768;

// Block length for deterministic reductions.
inline constexpr std::ptrdiff_t reduction_block = 1024;

template <class F>
void map(std::span<const double> x, std::span<double> out, F f) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  if (n < parallel_grain) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(x[i]);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(x[i]);
}

template <class F>
void map2(std::span<const double> a, std::span<const double> b,
          std::span<double> out, F f) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
  if (n < parallel_grain) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(a[i], b[i]);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(a[i], b[i]);
}

// out = base + c*k
inline void add_scaled(std::span<const double> base, double c,
                       std::span<const double> k, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(base.size());
  if (n < parallel_grain) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = base[i] + c * k[i];
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = base[i] + c * k[i];
}

// out = u + (dt/6)(k1 + 2 k2 + 2 k3 + k4)
inline void rk4_combine(std::span<const double> u, std::span<const double> k1,
                        std::span<const double> k2, std::span<const double> k3,
                        std::span<const double> k4, double dt,
                        std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
  const double c = dt / 6.0;
  if (n < parallel_grain) {
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[i] = u[i] + c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[i] = u[i] + c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

inline void scale_by_table(std::span<std::complex<double>> c,
                           std::span<const double> table) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(c.size());
  if (n < parallel_grain) {
    for (std::ptrdiff_t i = 0; i < n; ++i) c[i] *= table[i];
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) c[i] *= table[i];
}

double sum(std::span<const double> x);
double sum_squares(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);
bool all_finite(std::span<const double> x);

namespace ref {

template <class F>
void map(std::span<const double> x, std::span<double> out, F f) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
}

template <class F>
void map2(std::span<const double> a, std::span<const double> b,
          std::span<double> out, F f) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i], b[i]);
}

inline void add_scaled(std::span<const double> base, double c,
                       std::span<const double> k, std::span<double> out) {
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + c * k[i];
}

inline void rk4_combine(std::span<const double> u, std::span<const double> k1,
                        std::span<const double> k2, std::span<const double> k3,
                        std::span<const double> k4, double dt,
                        std::span<double> out) {
  const double c = dt / 6.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = u[i] + c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

double sum(std::span<const double> x);
double sum_squares(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);
bool all_finite(std::span<const double> x);

}  // namespace ref

}  // namespace nlwave::fk

#endif
