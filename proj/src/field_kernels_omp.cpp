#include "nlwave/field_kernels.hpp"

#include <cmath>
#include <vector>

namespace nlwave::fk {

namespace {

// Reduce per fixed-size block in parallel, then fold the block partials in
// index order. The result does not depend on the number of threads.
template <class BlockOp>
double blocked_reduce(std::ptrdiff_t n, BlockOp block) {
  const std::ptrdiff_t nb = (n + reduction_block - 1) / reduction_block;
  if (nb <= 1) return block(0, n);
  std::vector<double> partial(static_cast<std::size_t>(nb));
  if (n < parallel_grain) {
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
      const std::ptrdiff_t lo = b * reduction_block;
      const std::ptrdiff_t hi = std::min(n, lo + reduction_block);
      partial[static_cast<std::size_t>(b)] = block(lo, hi);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::ptrdiff_t lo = b * reduction_block;
    const std::ptrdiff_t hi = std::min(n, lo + reduction_block);
    partial[static_cast<std::size_t>(b)] = block(lo, hi);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

double sum(std::span<const double> x) {
  return blocked_reduce(static_cast<std::ptrdiff_t>(x.size()),
                        [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
                          double s = 0.0;
                          for (std::ptrdiff_t i = lo; i < hi; ++i) s += x[i];
                          return s;
                        });
}

double sum_squares(std::span<const double> x) {
  return blocked_reduce(static_cast<std::ptrdiff_t>(x.size()),
                        [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
                          double s = 0.0;
                          for (std::ptrdiff_t i = lo; i < hi; ++i)
                            s += x[i] * x[i];
                          return s;
                        });
}

double dot(std::span<const double> x, std::span<const double> y) {
  return blocked_reduce(static_cast<std::ptrdiff_t>(x.size()),
                        [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
                          double s = 0.0;
                          for (std::ptrdiff_t i = lo; i < hi; ++i)
                            s += x[i] * y[i];
                          return s;
                        });
}

double max_abs(std::span<const double> x) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t nb = (n + reduction_block - 1) / reduction_block;
  if (n < parallel_grain) return ref::max_abs(x);
  std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::ptrdiff_t lo = b * reduction_block;
    const std::ptrdiff_t hi = std::min(n, lo + reduction_block);
    double m = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) m = std::max(m, std::fabs(x[i]));
    partial[static_cast<std::size_t>(b)] = m;
  }
  double m = 0.0;
  for (double p : partial) m = std::max(m, p);
  return m;
}

bool all_finite(std::span<const double> x) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t nb = (n + reduction_block - 1) / reduction_block;
  if (n < parallel_grain) return ref::all_finite(x);
  std::vector<char> ok(static_cast<std::size_t>(nb), 1);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::ptrdiff_t lo = b * reduction_block;
    const std::ptrdiff_t hi = std::min(n, lo + reduction_block);
    char good = 1;
    for (std::ptrdiff_t i = lo; i < hi; ++i)
      if (!std::isfinite(x[i])) good = 0;
    ok[static_cast<std::size_t>(b)] = good;
  }
  for (char g : ok)
    if (!g) return false;
  return true;
}

}  // namespace nlwave::fk
