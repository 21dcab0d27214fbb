#include "nlwave/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "fft_internal.hpp"
#include "nlwave/spectral.hpp"

namespace nlwave {

namespace {

// Samples the kernel symbol on the grid and enforces the class invariants:
// finite, nonnegative, even.
std::vector<double> sample_kernel_symbol(const KernelSpec& k,
                                         const Grid& grid) {
  if (!k.symbol) throw std::invalid_argument("kernel has no symbol");
  std::vector<double> s = sample_symbol(grid, k.symbol);
  const auto& xi = grid.frequencies();
  const std::size_t n = s.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (s[j] < 0.0)
      throw std::domain_error("kernel symbol is negative at frequency " +
                              std::to_string(xi[j]));
  }
  for (std::size_t j = 1; j < n / 2; ++j) {
    const double a = s[j], b = s[n - j];
    if (std::fabs(a - b) > 1e-12 * std::max(1.0, std::fabs(a)))
      throw std::domain_error("kernel symbol is not even");
  }
  return s;
}

KernelTables tables_from_dxx(std::vector<double> dxx, const Grid& grid) {
  const auto& xi = grid.frequencies();
  const std::size_t n = dxx.size();
  KernelTables t;
  t.weight.assign(n, 0.0);
  t.weight_inv.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (xi[j] == 0.0) continue;  // weight zeroes the zero mode
    const double w2 = -dxx[j];   // xi^2 symbol(xi)
    if (!(w2 > 0.0))
      throw std::domain_error(
          "kernel symbol vanishes at grid frequency " + std::to_string(xi[j]) +
          "; the kinetic weight is undefined there");
    t.weight_inv[j] = std::sqrt(w2);
    t.weight[j] = 1.0 / t.weight_inv[j];
  }
  t.dxx = std::move(dxx);
  return t;
}

}  // namespace

KernelSpec exponential_kernel() {
  KernelSpec k;
  k.family = KernelFamily::Exponential;
  k.name = "exponential";
  k.symbol = [](double xi) { return 1.0 / (1.0 + xi * xi); };
  k.decay_exponent = 2.0;
  k.decay_constant = 1.0;
  return k;
}

KernelSpec higher_order_kernel(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("higher_order_kernel requires a > 0 and b > 0");
  KernelSpec k;
  k.family = KernelFamily::HigherOrder;
  k.name = "higher_order";
  k.params = {a, b};
  k.symbol = [a, b](double xi) {
    const double s = xi * xi;
    return 1.0 / (1.0 + a * s + b * s * s);
  };
  k.decay_exponent = 4.0;
  // C = sup_s (1+s)^2 / (1 + a s + b s^2); the derivative vanishes where
  // 2 - a + (a - 2b) s = 0, i.e. s* = (2 - a) / (2b - a).
  double c = std::max(1.0, 1.0 / b);
  if (a != 2.0 * b) {
    const double s_star = (2.0 - a) / (2.0 * b - a);
    if (s_star > 0.0 && std::isfinite(s_star)) {
      const double v = (1.0 + s_star) * (1.0 + s_star) /
                       (1.0 + a * s_star + b * s_star * s_star);
      c = std::max(c, v);
    }
  }
  k.decay_constant = c;
  return k;
}

KernelSpec gaussian_kernel(double width) {
  if (!(width > 0.0))
    throw std::invalid_argument("gaussian_kernel requires width > 0");
  KernelSpec k;
  k.family = KernelFamily::Gaussian;
  k.name = "gaussian";
  k.params = {width};
  k.symbol = [width](double xi) { return std::exp(-width * xi * xi); };
  k.decay_exponent = 4.0;
  // C = sup_s exp(-w s)(1+s)^2, attained at s = 2/w - 1 when w < 2.
  k.decay_constant =
      width >= 2.0 ? 1.0 : std::exp(width - 2.0) * 4.0 / (width * width);
  return k;
}

KernelSpec custom_kernel(std::function<double(double)> symbol, double r,
                         double C, std::string name) {
  if (!symbol) throw std::invalid_argument("custom kernel requires a symbol");
  KernelSpec k;
  k.family = KernelFamily::Custom;
  k.name = std::move(name);
  k.symbol = std::move(symbol);
  k.decay_exponent = r;
  k.decay_constant = C;
  return k;
}

DecayReport verify_decay(const KernelSpec& k, double r, double C,
                         std::span<const double> frequencies) {
  if (!k.symbol) throw std::invalid_argument("kernel has no symbol");
  DecayReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  bool violated = false;
  for (double xi : frequencies) {
    if (!std::isfinite(xi)) continue;
    const double value = k.symbol(xi);
    const double bound = C * std::pow(1.0 + xi * xi, -r / 2.0);
    // Slack of both inequalities 0 <= value <= bound.
    const double slack = std::min(bound - value, value);
    ++rep.checked;
    if (slack < rep.worst_margin) {
      rep.worst_margin = slack;
      rep.worst_frequency = xi;
      rep.worst_symbol = value;
      rep.worst_bound = bound;
    }
    if (slack < -1e-12 * std::max(1.0, std::fabs(bound))) violated = true;
  }
  if (rep.checked == 0)
    throw std::invalid_argument("verify_decay requires a nonempty sample set");
  rep.pass = !violated;
  return rep;
}

RealField convolved_dxx(const KernelSpec& k, const RealField& w) {
  std::vector<double> s = sample_kernel_symbol(k, *w.grid());
  const auto& xi = w.grid()->frequencies();
  for (std::size_t j = 0; j < s.size(); ++j) s[j] *= -xi[j] * xi[j];
  return apply_symbol(w, s);
}

RealField apply_kinetic_weight_table(const RealField& w,
                                     std::span<const double> weight) {
  const std::size_t n = w.size();
  if (weight.size() != n)
    throw std::invalid_argument("weight table length does not match grid");
  detail::ComplexBuffer buf(n);
  for (std::size_t i = 0; i < n; ++i) {
    buf.re(i) = w[i];
    buf.im(i) = 0.0;
  }
  const auto& plans = w.grid()->plans();
  plans.forward(buf.data());
  const double inv_n = 1.0 / static_cast<double>(n);
  double sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    buf.re(i) *= inv_n;
    buf.im(i) *= inv_n;
    sumsq += buf.re(i) * buf.re(i) + buf.im(i) * buf.im(i);
  }
  const double zero_mode = std::hypot(buf.re(0), buf.im(0));
  if (zero_mode > zero_mode_tol * std::sqrt(sumsq))
    throw std::domain_error(
        "kinetic weight applied to a field with non-negligible mean");
  for (std::size_t i = 0; i < n; ++i) {
    buf.re(i) *= weight[i];
    buf.im(i) *= weight[i];
  }
  plans.backward(buf.data());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = buf.re(i);
  return RealField(w.grid(), std::move(out));
}

RealField kinetic_weight(const KernelSpec& k, const RealField& w) {
  KernelTables t = WaveOperator(k).tables(*w.grid());
  return apply_kinetic_weight_table(w, t.weight);
}

RealField kinetic_weight_inv(const KernelSpec& k, const RealField& w) {
  // |xi| symbol^{1/2} is defined for every kernel in the class, including
  // symbols with isolated zeros, so no positivity gate here.
  std::vector<double> s = sample_kernel_symbol(k, *w.grid());
  const auto& xi = w.grid()->frequencies();
  for (std::size_t j = 0; j < s.size(); ++j)
    s[j] = std::fabs(xi[j]) * std::sqrt(s[j]);
  return apply_symbol(w, s);
}

struct SingularKernelDescriptor::Cache {
  std::mutex m;
  std::map<std::pair<std::size_t, double>, std::vector<double>> tables;
};

SingularKernelDescriptor::SingularKernelDescriptor(
    std::function<double(double)> gamma_second, double gamma_prime_at_zero,
    double gamma_at_zero)
    : gamma_second_(std::move(gamma_second)),
      gamma_prime_at_zero_(gamma_prime_at_zero),
      gamma_at_zero_(gamma_at_zero),
      cache_(std::make_shared<Cache>()) {
  if (!gamma_second_)
    throw std::invalid_argument("descriptor requires gamma''");
  if (!(gamma_prime_at_zero_ < 0.0))
    throw std::invalid_argument(
        "mildly singular kernel requires gamma'(0) < 0 (lambda > 0)");
  if (!(gamma_at_zero_ > 0.0))
    throw std::invalid_argument("mildly singular kernel requires gamma(0) > 0");
}

const std::vector<double>& SingularKernelDescriptor::gamma_second_transform(
    const Grid& grid) const {
  const std::pair<std::size_t, double> key{grid.size(), grid.period()};
  std::lock_guard<std::mutex> lock(cache_->m);
  auto it = cache_->tables.find(key);
  if (it != cache_->tables.end()) return it->second;

  const std::size_t n = grid.size();
  const double L = grid.period();
  // Trapezoid rule over the period window at a step much finer than the grid
  // spacing; on the periodic window the rule is an FFT of the refined
  // sampling, and the refinement keeps the aliasing error at the grid
  // frequencies below ~1e-9 for kernels with xi^-2 symbol decay.
  std::size_t nq = std::max<std::size_t>(std::size_t{1} << 19, 16 * n);
  nq = std::bit_ceil(nq);

  double* in = fftw_alloc_real(nq);
  fftw_complex* out = fftw_alloc_complex(nq / 2 + 1);
  const double dq = L / static_cast<double>(nq);
  bool finite = true;
  for (std::size_t m = 0; m < nq; ++m) {
    const double x = dq * static_cast<double>(m);
    const double rho = std::min(x, L - x);
    in[m] = gamma_second_(rho);
    if (!std::isfinite(in[m])) finite = false;
  }
  if (!finite) {
    fftw_free(in);
    fftw_free(out);
    throw std::runtime_error(
        "gamma'' is not integrable on the truncated domain (non-finite "
        "quadrature sample)");
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> plock(detail::planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(nq), in, out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> plock(detail::planner_mutex());
    fftw_destroy_plan(plan);
  }

  // Grid frequency j (j <= n/2) is mode j of the refined transform; negative
  // frequencies mirror by evenness.
  std::vector<double> table(n);
  for (std::size_t j = 0; j <= n / 2; ++j) table[j] = dq * out[j][0];
  for (std::size_t j = n / 2 + 1; j < n; ++j) table[j] = table[n - j];
  fftw_free(in);
  fftw_free(out);
  for (double v : table)
    if (!std::isfinite(v))
      throw std::runtime_error("gamma'' transform overflowed");

  auto [pos, inserted] = cache_->tables.emplace(key, std::move(table));
  (void)inserted;
  return pos->second;
}

SingularKernelDescriptor exponential_descriptor() {
  return SingularKernelDescriptor(
      [](double rho) { return 0.5 * std::exp(-rho); }, -0.5, 0.5);
}

RealField singular_convolved_dxx(const SingularKernelDescriptor& d,
                                 const RealField& w) {
  const std::vector<double>& q = d.gamma_second_transform(*w.grid());
  const double lam = d.lambda();
  std::vector<double> table(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) table[j] = q[j] - lam;
  return apply_symbol(w, table);
}

std::vector<double> WaveOperator::dxx_table(const Grid& grid) const {
  std::vector<double> dxx(grid.size());
  if (const KernelSpec* k = spec()) {
    std::vector<double> s = sample_kernel_symbol(*k, grid);
    const auto& xi = grid.frequencies();
    for (std::size_t j = 0; j < s.size(); ++j) dxx[j] = -xi[j] * xi[j] * s[j];
  } else {
    const SingularKernelDescriptor& d = *descriptor();
    const std::vector<double>& q = d.gamma_second_transform(grid);
    const double lam = d.lambda();
    for (std::size_t j = 0; j < q.size(); ++j) dxx[j] = q[j] - lam;
    dxx[0] = std::min(dxx[0], 0.0);  // gamma''(0 mode) <= lambda up to truncation
  }
  return dxx;
}

KernelTables WaveOperator::tables(const Grid& grid) const {
  return tables_from_dxx(dxx_table(grid), grid);
}

RealField WaveOperator::apply_dxx(const RealField& w) const {
  if (const KernelSpec* k = spec()) return convolved_dxx(*k, w);
  return singular_convolved_dxx(*descriptor(), w);
}

}  // namespace nlwave
