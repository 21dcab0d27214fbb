#include "nlwave/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fft_internal.hpp"
#include "nlwave/field_kernels.hpp"

namespace nlwave {

namespace {

void require_same_grid(const RealField& u, const RealField& v) {
  if (!u.grid()->compatible_with(*v.grid()))
    throw std::invalid_argument("fields live on different grids");
}

}  // namespace

SpectralField forward(const RealField& u) {
  const std::size_t n = u.size();
  detail::ComplexBuffer buf(n);
  for (std::size_t i = 0; i < n; ++i) {
    buf.re(i) = u[i];
    buf.im(i) = 0.0;
  }
  u.grid()->plans().forward(buf.data());
  std::vector<std::complex<double>> c(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    c[i] = std::complex<double>(buf.re(i) * inv_n, buf.im(i) * inv_n);
  return SpectralField(u.grid(), std::move(c));
}

RealField inverse(const SpectralField& s) {
  const std::size_t n = s.size();
  detail::ComplexBuffer buf(n);
  auto c = s.coefficients();
  for (std::size_t i = 0; i < n; ++i) {
    buf.re(i) = c[i].real();
    buf.im(i) = c[i].imag();
  }
  s.grid()->plans().backward(buf.data());
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = buf.re(i);
  return RealField(s.grid(), std::move(v));
}

std::vector<double> sample_symbol(const Grid& grid,
                                  const std::function<double(double)>& sigma) {
  const auto& xi = grid.frequencies();
  std::vector<double> table(xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) {
    table[j] = sigma(xi[j]);
    if (!std::isfinite(table[j]))
      throw std::domain_error("symbol is not finite at frequency " +
                              std::to_string(xi[j]));
  }
  return table;
}

RealField apply_symbol(const RealField& u, std::span<const double> table) {
  const std::size_t n = u.size();
  if (table.size() != n)
    throw std::invalid_argument("symbol table length does not match grid");
  for (double t : table)
    if (!std::isfinite(t))
      throw std::domain_error("symbol table contains a non-finite entry");

  detail::ComplexBuffer buf(n);
  for (std::size_t i = 0; i < n; ++i) {
    buf.re(i) = u[i];
    buf.im(i) = 0.0;
  }
  const auto& plans = u.grid()->plans();
  plans.forward(buf.data());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    buf.re(i) *= table[i] * inv_n;
    buf.im(i) *= table[i] * inv_n;
  }
  plans.backward(buf.data());

  std::vector<double> v(n);
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = buf.re(i);
    max_re = std::max(max_re, std::fabs(buf.re(i)));
    max_im = std::max(max_im, std::fabs(buf.im(i)));
  }
  // A real even symbol keeps the result real; anything else is a misuse.
  if (max_im > 1e-10 * (max_re + 1.0))
    throw std::domain_error("symbol breaks real-field conjugate symmetry");
  return RealField(u.grid(), std::move(v));
}

RealField apply_symbol(const RealField& u,
                       const std::function<double(double)>& sigma) {
  return apply_symbol(u, sample_symbol(*u.grid(), sigma));
}

double l2_norm(const RealField& u) {
  return std::sqrt(u.grid()->spacing() * fk::sum_squares(u.values()));
}

double sup_norm(const RealField& u) { return fk::max_abs(u.values()); }

double sobolev_norm(const RealField& u, double s) {
  if (s < 0.0) throw std::invalid_argument("sobolev_norm requires s >= 0");
  const SpectralField su = forward(u);
  const auto& xi = u.grid()->frequencies();
  auto c = su.coefficients();
  double acc = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j)
    acc += std::pow(1.0 + xi[j] * xi[j], s) * std::norm(c[j]);
  return std::sqrt(u.grid()->period() * acc);
}

double inner_product(const RealField& u, const RealField& v) {
  require_same_grid(u, v);
  return u.grid()->spacing() * fk::dot(u.values(), v.values());
}

double mean(const RealField& u) {
  return fk::sum(u.values()) / static_cast<double>(u.size());
}

}  // namespace nlwave
