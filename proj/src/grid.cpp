#include "nlwave/grid.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft_internal.hpp"
#include "nlwave/field_kernels.hpp"

namespace nlwave {

namespace detail {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

FftPlans::FftPlans(std::size_t n_) : n(n_) {
  ComplexBuffer proto(n);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fwd = fftw_plan_dft_1d(static_cast<int>(n), proto.data(), proto.data(),
                         FFTW_FORWARD, FFTW_ESTIMATE);
  bwd = fftw_plan_dft_1d(static_cast<int>(n), proto.data(), proto.data(),
                         FFTW_BACKWARD, FFTW_ESTIMATE);
}

FftPlans::~FftPlans() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
}

}  // namespace detail

Grid::Grid(std::size_t n, double period)
    : n_(n), period_(period), dx_(period / static_cast<double>(n)) {
  nodes_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i)
    nodes_[i] = -0.5 * period_ + static_cast<double>(i) * dx_;
  // FFT ordering: 0, 1, ..., n/2, -(n/2-1), ..., -1 times 2*pi/L.
  const double dxi = 2.0 * std::numbers::pi / period_;
  freq_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    const auto sj = static_cast<std::ptrdiff_t>(j);
    const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
    freq_[j] = dxi * static_cast<double>(sj <= half ? sj : sj - static_cast<std::ptrdiff_t>(n_));
  }
  plans_ = std::make_unique<detail::FftPlans>(n_);
}

Grid::~Grid() = default;

GridPtr Grid::make(std::size_t n, double period) {
  if (n < 4 || !std::has_single_bit(n))
    throw std::invalid_argument("grid size must be a power of two >= 4");
  if (!(period > 0.0) || !std::isfinite(period))
    throw std::invalid_argument("grid period must be positive and finite");
  return GridPtr(new Grid(n, period));
}

double Grid::max_frequency() const {
  return std::numbers::pi * static_cast<double>(n_) / period_;
}

RealField::RealField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("field requires a grid");
  if (values_.size() != grid_->size())
    throw std::invalid_argument("field length does not match grid size");
}

RealField RealField::zeros(GridPtr grid) {
  std::vector<double> v(grid->size(), 0.0);
  return RealField(std::move(grid), std::move(v));
}

RealField RealField::from_function(GridPtr grid,
                                   const std::function<double(double)>& f) {
  std::vector<double> v(grid->size());
  const auto& x = grid->nodes();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(x[i]);
  return RealField(std::move(grid), std::move(v));
}

bool RealField::is_finite() const { return fk::all_finite(values_); }

SpectralField::SpectralField(GridPtr grid,
                             std::vector<std::complex<double>> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (!grid_) throw std::invalid_argument("spectral field requires a grid");
  if (coeffs_.size() != grid_->size())
    throw std::invalid_argument("coefficient count does not match grid size");
  // coefficients of a real field: c[n-j] = conj(c[j]) up to rounding
  const std::size_t n = coeffs_.size();
  double scale = 0.0;
  for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
  for (std::size_t j = 1; j < n / 2; ++j) {
    if (std::abs(coeffs_[n - j] - std::conj(coeffs_[j])) > 1e-6 * (scale + 1.0))
      throw std::invalid_argument(
          "coefficients violate conjugate symmetry (not a real field)");
  }
}

}  // namespace nlwave
