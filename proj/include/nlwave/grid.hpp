#ifndef NLWAVE_GRID_HPP
#define NLWAVE_GRID_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace nlwave {

namespace detail {
struct FftPlans;
}

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

// Uniform periodic grid on [-L/2, L/2). Node count must be a power of two
// (>= 4); frequencies are 2*pi*j/L in standard FFT ordering with a single
// zero mode.
class Grid {
 public:
  static GridPtr make(std::size_t n, double period);
  ~Grid();

  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  std::size_t size() const { return n_; }
  double period() const { return period_; }
  double spacing() const { return dx_; }
  double max_frequency() const;  // Nyquist magnitude, pi*n/L
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& frequencies() const { return freq_; }
  bool compatible_with(const Grid& other) const {
    return n_ == other.n_ && period_ == other.period_;
  }

  const detail::FftPlans& plans() const { return *plans_; }

 private:
  Grid(std::size_t n, double period);

  std::size_t n_;
  double period_;
  double dx_;
  std::vector<double> nodes_;
  std::vector<double> freq_;
  std::unique_ptr<detail::FftPlans> plans_;
};

// Real samples on a grid. Values may become non-finite during a diverging
// simulation; is_finite() detects that state.
class RealField {
 public:
  RealField() = default;  // empty until assigned
  RealField(GridPtr grid, std::vector<double> values);
  static RealField zeros(GridPtr grid);
  static RealField from_function(GridPtr grid,
                                 const std::function<double(double)>& f);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  bool is_finite() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

// Fourier coefficients of a real field (unit-amplitude convention: the
// coefficient of cos(k x) with amplitude 1 is 1/2 at +/-k). Conjugate
// symmetry is expected; the checked constructor rejects gross violations.
class SpectralField {
 public:
  SpectralField(GridPtr grid, std::vector<std::complex<double>> coeffs);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const std::complex<double>> coefficients() const {
    return coeffs_;
  }
  std::span<std::complex<double>> coefficients() { return coeffs_; }

 private:
  GridPtr grid_;
  std::vector<std::complex<double>> coeffs_;
};

}  // namespace nlwave

#endif
