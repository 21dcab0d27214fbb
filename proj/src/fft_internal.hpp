#ifndef NLWAVE_FFT_INTERNAL_HPP
#define NLWAVE_FFT_INTERNAL_HPP

#include <fftw3.h>

#include <cstddef>
#include <mutex>

// FFTW plumbing shared by grid.cpp, spectral.cpp, kernels.cpp and solver.cpp.
// Plan creation/destruction is not thread-safe and goes through
// planner_mutex(); execution via fftw_execute_dft on distinct buffers is.
namespace nlwave::detail {

std::mutex& planner_mutex();

// RAII 16-byte-aligned complex buffer compatible with plans created on
// fftw_malloc'd arrays.
class ComplexBuffer {
 public:
  explicit ComplexBuffer(std::size_t n)
      : n_(n), p_(fftw_alloc_complex(n)) {}
  ~ComplexBuffer() { fftw_free(p_); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;

  fftw_complex* data() { return p_; }
  std::size_t size() const { return n_; }
  double& re(std::size_t i) { return p_[i][0]; }
  double& im(std::size_t i) { return p_[i][1]; }

 private:
  std::size_t n_;
  fftw_complex* p_;
};

// In-place complex transforms planned once per grid with FFTW_ESTIMATE
// (deterministic plan choice). Executed on caller buffers of matching
// alignment via fftw_execute_dft.
struct FftPlans {
  explicit FftPlans(std::size_t n);
  ~FftPlans();
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(fftw_complex* inout) const {
    fftw_execute_dft(fwd, inout, inout);
  }
  void backward(fftw_complex* inout) const {
    fftw_execute_dft(bwd, inout, inout);
  }

  std::size_t n;
  fftw_plan fwd;
  fftw_plan bwd;
};

}  // namespace nlwave::detail

#endif
