#ifndef NLWAVE_SOLVER_HPP
#define NLWAVE_SOLVER_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "nlwave/grid.hpp"
#include "nlwave/kernels.hpp"
#include "nlwave/nonlinearity.hpp"

namespace nlwave {

// The first-order form of the system: u_i' = v_i,
// v_i' = (beta_i * stress_i(u1,u2))_xx.
struct State {
  double t;
  RealField u1, u2, v1, v2;
};

struct TimeDerivative {
  RealField u1, u2, v1, v2;
};

struct InitialData {
  RealField u1, u2, v1, v2;
};

struct EvolutionConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  // Guard on sup|u1| + sup|u2|; the first step past it is reported as
  // blow-up with the bracketing interval [t - dt, t].
  double blowup_threshold = 1e6;
  std::size_t observer_stride = 1;  // steps between snapshots
  // 2/3-rule spectral truncation of the nonlinear term (the linear part is
  // never masked). Off by default.
  bool dealias = false;
};

enum class Outcome { Completed, BlowupDetected, Corrupted };

struct Snapshot {
  double t = 0.0;
  std::size_t step = 0;
  double sup_u1 = 0.0, sup_u2 = 0.0;
  RealField u1, u2, v1, v2;
};

struct SimulationResult {
  Outcome outcome = Outcome::Completed;
  double detect_time = 0.0;  // valid when outcome == BlowupDetected
  double bracket_lo = 0.0, bracket_hi = 0.0;
  std::size_t steps = 0;
  std::vector<Snapshot> snapshots;
  State final_state;
};

TimeDerivative rhs(const State& s, const WaveOperator& k1,
                   const WaveOperator& k2, const NonlinearitySpec& nl);

// One classical RK4 step. dt may be negative (used by reversibility checks);
// it must be nonzero and finite.
State step_rk4(const State& s, double dt, const WaveOperator& k1,
               const WaveOperator& k2, const NonlinearitySpec& nl);

// Fixed-step evolution until t_end, the sup-norm guard, or corruption.
// t_end must be an integer multiple of dt. Snapshots are taken at step 0,
// every observer_stride steps, at the final step, and at the detection step
// when the guard trips. The observer must not mutate solver state.
SimulationResult integrate(
    const InitialData& init, const EvolutionConfig& cfg, const WaveOperator& k1,
    const WaveOperator& k2, const NonlinearitySpec& nl,
    const std::function<void(const Snapshot&)>& observer = {});

// Exact solution of the free (G == 0) problem: each mode oscillates with
// omega(xi) = |xi| sqrt(symbol(xi)); the zero mode is affine in t. Exact to
// rounding for any data, used as the linear oracle.
State linear_exact(const InitialData& init, const WaveOperator& k1,
                   const WaveOperator& k2, double t);
State linear_exact(const InitialData& init, const KernelSpec& k, double t);

struct PicardResult {
  State state;  // final iterate at the horizon
  // Max-over-slices sup-norm distance between consecutive iterates.
  std::vector<double> step_distance;
  bool diverged = false;
};

// Successive approximation on the integral form
// u_i(t) = u_i(0) + t v_i(0) + int_0^t (t - tau) (beta_i * stress_i)_xx dtau
// with composite trapezoid quadrature on time_nodes stored slices. The
// horizon must be small enough for contraction; step_distance reports it,
// and three consecutive growths stop the iteration with diverged = true.
PicardResult picard_iterate(const InitialData& init, double horizon,
                            std::size_t time_nodes, std::size_t iterations,
                            const WaveOperator& k1, const WaveOperator& k2,
                            const NonlinearitySpec& nl);

}  // namespace nlwave

#endif
