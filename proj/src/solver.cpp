#include "nlwave/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "fft_internal.hpp"
#include "nlwave/field_kernels.hpp"
#include "nlwave/spectral.hpp"

namespace nlwave {

namespace {

using Vec = std::vector<double>;

struct Quad {
  Vec u1, u2, v1, v2;
  explicit Quad(std::size_t n) : u1(n), u2(n), v1(n), v2(n) {}
};

// Per-run stepper: compiled multiplier tables, FFT scratch, stage buffers.
// Used single-threaded, one instance per evolution.
class Stepper {
 public:
  Stepper(GridPtr grid, const WaveOperator& k1, const WaveOperator& k2,
          const NonlinearitySpec& nl, bool dealias)
      : grid_(std::move(grid)),
        nl_(nl),
        n_(grid_->size()),
        dxx1_(k1.dxx_table(*grid_)),
        dxx2_(k2.dxx_table(*grid_)),
        buf_(grid_->size()),
        scratch_(grid_->size()),
        dealias_(dealias) {
    if (dealias_) {
      const double cutoff = (2.0 / 3.0) * grid_->max_frequency();
      const auto& xi = grid_->frequencies();
      mask_.resize(n_);
      for (std::size_t j = 0; j < n_; ++j)
        mask_[j] = std::fabs(xi[j]) <= cutoff ? 1.0 : 0.0;
    }
  }

  const Grid& grid() const { return *grid_; }

  // out_v_i = table_i applied to stress_i(u1, u2); with dealiasing the
  // nonlinear part is masked while the linear part is kept whole.
  void accel(const Vec& u1, const Vec& u2, Vec& out_v1, Vec& out_v2) {
    accel_component(u1, u2, dxx1_, true, out_v1);
    accel_component(u1, u2, dxx2_, false, out_v2);
  }

  void rhs(const Quad& s, Quad& ds) {
    ds.u1 = s.v1;
    ds.u2 = s.v2;
    accel(s.u1, s.u2, ds.v1, ds.v2);
  }

  void rk4_step(Quad& s, double dt) {
    rhs(s, k1_);
    stage(s, 0.5 * dt, k1_);
    rhs(tmp_, k2_);
    stage(s, 0.5 * dt, k2_);
    rhs(tmp_, k3_);
    stage(s, dt, k3_);
    rhs(tmp_, k4_);
    fk::rk4_combine(s.u1, k1_.u1, k2_.u1, k3_.u1, k4_.u1, dt, s.u1);
    fk::rk4_combine(s.u2, k1_.u2, k2_.u2, k3_.u2, k4_.u2, dt, s.u2);
    fk::rk4_combine(s.v1, k1_.v1, k2_.v1, k3_.v1, k4_.v1, dt, s.v1);
    fk::rk4_combine(s.v2, k1_.v2, k2_.v2, k3_.v2, k4_.v2, dt, s.v2);
  }

 private:
  void stage(const Quad& s, double c, const Quad& k) {
    fk::add_scaled(s.u1, c, k.u1, tmp_.u1);
    fk::add_scaled(s.u2, c, k.u2, tmp_.u2);
    fk::add_scaled(s.v1, c, k.v1, tmp_.v1);
    fk::add_scaled(s.v2, c, k.v2, tmp_.v2);
  }

  void accel_component(const Vec& u1, const Vec& u2, const Vec& table,
                       bool first, Vec& out) {
    const double inv_n = 1.0 / static_cast<double>(n_);
    if (!dealias_) {
      if (first)
        fk::map2(u1, u2, scratch_,
                 [&](double a, double b) { return nl_.stress1(a, b); });
      else
        fk::map2(u1, u2, scratch_,
                 [&](double a, double b) { return nl_.stress2(a, b); });
      for (std::size_t i = 0; i < n_; ++i) {
        buf_.re(i) = scratch_[i];
        buf_.im(i) = 0.0;
      }
      grid_->plans().forward(buf_.data());
      for (std::size_t j = 0; j < n_; ++j) {
        const double c = table[j] * inv_n;
        buf_.re(j) *= c;
        buf_.im(j) *= c;
      }
    } else {
      // spectra of the linear argument and of the masked gradient part
      if (first)
        fk::map2(u1, u2, scratch_,
                 [&](double a, double b) { return nl_.grad1(a, b); });
      else
        fk::map2(u1, u2, scratch_,
                 [&](double a, double b) { return nl_.grad2(a, b); });
      const Vec& lin = first ? u1 : u2;
      detail::ComplexBuffer& g = buf_;
      for (std::size_t i = 0; i < n_; ++i) {
        g.re(i) = scratch_[i];
        g.im(i) = 0.0;
      }
      grid_->plans().forward(g.data());
      detail::ComplexBuffer lin_buf(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        lin_buf.re(i) = lin[i];
        lin_buf.im(i) = 0.0;
      }
      grid_->plans().forward(lin_buf.data());
      for (std::size_t j = 0; j < n_; ++j) {
        const double c = table[j] * inv_n;
        g.re(j) = c * (lin_buf.re(j) + mask_[j] * g.re(j));
        g.im(j) = c * (lin_buf.im(j) + mask_[j] * g.im(j));
      }
    }
    grid_->plans().backward(buf_.data());
    out.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = buf_.re(i);
  }

  GridPtr grid_;
  const NonlinearitySpec& nl_;
  std::size_t n_;
  Vec dxx1_, dxx2_;
  detail::ComplexBuffer buf_;
  Vec scratch_;
  bool dealias_;
  Vec mask_;
  Quad k1_{0}, k2_{0}, k3_{0}, k4_{0}, tmp_{0};

 public:
  void allocate_stages() {
    for (Quad* q : {&k1_, &k2_, &k3_, &k4_, &tmp_}) *q = Quad(n_);
  }
};

GridPtr common_grid(const InitialData& init) {
  const GridPtr& g = init.u1.grid();
  if (!g || !init.u2.grid() || !init.v1.grid() || !init.v2.grid())
    throw std::invalid_argument("initial data contains an empty field");
  if (!g->compatible_with(*init.u2.grid()) ||
      !g->compatible_with(*init.v1.grid()) ||
      !g->compatible_with(*init.v2.grid()))
    throw std::invalid_argument("initial data fields live on different grids");
  return g;
}

Quad to_quad(const InitialData& init) {
  Quad q(init.u1.size());
  auto cp = [](const RealField& f, Vec& v) {
    v.assign(f.values().begin(), f.values().end());
  };
  cp(init.u1, q.u1);
  cp(init.u2, q.u2);
  cp(init.v1, q.v1);
  cp(init.v2, q.v2);
  return q;
}

State to_state(const GridPtr& g, const Quad& q, double t) {
  return State{t, RealField(g, q.u1), RealField(g, q.u2), RealField(g, q.v1),
               RealField(g, q.v2)};
}

bool quad_finite(const Quad& q) {
  return fk::all_finite(q.u1) && fk::all_finite(q.u2) && fk::all_finite(q.v1) &&
         fk::all_finite(q.v2);
}

Snapshot make_snapshot(const GridPtr& g, const Quad& q, double t,
                       std::size_t step) {
  return Snapshot{t,
                  step,
                  fk::max_abs(q.u1),
                  fk::max_abs(q.u2),
                  RealField(g, q.u1),
                  RealField(g, q.u2),
                  RealField(g, q.v1),
                  RealField(g, q.v2)};
}

}  // namespace

TimeDerivative rhs(const State& s, const WaveOperator& k1,
                   const WaveOperator& k2, const NonlinearitySpec& nl) {
  GridPtr g = common_grid(InitialData{s.u1, s.u2, s.v1, s.v2});
  Stepper st(g, k1, k2, nl, false);
  Vec a1, a2;
  st.accel(Vec(s.u1.values().begin(), s.u1.values().end()),
           Vec(s.u2.values().begin(), s.u2.values().end()), a1, a2);
  return TimeDerivative{s.v1, s.v2, RealField(g, std::move(a1)),
                        RealField(g, std::move(a2))};
}

State step_rk4(const State& s, double dt, const WaveOperator& k1,
               const WaveOperator& k2, const NonlinearitySpec& nl) {
  if (dt == 0.0 || !std::isfinite(dt))
    throw std::invalid_argument("step_rk4 requires a nonzero finite dt");
  GridPtr g = common_grid(InitialData{s.u1, s.u2, s.v1, s.v2});
  Stepper st(g, k1, k2, nl, false);
  st.allocate_stages();
  Quad q = to_quad(InitialData{s.u1, s.u2, s.v1, s.v2});
  st.rk4_step(q, dt);
  return to_state(g, q, s.t + dt);
}

SimulationResult integrate(
    const InitialData& init, const EvolutionConfig& cfg, const WaveOperator& k1,
    const WaveOperator& k2, const NonlinearitySpec& nl,
    const std::function<void(const Snapshot&)>& observer) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    throw std::invalid_argument("dt must be positive and finite");
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end))
    throw std::invalid_argument("t_end must be nonnegative and finite");
  if (!(cfg.blowup_threshold > 0.0))
    throw std::invalid_argument("blowup_threshold must be positive");
  if (cfg.observer_stride < 1)
    throw std::invalid_argument("observer_stride must be >= 1");
  const auto steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  if (std::fabs(double(steps) * cfg.dt - cfg.t_end) >
      1e-9 * std::max(1.0, cfg.t_end))
    throw std::invalid_argument("t_end must be an integer multiple of dt");

  GridPtr g = common_grid(init);
  Stepper st(g, k1, k2, nl, cfg.dealias);
  st.allocate_stages();
  Quad q = to_quad(init);

  SimulationResult res;
  res.final_state = to_state(g, q, 0.0);

  auto record = [&](double t, std::size_t step) {
    res.snapshots.push_back(make_snapshot(g, q, t, step));
    if (observer) observer(res.snapshots.back());
  };

  if (!quad_finite(q)) {
    res.outcome = Outcome::Corrupted;
    return res;
  }
  record(0.0, 0);
  if (res.snapshots.back().sup_u1 + res.snapshots.back().sup_u2 >
      cfg.blowup_threshold) {
    res.outcome = Outcome::BlowupDetected;
    res.detect_time = 0.0;
    res.bracket_lo = 0.0;
    res.bracket_hi = 0.0;
    return res;
  }

  for (std::size_t step = 1; step <= steps; ++step) {
    st.rk4_step(q, cfg.dt);
    const double t = double(step) * cfg.dt;
    res.steps = step;
    if (!quad_finite(q)) {
      res.outcome = Outcome::Corrupted;
      res.final_state = to_state(g, q, t);
      return res;
    }
    const double total_sup = fk::max_abs(q.u1) + fk::max_abs(q.u2);
    if (total_sup > cfg.blowup_threshold) {
      record(t, step);  // the recorded series contains the crossing
      res.outcome = Outcome::BlowupDetected;
      res.detect_time = t;
      res.bracket_lo = t - cfg.dt;
      res.bracket_hi = t;
      res.final_state = to_state(g, q, t);
      return res;
    }
    if (step % cfg.observer_stride == 0 || step == steps) record(t, step);
  }

  res.outcome = Outcome::Completed;
  res.final_state = to_state(g, q, double(steps) * cfg.dt);
  return res;
}

State linear_exact(const InitialData& init, const WaveOperator& k1,
                   const WaveOperator& k2, double t) {
  GridPtr g = common_grid(init);
  const std::size_t n = g->size();

  auto evolve = [&](const RealField& u0, const RealField& v0,
                    const WaveOperator& k) {
    const Vec dxx = k.dxx_table(*g);
    SpectralField cu = forward(u0);
    SpectralField cv = forward(v0);
    auto a = cu.coefficients();
    auto b = cv.coefficients();
    std::vector<std::complex<double>> ut(n), vt(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = std::sqrt(std::max(0.0, -dxx[j]));
      if (w == 0.0) {
        ut[j] = a[j] + t * b[j];
        vt[j] = b[j];
      } else {
        const double c = std::cos(w * t), s = std::sin(w * t);
        ut[j] = a[j] * c + b[j] * (s / w);
        vt[j] = -a[j] * (w * s) + b[j] * c;
      }
    }
    return std::pair{inverse(SpectralField(g, std::move(ut))),
                     inverse(SpectralField(g, std::move(vt)))};
  };

  auto [u1, v1] = evolve(init.u1, init.v1, k1);
  auto [u2, v2] = evolve(init.u2, init.v2, k2);
  return State{t, std::move(u1), std::move(u2), std::move(v1), std::move(v2)};
}

State linear_exact(const InitialData& init, const KernelSpec& k, double t) {
  WaveOperator op(k);
  return linear_exact(init, op, op, t);
}

PicardResult picard_iterate(const InitialData& init, double horizon,
                            std::size_t time_nodes, std::size_t iterations,
                            const WaveOperator& k1, const WaveOperator& k2,
                            const NonlinearitySpec& nl) {
  if (!(horizon > 0.0))
    throw std::invalid_argument("picard horizon must be positive");
  if (time_nodes < 2)
    throw std::invalid_argument("picard needs at least two time nodes");
  if (iterations < 1)
    throw std::invalid_argument("picard needs at least one iteration");

  GridPtr g = common_grid(init);
  const std::size_t n = g->size();
  const std::size_t m = time_nodes;
  const double dtau = horizon / double(m - 1);
  Stepper st(g, k1, k2, nl, false);

  auto val = [](const RealField& f) {
    return Vec(f.values().begin(), f.values().end());
  };
  const Vec u10 = val(init.u1), u20 = val(init.u2);
  const Vec v10 = val(init.v1), v20 = val(init.v2);

  // base slice: u_i(0) + t v_i(0)
  std::vector<Vec> base1(m, Vec(n)), base2(m, Vec(n));
  for (std::size_t k = 0; k < m; ++k) {
    const double tk = dtau * double(k);
    for (std::size_t i = 0; i < n; ++i) {
      base1[k][i] = u10[i] + tk * v10[i];
      base2[k][i] = u20[i] + tk * v20[i];
    }
  }

  std::vector<Vec> cur1 = base1, cur2 = base2;
  std::vector<Vec> w1(m, Vec(n)), w2(m, Vec(n));
  std::vector<Vec> next1(m, Vec(n)), next2(m, Vec(n));

  PicardResult out{State{horizon, RealField::zeros(g), RealField::zeros(g),
                         RealField::zeros(g), RealField::zeros(g)},
                   {},
                   false};

  auto fill_accel = [&]() {
    for (std::size_t k = 0; k < m; ++k) st.accel(cur1[k], cur2[k], w1[k], w2[k]);
  };

  std::size_t growth_streak = 0;
  for (std::size_t it = 0; it < iterations; ++it) {
    fill_accel();
    for (std::size_t k = 0; k < m; ++k) {
      const double tk = dtau * double(k);
      next1[k] = base1[k];
      next2[k] = base2[k];
      // composite trapezoid of (t_k - tau) w(tau) over [0, t_k]
      for (std::size_t j = 0; j <= k; ++j) {
        const double weight =
            (j == 0 || j == k) ? 0.5 * dtau : dtau;
        const double c = weight * (tk - dtau * double(j));
        if (c == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
          next1[k][i] += c * w1[j][i];
          next2[k][i] += c * w2[j][i];
        }
      }
    }
    double dist = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      double d = 0.0, e = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d = std::max(d, std::fabs(next1[k][i] - cur1[k][i]));
        e = std::max(e, std::fabs(next2[k][i] - cur2[k][i]));
      }
      dist = std::max(dist, d + e);
    }
    const bool grew =
        !out.step_distance.empty() && dist > out.step_distance.back();
    out.step_distance.push_back(dist);
    cur1.swap(next1);
    cur2.swap(next2);
    if (!std::isfinite(dist)) {
      out.diverged = true;
      break;
    }
    growth_streak = grew ? growth_streak + 1 : 0;
    if (growth_streak >= 3) {
      out.diverged = true;
      break;
    }
  }

  // velocity at the horizon from the final iterate:
  // v_i(T) = v_i(0) + int_0^T (beta_i * stress_i)_xx dtau
  fill_accel();
  Vec vT1 = v10, vT2 = v20;
  for (std::size_t j = 0; j < m; ++j) {
    const double weight = (j == 0 || j + 1 == m) ? 0.5 * dtau : dtau;
    for (std::size_t i = 0; i < n; ++i) {
      vT1[i] += weight * w1[j][i];
      vT2[i] += weight * w2[j][i];
    }
  }

  out.state = State{horizon, RealField(g, cur1[m - 1]), RealField(g, cur2[m - 1]),
                    RealField(g, std::move(vT1)), RealField(g, std::move(vT2))};
  return out;
}

}  // namespace nlwave
