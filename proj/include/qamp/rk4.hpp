#pragma once

// Classical fixed-step fourth-order Runge-Kutta. No step control, so a run is
// reproducible bit for bit from (state, t0, h, number of steps).

#include <cstddef>

namespace qamp {

/// One RK4 step of dy/dt = rhs(t, y). State needs y + c * dy arithmetic.
template <class State, class Rhs>
State rk4_step(Rhs&& rhs, double t, const State& y, double h) {
  const State k1 = rhs(t, y);
  const State k2 = rhs(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = rhs(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = rhs(t + h, State(y + h * k3));
  return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

/// Scratch states for rk4_step_into, sized on first use.
template <class State>
struct Rk4Workspace {
  State k1, k2, k3, k4, stage;
};

/// In-place RK4 step for large states: rhs_into(t, y, out) writes dy/dt into
/// out, and the workspace is reused across steps instead of reallocated.
template <class State, class RhsInto>
void rk4_step_into(RhsInto&& rhs_into, double t, State& y, double h,
                   Rk4Workspace<State>& ws) {
  rhs_into(t, y, ws.k1);
  ws.stage = y + (0.5 * h) * ws.k1;
  rhs_into(t + 0.5 * h, ws.stage, ws.k2);
  ws.stage = y + (0.5 * h) * ws.k2;
  rhs_into(t + 0.5 * h, ws.stage, ws.k3);
  ws.stage = y + h * ws.k3;
  rhs_into(t + h, ws.stage, ws.k4);
  y += (h / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
}

/// Integrates from t0 over `steps` steps of size h, calling
/// observe(step_index, t, y) after every step (and once with index 0 before
/// the first). observe returns false to stop early; the return value is the
/// number of steps taken.
template <class State, class Rhs, class Observer>
std::size_t rk4_integrate(Rhs&& rhs, State& y, double t0, double h,
                          std::size_t steps, Observer&& observe) {
  if (!observe(std::size_t{0}, t0, static_cast<const State&>(y))) return 0;
  for (std::size_t k = 1; k <= steps; ++k) {
    // t from the index, not by accumulation, so the grid is exact.
    const double t = t0 + static_cast<double>(k - 1) * h;
    y = rk4_step(rhs, t, y, h);
    if (!observe(k, t0 + static_cast<double>(k) * h,
                 static_cast<const State&>(y))) {
      return k;
    }
  }
  return steps;
}

}  // namespace qamp
