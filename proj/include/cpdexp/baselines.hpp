#pragma once

#include "cpdexp/stepper.hpp"

namespace cpdexp {

/// Synchronized Boris pusher (order 2, explicit): half drift to the midpoint
/// position, half kick with F there, rotation of v about B/eps over h via the
/// tan(theta/2) construction, half kick, half drift. Velocities live at
/// integer steps; |v| is exactly preserved when F = 0.
[[nodiscard]] State boris_step(const CPDProblem& p, const State& s, double h);

/// Averaged vector field method on the first-order system y = (x, v):
///   y_{n+1} = y_n + h int_0^1 f(y_n + tau (y_{n+1} - y_n)) dtau,
/// f(x, v) = (v, v x B(x)/eps + F(x)), with the integral by Gauss-Legendre
/// quadrature and the implicit equation solved by fixed-point iteration
/// (so convergence requires h Lip(f) < 1; the strong regime at large h
/// fails loudly). Energy-preserving when B is uniform; coincides with the
/// implicit midpoint rule when f is linear. Throws FixedPointError on
/// non-convergence.
[[nodiscard]] StepResult avf_step(const CPDProblem& p, const State& s, const StepConfig& cfg);

}  // namespace cpdexp
