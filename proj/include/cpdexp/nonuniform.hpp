#pragma once

#include <array>

#include "cpdexp/stepper.hpp"

namespace cpdexp {

/// Order-2 energy-preserving method for position-dependent fields. The m1c
/// scheme is applied with the field frozen at the step midpoint,
/// K~ = B((x_n + x_{n+1})/2)/eps, which couples x_{n+1} back into the
/// coefficients; that coupling is resolved by an outer fixed point on
/// x_{n+1} (inner solve: the usual stage moment iteration), started from one
/// m1c step with the field frozen at x_n. Works on uniform problems too,
/// where it reduces to m1c after one outer iteration. Throws FixedPointError
/// when either loop exhausts fp_maxit.
[[nodiscard]] StepResult m1b_step(const CPDProblem& p, const State& s, const StepConfig& cfg);

/// Triple Jump composition sub-step factors (a1, a2, a1) with
/// a1 = 1/(2 - 2^(1/3)), a2 = -2^(1/3)/(2 - 2^(1/3)); a1 + a2 + a1 = 1.
[[nodiscard]] std::array<double, 3> triple_jump_weights();

/// Order-4 composition of m1b_step with the Triple Jump sub-steps
/// (a1 h, a2 h, a1 h).
[[nodiscard]] StepResult m2b_step(const CPDProblem& p, const State& s, const StepConfig& cfg);

}  // namespace cpdexp
