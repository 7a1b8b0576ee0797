#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cpdexp/methods.hpp"
#include "cpdexp/problems.hpp"

namespace cpdexp {

/// Thrown when a fixed-point iteration exhausts fp_maxit. residual is the
/// last successive-difference max norm (outer residual for nested solves,
/// with the inner one reported in the message).
class FixedPointError : public std::runtime_error {
  public:
    FixedPointError(std::string msg, double residual, int iterations)
        : std::runtime_error(std::move(msg)), residual(residual), iterations(iterations) {}
    double residual;
    int iterations;
};

struct StepResult {
    State state;
    IterationStats stats;
};

/// One step of a continuous-stage method on a uniform-field problem. The
/// stage unknowns are the force moments I_j = int_0^1 sigma^j F(X_sigma)
/// dsigma, j < degree, which make X_tau explicit; they are solved by
/// fixed-point iteration started from F along the force-free flow
/// X^0_tau = x + tau h phi1(tau hK) v. Throws std::invalid_argument for a
/// nonuniform field or h = 0, FixedPointError on non-convergence.
[[nodiscard]] StepResult cs_step(const MethodCoefficients& coeffs, const CPDProblem& p,
                                 const State& s, const StepConfig& cfg);

/// Diagnostics record written every `stride` steps (plus the initial and
/// final states). Invariant errors are relative to the initial value; e_M
/// and e_I are absent when the problem does not define them.
struct StepRecord {
    double t = 0.0;
    Vec3 x, v;
    double e_H = 0.0;
    std::optional<double> e_M;
    std::optional<double> e_I;
};

struct RunSummary {
    State final_state;
    long steps = 0;
    double fp_sweep_mean = 0.0;
    int fp_sweep_max = 0;
    std::vector<StepRecord> records;
};

/// Drives any one-step map from s0 to t_end = s0.t + n h (which must hold up
/// to roundoff) and assembles the diagnostic series.
[[nodiscard]] RunSummary run_trajectory(const std::function<StepResult(const State&)>& step,
                                        const CPDProblem& p, const State& s0, double t_end,
                                        double h, int stride);

/// run_trajectory specialized to cs_step with the given coefficients.
[[nodiscard]] RunSummary integrate(const MethodCoefficients& coeffs, const CPDProblem& p,
                                   const State& s0, const StepConfig& cfg, double t_end,
                                   int stride = 1);

}  // namespace cpdexp
