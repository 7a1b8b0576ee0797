#include "cpdexp/nonuniform.hpp"

#include <cmath>
#include <string>

namespace cpdexp {

namespace {

CPDProblem frozen_field(const CPDProblem& p, const Vec3& b) {
    CPDProblem f = p;
    f.field.uniform = true;
    f.field.value = b;
    f.field.evaluate = [b](const Vec3&) { return b; };
    return f;
}

}  // namespace

StepResult m1b_step(const CPDProblem& p, const State& s, const StepConfig& cfg) {
    static const MethodCoefficients m1c = m1c_coefficients();

    IterationStats stats;
    // initial guess for x_{n+1}: one m1c step with the field frozen at x_n
    StepResult guess = cs_step(m1c, frozen_field(p, p.field.evaluate(s.x)), s, cfg);
    stats.total_sweeps += guess.stats.total_sweeps;
    Vec3 y = guess.state.x;

    double outer_res = 0.0;
    while (stats.outer_iterations < cfg.fp_maxit) {
        ++stats.outer_iterations;
        const Vec3 bmid = p.field.evaluate(0.5 * (s.x + y));
        StepResult inner = cs_step(m1c, frozen_field(p, bmid), s, cfg);
        stats.total_sweeps += inner.stats.total_sweeps;
        stats.residual = inner.stats.residual;
        outer_res = norm_inf(inner.state.x - y);
        if (outer_res <= cfg.fp_tol) {
            inner.stats = stats;
            return inner;
        }
        y = inner.state.x;
    }
    throw FixedPointError("m1b_step: midpoint-field fixed point did not converge (outer residual " +
                              std::to_string(outer_res) + ", inner residual " +
                              std::to_string(stats.residual) + ")",
                          outer_res, stats.outer_iterations);
}

std::array<double, 3> triple_jump_weights() {
    const double cbrt2 = std::cbrt(2.0);
    const double a1 = 1.0 / (2.0 - cbrt2);
    return {a1, -cbrt2 * a1, a1};
}

StepResult m2b_step(const CPDProblem& p, const State& s, const StepConfig& cfg) {
    const auto w = triple_jump_weights();
    State cur = s;
    IterationStats stats;
    for (const double a : w) {
        StepConfig sub = cfg;
        sub.h = a * cfg.h;
        StepResult r = m1b_step(p, cur, sub);
        cur = r.state;
        stats.total_sweeps += r.stats.total_sweeps;
        stats.outer_iterations += r.stats.outer_iterations;
        stats.residual = r.stats.residual;
    }
    cur.t = s.t + cfg.h;  // sub-steps sum to h exactly in exact arithmetic; pin t
    return {cur, stats};
}

}  // namespace cpdexp
