#include <cmath>
#include <stdexcept>

#include "cpdexp/nonuniform.hpp"
#include "cpdexp/phi.hpp"
#include "cpdexp/stepper.hpp"
#include "doctest.h"

using namespace cpdexp;

namespace {

// copy of a uniform-field problem presented through the nonuniform interface
CPDProblem as_nonuniform(const CPDProblem& p) {
    CPDProblem q = p;
    q.field.uniform = false;
    return q;
}

CPDProblem free_nonuniform(const Vec3& b, double eps) {
    CPDProblem p;
    p.name = "free";
    p.epsilon = eps;
    p.field.uniform = false;
    p.field.value = b;
    p.field.evaluate = [b](const Vec3&) { return b; };
    p.potential = {[](const Vec3&) { return 0.0; }, [](const Vec3&) { return Vec3{}; }, 0};
    p.x0 = {0.0, 1.0, 0.1};
    p.v0 = {0.09, 0.55, 0.3};
    return p;
}

}  // namespace

TEST_CASE("triple jump weights") {
    const auto [a1, a2, a3] = triple_jump_weights();
    CHECK(a1 == doctest::Approx(1.3512071919596578).epsilon(1e-15));
    CHECK(a2 == doctest::Approx(-1.7024143839193153).epsilon(1e-15));
    CHECK(a3 == a1);
    CHECK(std::abs(a1 + a2 + a3 - 1.0) <= 1e-15);
}

TEST_CASE("m1b reduces to m1c on uniform fields") {
    StepConfig cfg;
    cfg.h = 0.05;
    const auto coeffs = m1c_coefficients();
    for (const char* id : {"P1", "P2"}) {
        const auto p = builtin_problem(id, 1.0);
        const auto q = as_nonuniform(p);
        State s = initial_state(p);
        double worst = 0.0;
        for (int i = 0; i < 25; ++i) {
            const State a = cs_step(coeffs, p, s, cfg).state;
            const State b = m1b_step(q, s, cfg).state;
            worst = std::max(worst, norm(a.x - b.x) + norm(a.v - b.v));
            s = a;
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("m1b and m2b reproduce the force-free rotation") {
    const Vec3 b{0.45, 0.05, 0.5};
    const auto p = free_nonuniform(b, 1.0);
    StepConfig cfg;
    cfg.h = 0.125;
    const State s0 = initial_state(p);
    const PhiTable t = phi_skew_closed(b, cfg.h / p.epsilon);
    const Vec3 want_x = s0.x + (t.phi1 * s0.v) * cfg.h;
    const Vec3 want_v = t.phi0 * s0.v;

    const State s1 = m1b_step(p, s0, cfg).state;
    CHECK(norm(s1.x - want_x) <= 1e-13);
    CHECK(norm(s1.v - want_v) <= 1e-13);

    const State s2 = m2b_step(p, s0, cfg).state;
    CHECK(norm(s2.x - want_x) <= 1e-13);
    CHECK(norm(s2.v - want_v) <= 1e-13);
    CHECK(s2.t == s0.t + cfg.h);
}

TEST_CASE("one m1b step preserves the energy on P4") {
    const auto p = builtin_problem("P4", 1.0);
    StepConfig cfg;
    cfg.h = 0.125;
    const State s0 = initial_state(p);
    const double h0 = energy(p, s0);
    const auto [s1, stats] = m1b_step(p, s0, cfg);
    CHECK(std::abs(energy(p, s1) - h0) / std::abs(h0) <= 1e-11);
    CHECK(stats.outer_iterations >= 1);
    CHECK(stats.total_sweeps >= stats.outer_iterations);

    const auto [s2, stats2] = m2b_step(p, s1, cfg);
    CHECK(std::abs(energy(p, s2) - h0) / std::abs(h0) <= 1e-11);
}

TEST_CASE("m1b and m2b are symmetric on P4") {
    const auto p = builtin_problem("P4", 1.0);
    StepConfig fwd;
    fwd.h = 0.1;
    StepConfig bwd;
    bwd.h = -0.1;
    const State s0 = initial_state(p);

    State s1 = m1b_step(p, s0, fwd).state;
    State s2 = m1b_step(p, s1, bwd).state;
    CHECK(norm(s2.x - s0.x) + norm(s2.v - s0.v) <= 1e-10);

    s1 = m2b_step(p, s0, fwd).state;
    s2 = m2b_step(p, s1, bwd).state;
    CHECK(norm(s2.x - s0.x) + norm(s2.v - s0.v) <= 1e-10);
}

TEST_CASE("outer fixed point reports non-convergence") {
    const auto p = builtin_problem("P4", 1.0);
    StepConfig cfg;
    cfg.h = 0.25;
    cfg.fp_maxit = 1;
    cfg.fp_tol = 1e-16;
    CHECK_THROWS_AS((void)m1b_step(p, initial_state(p), cfg), FixedPointError);
}

TEST_CASE("m1b rejects a zero step") {
    const auto p = builtin_problem("P4", 1.0);
    StepConfig cfg;
    cfg.h = 0.0;
    CHECK_THROWS_AS((void)m1b_step(p, initial_state(p), cfg), std::invalid_argument);
}
