#include <cmath>
#include <random>
#include <stdexcept>

#include "cpdexp/stepper.hpp"
#include "doctest.h"

using namespace cpdexp;

namespace {

CPDProblem uniform_problem(const Vec3& b, double eps, std::function<double(const Vec3&)> u,
                           std::function<Vec3(const Vec3&)> f, std::optional<int> degree) {
    CPDProblem p;
    p.name = "custom";
    p.epsilon = eps;
    p.field.uniform = true;
    p.field.value = b;
    p.field.evaluate = [b](const Vec3&) { return b; };
    p.potential = {std::move(u), std::move(f), degree};
    p.x0 = {0.0, 1.0, 0.1};
    p.v0 = {0.09, 0.55, 0.3};
    return p;
}

CPDProblem free_problem(const Vec3& b, double eps) {
    return uniform_problem(
        b, eps, [](const Vec3&) { return 0.0; }, [](const Vec3&) { return Vec3{}; }, 0);
}

CPDProblem const_force_problem(const Vec3& b, double eps, const Vec3& g) {
    return uniform_problem(
        b, eps, [g](const Vec3& x) { return -dot(g, x); }, [g](const Vec3&) { return g; }, 1);
}

// variation-of-constants closed form for constant force g
State voc_step(const CPDProblem& p, const State& s, double h, const Vec3& g) {
    const PhiTable t = phi_skew_closed(p.field.value, h / p.epsilon);
    State out;
    out.t = s.t + h;
    out.x = s.x + (t.phi1 * s.v) * h + (t.phi2 * g) * (h * h);
    out.v = t.phi0 * s.v + (t.phi1 * g) * h;
    return out;
}

}  // namespace

TEST_CASE("force-free flow is reproduced exactly") {
    const Vec3 b{0.45, 0.05, 0.5};
    for (double eps : {1.0, 1e-2}) {
        const auto p = free_problem(b, eps);
        StepConfig cfg;
        cfg.h = 0.125;
        const State s0 = initial_state(p);
        for (const auto& coeffs : {m1c_coefficients(), m2c_coefficients()}) {
            const auto [s1, stats] = cs_step(coeffs, p, s0, cfg);
            const State want = voc_step(p, s0, cfg.h, {0.0, 0.0, 0.0});
            CHECK(norm(s1.x - want.x) <= 1e-14);
            CHECK(norm(s1.v - want.v) <= 1e-14);
            CHECK(stats.residual <= cfg.fp_tol);
        }
    }
}

TEST_CASE("constant force matches the variation-of-constants solution") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> hdist(1e-3, 0.25);
    const double epsilons[] = {1.0, 1e-1, 1e-3};
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Vec3 b{gauss(rng), gauss(rng), gauss(rng)};
        const Vec3 g{gauss(rng), gauss(rng), gauss(rng)};
        const double eps = epsilons[i % 3];
        const auto p = const_force_problem(b, eps, g);
        StepConfig cfg;
        cfg.h = hdist(rng);
        State s0 = initial_state(p);
        s0.x = {gauss(rng), gauss(rng), gauss(rng)};
        s0.v = {gauss(rng), gauss(rng), gauss(rng)};
        const auto [s1, stats] = cs_step(m1c_coefficients(), p, s0, cfg);
        const State want = voc_step(p, s0, cfg.h, g);
        worst = std::max(worst, norm(s1.x - want.x) + norm(s1.v - want.v));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("one step preserves the energy of a polynomial potential") {
    const auto p = builtin_problem("P2", 1.0);
    StepConfig cfg;
    cfg.h = 0.1;
    const State s0 = initial_state(p);
    const double h0 = energy(p, s0);
    for (const auto& coeffs : {m1c_coefficients(), m2c_coefficients()}) {
        const auto [s1, stats] = cs_step(coeffs, p, s0, cfg);
        CHECK(std::abs(energy(p, s1) - h0) / std::abs(h0) <= 1e-12);
    }
}

TEST_CASE("steps are symmetric: forward then backward returns the start") {
    const auto p = builtin_problem("P2", 1.0);
    StepConfig fwd;
    fwd.h = 0.1;
    StepConfig bwd;
    bwd.h = -0.1;
    const State s0 = initial_state(p);
    for (const auto& coeffs : {m1c_coefficients(), m2c_coefficients()}) {
        const State s1 = cs_step(coeffs, p, s0, fwd).state;
        const State s2 = cs_step(coeffs, p, s1, bwd).state;
        CHECK(norm(s2.x - s0.x) + norm(s2.v - s0.v) <= 1e-12);
    }
}

TEST_CASE("m2c converges at fourth order between halved steps") {
    const auto p = builtin_problem("P2", 1.0);
    const auto coeffs = m2c_coefficients();
    // error against a much finer run, halving h once
    auto endpoint = [&](double h) {
        StepConfig cfg;
        cfg.h = h;
        return integrate(coeffs, p, initial_state(p), cfg, 1.0, 1 << 20).final_state;
    };
    const State fine = endpoint(1.0 / 256.0);
    const double e1 = norm(endpoint(1.0 / 8.0).x - fine.x);
    const double e2 = norm(endpoint(1.0 / 16.0).x - fine.x);
    const double ratio = e1 / e2;
    CHECK(ratio > 10.0);  // order 4 gives ~16
    CHECK(ratio < 24.0);
}

TEST_CASE("run_trajectory records the requested stride") {
    const auto p = builtin_problem("P1", 1.0);
    StepConfig cfg;
    cfg.h = 0.05;
    const auto run = integrate(m1c_coefficients(), p, initial_state(p), cfg, 1.0, 5);
    REQUIRE(run.steps == 20);
    REQUIRE(run.records.size() == 5);  // t = 0, 0.25, 0.5, 0.75, 1.0
    CHECK(run.records.front().t == 0.0);
    CHECK(run.records.back().t == 1.0);
    for (int i = 1; i < int(run.records.size()); ++i)
        CHECK(run.records[i].t > run.records[i - 1].t);
    CHECK(run.fp_sweep_mean > 0.0);
    CHECK(run.fp_sweep_max >= int(run.fp_sweep_mean));

    // P1 defines the momentum invariant; the magnetic moment is defined too
    CHECK(bool(run.records.back().e_M));
    CHECK(bool(run.records.back().e_I));
    CHECK(*run.records.back().e_M <= 1e-3);  // near-conserved, not exact

    // P2 does not track momentum (no vector potential on the uniform field)
    const auto p2 = builtin_problem("P2", 1.0);
    const auto run2 = integrate(m1c_coefficients(), p2, initial_state(p2), cfg, 0.5, 100);
    CHECK_FALSE(bool(run2.records.back().e_M));
    CHECK(bool(run2.records.back().e_I));
    CHECK(run2.records.back().e_H <= 1e-12);
}

TEST_CASE("run_trajectory validates its arguments") {
    const auto p = builtin_problem("P2", 1.0);
    StepConfig cfg;
    cfg.h = 0.3;
    CHECK_THROWS_AS((void)integrate(m1c_coefficients(), p, initial_state(p), cfg, 1.0, 1),
                    std::invalid_argument);  // 1.0 is not a multiple of 0.3
    cfg.h = 0.25;
    CHECK_THROWS_AS((void)integrate(m1c_coefficients(), p, initial_state(p), cfg, 1.0, 0),
                    std::invalid_argument);  // bad stride
    CHECK_THROWS_AS((void)integrate(m1c_coefficients(), p, initial_state(p), cfg, -1.0, 1),
                    std::invalid_argument);  // wrong direction
}

TEST_CASE("cs_step rejects nonuniform fields and zero steps") {
    const auto p4 = builtin_problem("P4", 1.0);
    StepConfig cfg;
    cfg.h = 0.1;
    CHECK_THROWS_AS((void)cs_step(m1c_coefficients(), p4, initial_state(p4), cfg),
                    std::invalid_argument);
    const auto p2 = builtin_problem("P2", 1.0);
    cfg.h = 0.0;
    CHECK_THROWS_AS((void)cs_step(m1c_coefficients(), p2, initial_state(p2), cfg),
                    std::invalid_argument);
}

TEST_CASE("fixed point reports non-convergence") {
    const auto p = builtin_problem("P2", 1.0);
    StepConfig cfg;
    cfg.h = 0.5;
    cfg.fp_maxit = 1;
    cfg.fp_tol = 1e-16;
    try {
        (void)cs_step(m2c_coefficients(), p, initial_state(p), cfg);
        FAIL("expected FixedPointError");
    } catch (const FixedPointError& e) {
        CHECK(e.iterations == 1);
        CHECK(e.residual > 0.0);
    }
}

TEST_CASE("singular potential propagates from the force evaluation") {
    const auto p = builtin_problem("P1", 1.0);
    StepConfig cfg;
    cfg.h = 0.1;
    State s0 = initial_state(p);
    s0.x = {0.0, 1e-10, 0.0};  // on the guarded axis
    s0.v = {0.0, 0.0, 0.3};    // axial velocity keeps every stage on it
    CHECK_THROWS_AS((void)cs_step(m1c_coefficients(), p, s0, cfg), std::domain_error);
}
