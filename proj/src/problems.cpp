#include "cpdexp/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace cpdexp {

namespace {

constexpr double kSingularRadius = 1e-8;

// U(x) = 1/(100 r), r = sqrt(x1^2 + x2^2); singular on the x3 axis.
double coulomb_value(const Vec3& x) {
    const double r = std::hypot(x[0], x[1]);
    if (r < kSingularRadius)
        throw std::domain_error("potential singular: |(x1,x2)| < 1e-8");
    return 1.0 / (100.0 * r);
}

Vec3 coulomb_force(const Vec3& x) {
    const double r = std::hypot(x[0], x[1]);
    if (r < kSingularRadius)
        throw std::domain_error("potential singular: |(x1,x2)| < 1e-8");
    const double c = 1.0 / (100.0 * r * r * r);
    return {c * x[0], c * x[1], 0.0};  // -grad U
}

// U(x) = x1^3 - x2^3 + x1^4/5 + x2^4 + x3^4
double quartic_value(const Vec3& x) {
    return x[0] * x[0] * x[0] - x[1] * x[1] * x[1] + x[0] * x[0] * x[0] * x[0] / 5.0 +
           x[1] * x[1] * x[1] * x[1] + x[2] * x[2] * x[2] * x[2];
}

Vec3 quartic_force(const Vec3& x) {
    return {-(3.0 * x[0] * x[0] + 0.8 * x[0] * x[0] * x[0]),
            -(-3.0 * x[1] * x[1] + 4.0 * x[1] * x[1] * x[1]),
            -(4.0 * x[2] * x[2] * x[2])};
}

Potential coulomb_potential() {
    return {coulomb_value, coulomb_force, std::nullopt};
}

Potential quartic_potential() {
    return {quartic_value, quartic_force, 4};
}

MagneticField uniform_field(const Vec3& b) {
    MagneticField f;
    f.uniform = true;
    f.value = b;
    f.evaluate = [b](const Vec3&) { return b; };
    return f;
}

}  // namespace

CPDProblem builtin_problem(std::string_view id, double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::domain_error("builtin_problem: epsilon must be in (0, 1]");

    CPDProblem p;
    p.epsilon = epsilon;

    if (id == "P1" || id == "p1") {
        p.name = "P1";
        p.field = uniform_field({0.0, 0.0, 1.0});
        p.field.vector_potential = [](const Vec3& x) {
            // A = -x x B / 2 for B = e3
            return Vec3{-0.5 * x[1], 0.5 * x[0], 0.0};
        };
        p.potential = coulomb_potential();
        p.x0 = {0.0, 0.2, 0.1};
        p.v0 = {0.09, 0.05, 0.2};
        p.momentum_invariant = true;
        p.singular_set = "x1 = x2 = 0 (potential axis)";
    } else if (id == "P2" || id == "p2") {
        p.name = "P2";
        p.field = uniform_field({0.45, 0.05, 0.5});
        p.potential = quartic_potential();
        p.x0 = {0.0, 1.0, 0.1};
        p.v0 = {0.09, 0.55, 0.3};
    } else if (id == "P3" || id == "p3") {
        p.name = "P3";
        p.field.uniform = false;
        p.field.evaluate = [](const Vec3& x) {
            return Vec3{0.0, 0.0, std::hypot(x[0], x[1])};
        };
        p.field.vector_potential = [](const Vec3& x) {
            const double r = std::hypot(x[0], x[1]);
            return Vec3{-x[1] * r / 3.0, x[0] * r / 3.0, 0.0};
        };
        p.potential = coulomb_potential();
        p.x0 = {0.0, 1.0, 0.1};
        p.v0 = {0.09, 0.05, 0.2};
        p.momentum_invariant = true;
        p.singular_set = "x1 = x2 = 0 (potential axis, field zero line)";
    } else if (id == "P4" || id == "p4") {
        p.name = "P4";
        p.field.uniform = false;
        p.field.evaluate = [](const Vec3& x) {
            return Vec3{0.5 * (x[1] - x[2]), 0.5 * (x[0] + x[2]), 0.5 * (x[1] - x[0])};
        };
        p.field.vector_potential = [](const Vec3& x) {
            return Vec3{0.25 * (x[2] * x[2] - x[1] * x[1]),
                        0.25 * (x[2] * x[2] - x[0] * x[0]),
                        0.25 * (x[1] * x[1] - x[0] * x[0])};
        };
        p.potential = quartic_potential();
        p.x0 = {0.0, 1.0, 0.1};
        p.v0 = {0.09, 0.55, 0.30};
    } else {
        throw std::invalid_argument("builtin_problem: unknown id (expected P1..P4)");
    }
    return p;
}

double energy(const CPDProblem& p, const State& s) {
    return 0.5 * dot(s.v, s.v) + p.potential.value(s.x);
}

namespace {

double momentum_with(const CPDProblem& p, const State& s, double scale) {
    if (!p.field.vector_potential)
        throw std::domain_error("momentum: problem has no vector potential");
    const Vec3 a = scale * p.field.vector_potential(s.x);
    return (s.v[0] + a[0]) * s.x[1] - (s.v[1] + a[1]) * s.x[0];
}

}  // namespace

double momentum(const CPDProblem& p, const State& s) {
    return momentum_with(p, s, 1.0 / p.epsilon);
}

double momentum_unscaled(const CPDProblem& p, const State& s) {
    return momentum_with(p, s, 1.0);
}

double magnetic_moment(const CPDProblem& p, const State& s) {
    const Vec3 b = p.field.evaluate(s.x);
    const double nb = norm(b);
    if (nb < 1e-150) throw std::domain_error("magnetic_moment: |B(x)| vanishes");
    const Vec3 c = cross(s.v, b);
    return 0.5 * dot(c, c) / (nb * nb * nb);
}

}  // namespace cpdexp
