#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "cpdexp/vec3.hpp"

namespace cpdexp {

/// Magnetic field of the system x'' = x' x B(x)/eps + F(x). A uniform field
/// stores its constant value so integrators can specialize; evaluate is
/// always callable. vector_potential (A with curl A = B) is optional and
/// only needed by the momentum invariant.
struct MagneticField {
    bool uniform = false;
    Vec3 value{};
    std::function<Vec3(const Vec3&)> evaluate;
    std::function<Vec3(const Vec3&)> vector_potential;  // may be empty
};

/// Potential force F = -grad U with analytic gradient. polynomial_degree is
/// set when U is polynomial; quadrature choices use it to know when the
/// stage integrals are exact.
struct Potential {
    std::function<double(const Vec3&)> value;
    std::function<Vec3(const Vec3&)> force;
    std::optional<int> polynomial_degree;
};

struct CPDProblem {
    std::string name;
    double epsilon = 1.0;
    MagneticField field;
    Potential potential;
    Vec3 x0, v0;
    /// true when the problem has the rotational symmetry that conserves the
    /// momentum M(x,v); requires field.vector_potential.
    bool momentum_invariant = false;
    /// human-readable description of the singular set, empty if none
    std::string singular_set;
};

struct State {
    double t = 0.0;
    Vec3 x, v;
};

[[nodiscard]] inline State initial_state(const CPDProblem& p) {
    return {0.0, p.x0, p.v0};
}

/// The four benchmark problems P1..P4. P1/P2 have uniform fields, P3/P4
/// nonuniform ones; P2/P4 share the quartic polynomial potential, P1/P3 the
/// singular 1/(100 r) potential (guarded within radius 1e-8 of the axis).
/// Throws std::invalid_argument for unknown ids and std::domain_error for
/// epsilon outside (0, 1].
[[nodiscard]] CPDProblem builtin_problem(std::string_view id, double epsilon);

/// H(x,v) = |v|^2/2 + U(x). Propagates the potential's domain errors.
[[nodiscard]] double energy(const CPDProblem& p, const State& s);

/// M(x,v) = (v1 + A1/eps) x2 - (v2 + A2/eps) x1, the quantity conserved by
/// the scaled flow for rotationally symmetric problems. Requires a vector
/// potential (throws std::domain_error otherwise).
[[nodiscard]] double momentum(const CPDProblem& p, const State& s);

/// Same expression with the unscaled A, matching the eps = 1 formula; kept
/// for inspection alongside the conserved scaled variant.
[[nodiscard]] double momentum_unscaled(const CPDProblem& p, const State& s);

/// I(x,v) = |v x B(x)|^2 / (2 |B(x)|^3), the adiabatic invariant. Requires
/// |B(x)| > 0 (throws std::domain_error otherwise).
[[nodiscard]] double magnetic_moment(const CPDProblem& p, const State& s);

}  // namespace cpdexp
