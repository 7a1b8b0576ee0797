// Python bindings: the built-in problems, invariants, one-step maps, the
// trajectory driver, the phi kernels, and the method condition checker.
// Vectors cross the boundary as length-3 sequences, matrices as 3x3 nested
// sequences, so numpy arrays and plain lists both work.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpdexp/conditions.hpp"
#include "cpdexp/harness.hpp"
#include "cpdexp/stepper.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace cpdexp;

namespace {

using Arr3 = std::array<double, 3>;
using Arr33 = std::array<Arr3, 3>;

Vec3 to_vec(const Arr3& a) { return {a[0], a[1], a[2]}; }
Arr3 from_vec(const Vec3& v) { return {v[0], v[1], v[2]}; }

Mat3 to_mat(const Arr33& a) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = a[std::size_t(i)][std::size_t(j)];
    return m;
}

Arr33 from_mat(const Mat3& m) {
    Arr33 a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[std::size_t(i)][std::size_t(j)] = m(i, j);
    return a;
}

StepConfig make_config(double h, int quad_nodes, double fp_tol, int fp_maxit) {
    StepConfig cfg;
    cfg.h = h;
    cfg.quad_nodes = quad_nodes;
    cfg.fp_tol = fp_tol;
    cfg.fp_maxit = fp_maxit;
    return cfg;
}

py::object opt_float(const std::optional<double>& v) {
    return v ? py::cast(*v) : py::none();
}

std::pair<MethodCoefficients, int> named_cs_method(const std::string& name) {
    if (name == "m1c") return {m1c_coefficients(), 2};
    if (name == "m2c") return {m2c_coefficients(), 4};
    throw std::invalid_argument("condition checks cover the uniform-field methods m1c and m2c");
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Exponential energy-preserving integrators for charged-particle dynamics";

    py::register_exception<FixedPointError>(mod, "FixedPointError", PyExc_RuntimeError);

    py::class_<State>(mod, "State")
        .def(py::init([](double t, Arr3 x, Arr3 v) { return State{t, to_vec(x), to_vec(v)}; }),
             "t"_a = 0.0, "x"_a = Arr3{0.0, 0.0, 0.0}, "v"_a = Arr3{0.0, 0.0, 0.0})
        .def_readwrite("t", &State::t)
        .def_property(
            "x", [](const State& s) { return from_vec(s.x); },
            [](State& s, Arr3 a) { s.x = to_vec(a); })
        .def_property(
            "v", [](const State& s) { return from_vec(s.v); },
            [](State& s, Arr3 a) { s.v = to_vec(a); })
        .def("__repr__", [](const State& s) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "State(t=%g, x=(%g, %g, %g), v=(%g, %g, %g))", s.t,
                          s.x[0], s.x[1], s.x[2], s.v[0], s.v[1], s.v[2]);
            return std::string(buf);
        });

    py::class_<CPDProblem>(mod, "Problem")
        .def_property_readonly("name", [](const CPDProblem& p) { return p.name; })
        .def_property_readonly("epsilon", [](const CPDProblem& p) { return p.epsilon; })
        .def_property_readonly("uniform_field",
                               [](const CPDProblem& p) { return p.field.uniform; })
        .def_property_readonly("momentum_invariant",
                               [](const CPDProblem& p) { return p.momentum_invariant; })
        .def_property_readonly("singular_set", [](const CPDProblem& p) { return p.singular_set; })
        .def("initial_state", [](const CPDProblem& p) { return initial_state(p); })
        .def(
            "field_at",
            [](const CPDProblem& p, Arr3 x) { return from_vec(p.field.evaluate(to_vec(x))); },
            "x"_a)
        .def(
            "force_at",
            [](const CPDProblem& p, Arr3 x) { return from_vec(p.potential.force(to_vec(x))); },
            "x"_a)
        .def(
            "potential_at",
            [](const CPDProblem& p, Arr3 x) { return p.potential.value(to_vec(x)); }, "x"_a)
        .def("__repr__", [](const CPDProblem& p) {
            return "Problem(" + p.name + ", epsilon=" + std::to_string(p.epsilon) + ")";
        });

    mod.def(
        "problem", [](const std::string& id, double eps) { return builtin_problem(id, eps); },
        "id"_a, "epsilon"_a = 1.0, "One of the built-in benchmark problems P1..P4.");

    mod.def("energy", &energy, "problem"_a, "state"_a);
    mod.def("momentum", &momentum, "problem"_a, "state"_a);
    mod.def("magnetic_moment", &magnetic_moment, "problem"_a, "state"_a);

    mod.def("methods", [] {
        std::vector<std::string> out;
        for (Method m : all_methods()) out.emplace_back(method_name(m));
        return out;
    });

    mod.def(
        "step",
        [](const std::string& method, const CPDProblem& p, const State& s, double h,
           int quad_nodes, double fp_tol, int fp_maxit) {
            return step_any(parse_method(method), p, s, make_config(h, quad_nodes, fp_tol, fp_maxit))
                .state;
        },
        "method"_a, "problem"_a, "state"_a, "h"_a, "quad_nodes"_a = 16, "fp_tol"_a = 1e-14,
        "fp_maxit"_a = 100, "One step of the named method; returns the new state.");

    mod.def(
        "integrate",
        [](const std::string& method, const CPDProblem& p, double h, double t_end, int stride,
           std::optional<State> start, int quad_nodes, double fp_tol, int fp_maxit) {
            const Method m = parse_method(method);
            const StepConfig cfg = make_config(h, quad_nodes, fp_tol, fp_maxit);
            const State s0 = start ? *start : initial_state(p);
            const RunSummary run = run_trajectory(
                [&](const State& s) { return step_any(m, p, s, cfg); }, p, s0, t_end, h, stride);
            py::list records;
            for (const StepRecord& r : run.records)
                records.append(py::dict("t"_a = r.t, "x"_a = from_vec(r.x), "v"_a = from_vec(r.v),
                                        "e_H"_a = r.e_H, "e_M"_a = opt_float(r.e_M),
                                        "e_I"_a = opt_float(r.e_I)));
            return records;
        },
        "method"_a, "problem"_a, "h"_a, "t_end"_a, "stride"_a = 1, "start"_a = py::none(),
        "quad_nodes"_a = 16, "fp_tol"_a = 1e-14, "fp_maxit"_a = 100,
        "Drive a trajectory and return the diagnostic records (t, x, v, invariant drifts).");

    mod.def(
        "reference_solution",
        [](const CPDProblem& p, double t_end, const std::vector<double>& checkpoints) {
            return reference_solution(p, t_end, checkpoints);
        },
        "problem"_a, "t_end"_a, "checkpoints"_a,
        "Richardson-validated high-accuracy states at the checkpoint times.");

    mod.def(
        "phi_closed",
        [](Arr3 b, double scale) {
            const PhiTable t = phi_skew_closed(to_vec(b), scale);
            return py::make_tuple(from_mat(t.phi0), from_mat(t.phi1), from_mat(t.phi2));
        },
        "b"_a, "scale"_a = 1.0,
        "Closed-form (phi0, phi1, phi2) tables at the skew argument scale*B~(b).");

    mod.def(
        "phi_series", [](Arr33 m, int k, int terms) { return from_mat(phi_series(to_mat(m), k, terms)); },
        "m"_a, "k"_a, "terms"_a = 30, "Series/doubling evaluation of phi_k at a 3x3 argument.");

    mod.def(
        "skew_matrix", [](Arr3 b) { return from_mat(skew_matrix(to_vec(b))); }, "b"_a);

    mod.def(
        "check_conditions",
        [](const std::string& method, int samples, unsigned seed, double tol) {
            const auto [coeffs, order] = named_cs_method(method);
            const ConditionReport rep = run_condition_report(coeffs, order, samples, seed, tol);
            py::list algebraic;
            for (const auto& r : rep.algebraic)
                algebraic.append(py::dict("name"_a = r.name, "max_residual"_a = r.max_residual));
            py::list order_rows;
            for (const auto& r : rep.order)
                order_rows.append(py::dict("name"_a = r.name, "required"_a = r.required,
                                           "fitted"_a = r.fitted,
                                           "identically_zero"_a = r.identically_zero,
                                           "pass"_a = r.pass()));
            return py::dict("algebraic"_a = algebraic, "order"_a = order_rows,
                            "tolerance"_a = rep.tolerance, "samples"_a = rep.samples,
                            "passed"_a = rep.passed());
        },
        "method"_a, "samples"_a = 100, "seed"_a = 12345u, "tol"_a = 1e-11,
        "Run the algebraic and order condition checks for m1c or m2c.");
}
