// Benchmark driver for the charged-particle integrators: convergence studies,
// long-time invariant tracking, and structural condition checks.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpdexp/conditions.hpp"
#include "cpdexp/harness.hpp"

namespace {

constexpr int kExitNumerical = 2;

std::vector<cpdexp::Method> default_methods(const std::string& problem) {
    const auto p = cpdexp::builtin_problem(problem, 1.0);
    using cpdexp::Method;
    if (p.field.uniform) return {Method::m1c, Method::m2c, Method::boris, Method::avf};
    return {Method::m1b, Method::m2b, Method::boris, Method::avf};
}

std::vector<cpdexp::Method> parse_methods(const std::vector<std::string>& names,
                                          const std::string& problem) {
    if (names.empty()) return default_methods(problem);
    std::vector<cpdexp::Method> out;
    for (const auto& n : names) out.push_back(cpdexp::parse_method(n));
    return out;
}

void print_convergence(const cpdexp::ConvergenceResult& result) {
    std::printf("%-6s %-10s %-12s %-14s %s\n", "method", "epsilon", "h", "error", "e_H");
    for (const auto& r : result.rows) {
        if (!r.failure.empty()) {
            std::printf("%-6s %-10.4g %-12.6g %s\n", std::string(method_name(r.method)).c_str(),
                        r.epsilon, r.h, r.failure.c_str());
            continue;
        }
        std::printf("%-6s %-10.4g %-12.6g %-14.6e %.3e\n",
                    std::string(method_name(r.method)).c_str(), r.epsilon, r.h,
                    r.error.value_or(0.0), r.e_H.value_or(0.0));
    }
    std::printf("\nfitted slopes (log2 error vs log2 h):\n");
    for (const auto& s : result.slopes)
        std::printf("  %-6s eps=%-10.4g slope=%.3f  (%d points)\n",
                    std::string(method_name(s.method)).c_str(), s.epsilon, s.slope, s.points);
}

void print_longrun(const cpdexp::LongrunResult& result) {
    std::printf("%-6s %-10s %-12s %-12s %-12s %s\n", "method", "epsilon", "max e_H", "max e_M",
                "max e_I", "unscaled momentum drift");
    for (const auto& s : result.summaries) {
        if (!s.failure.empty()) {
            std::printf("%-6s %-10.4g %s\n", std::string(method_name(s.method)).c_str(), s.epsilon,
                        s.failure.c_str());
            continue;
        }
        auto cell = [](const std::optional<double>& v) {
            char buf[32];
            if (v)
                std::snprintf(buf, sizeof buf, "%.3e", *v);
            else
                std::snprintf(buf, sizeof buf, "-");
            return std::string(buf);
        };
        std::printf("%-6s %-10.4g %-12.3e %-12s %-12s %s\n",
                    std::string(method_name(s.method)).c_str(), s.epsilon, s.max_e_H,
                    cell(s.max_e_M).c_str(), cell(s.max_e_I).c_str(),
                    cell(s.unscaled_momentum_drift).c_str());
    }
}

int print_condition_report(const cpdexp::ConditionReport& report) {
    std::printf("algebraic conditions (tolerance %.3g, %d samples):\n", report.tolerance,
                report.samples);
    for (const auto& r : report.algebraic)
        std::printf("  %-14s max residual %.3e  %s\n", r.name.c_str(), r.max_residual,
                    r.max_residual <= report.tolerance ? "pass" : "FAIL");
    std::printf("order conditions (decay exponent over halved steps):\n");
    for (const auto& r : report.order) {
        if (r.identically_zero)
            std::printf("  %-14s required %d  identically zero  pass\n", r.name.c_str(),
                        r.required);
        else
            std::printf("  %-14s required %d  fitted %.2f  %s\n", r.name.c_str(), r.required,
                        r.fitted, r.pass() ? "pass" : "FAIL");
    }
    std::printf("overall: %s\n", report.passed() ? "pass" : "FAIL");
    return report.passed() ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"charged-particle dynamics integrator benchmarks"};
    app.require_subcommand(1);
    // --h is a real option (step sizes), so help lives on --help alone
    app.set_help_flag("--help", "print help and exit");

    std::string problem = "P2";
    std::vector<std::string> method_names;
    std::vector<double> epsilons{1.0, 1e-2, 1e-3};
    std::vector<double> h_values;
    double t_end = 10.0;
    int stride = 100;
    std::string out_path;
    int threads = 0;
    cpdexp::StepConfig step;
    unsigned seed = 12345;
    double tol = 1e-11;
    int samples = 100;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--problem", problem, "problem id (P1..P4)")->capture_default_str();
        cmd->add_option("--method", method_names,
                        "methods to run (m1c, m2c, m1b, m2b, boris, avf); defaults to the "
                        "methods applicable to the problem's field")
            ->delimiter(',');
        cmd->add_option("--epsilon", epsilons, "field-strength parameters")
            ->delimiter(',')
            ->capture_default_str();
        cmd->add_option("--quad-nodes", step.quad_nodes, "Gauss-Legendre nodes per stage integral")
            ->capture_default_str();
        cmd->add_option("--fp-tol", step.fp_tol, "fixed-point stopping tolerance")
            ->capture_default_str();
        cmd->add_option("--fp-maxit", step.fp_maxit, "fixed-point iteration cap")
            ->capture_default_str();
        cmd->add_option("--threads", threads, "concurrent runs (0 = hardware)")
            ->capture_default_str();
        cmd->add_option("--out", out_path, "CSV output path");
    };

    auto* conv = app.add_subcommand("convergence", "global-error convergence study");
    add_common(conv);
    conv->add_option("--h", h_values, "step sizes (default 2^-3..2^-7)")->delimiter(',');
    conv->add_option("--t-end", t_end, "integration horizon")->capture_default_str();

    auto* lr = app.add_subcommand("longrun", "long-time invariant tracking");
    add_common(lr);
    double lr_h = 0.01;
    double lr_t_end = 1000.0;
    lr->add_option("--h", lr_h, "step size")->capture_default_str();
    lr->add_option("--t-end", lr_t_end, "integration horizon")->capture_default_str();
    lr->add_option("--stride", stride, "steps between observer rows")->capture_default_str();

    auto* cc = app.add_subcommand("check-conditions",
                                  "verify energy-preservation, symmetry and order conditions");
    std::string cc_method = "m1c";
    cc->add_option("--method", cc_method, "m1c or m2c")->capture_default_str();
    cc->add_option("--tol", tol, "algebraic residual tolerance")->capture_default_str();
    cc->add_option("--seed", seed, "sampler seed")->capture_default_str();
    cc->add_option("--samples", samples, "number of argument samples")->capture_default_str();

    app.add_subcommand("list-problems", "describe the built-in benchmark problems");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("list-problems")) {
            for (const char* id : {"P1", "P2", "P3", "P4"}) {
                const auto p = cpdexp::builtin_problem(id, 1.0);
                std::printf("%-3s %-10s field%s%s\n", p.name.c_str(),
                            p.field.uniform ? "uniform" : "nonuniform",
                            p.potential.polynomial_degree ? ", polynomial potential"
                                                          : ", singular potential",
                            p.momentum_invariant ? ", momentum invariant" : "");
            }
            return 0;
        }

        if (app.got_subcommand("check-conditions")) {
            const auto method = cpdexp::parse_method(cc_method);
            cpdexp::MethodCoefficients coeffs;
            int order = 0;
            if (method == cpdexp::Method::m1c) {
                coeffs = cpdexp::m1c_coefficients();
                order = 2;
            } else if (method == cpdexp::Method::m2c) {
                coeffs = cpdexp::m2c_coefficients();
                order = 4;
            } else {
                throw std::invalid_argument("check-conditions supports m1c and m2c only");
            }
            const auto report = cpdexp::run_condition_report(coeffs, order, samples, seed, tol);
            return print_condition_report(report);
        }

        cpdexp::ExperimentConfig cfg;
        cfg.problem = problem;
        cfg.methods = parse_methods(method_names, problem);
        cfg.epsilons = epsilons;
        cfg.step = step;
        cfg.threads = threads;

        if (app.got_subcommand("convergence")) {
            cfg.h_values = h_values;
            if (cfg.h_values.empty())
                for (int k = 3; k <= 7; ++k) cfg.h_values.push_back(std::ldexp(1.0, -k));
            cfg.t_end = t_end;
            const auto result = cpdexp::run_convergence(cfg);
            print_convergence(result);
            if (!out_path.empty()) {
                cpdexp::write_csv(out_path, result.rows);
                std::printf("wrote %s\n", out_path.c_str());
            }
            return result.all_ok ? 0 : kExitNumerical;
        }

        // longrun
        cfg.h_values = {lr_h};
        cfg.t_end = lr_t_end;
        cfg.stride = stride;
        const auto result = cpdexp::run_longrun(cfg);
        print_longrun(result);
        if (!out_path.empty()) {
            cpdexp::write_csv(out_path, result.rows);
            std::printf("wrote %s\n", out_path.c_str());
        }
        return result.all_ok ? 0 : kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
}
