#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpdexp/stepper.hpp"

namespace cpdexp {

/// Every integrator the benchmark driver knows. The declaration order is the
/// sort order of CSV output.
enum class Method { m1c, m2c, m1b, m2b, boris, avf };

[[nodiscard]] std::string_view method_name(Method m);
[[nodiscard]] Method parse_method(std::string_view name);  // throws std::invalid_argument
[[nodiscard]] std::vector<Method> all_methods();

/// One step of any method. Boris carries no iteration stats (explicit map);
/// m1c/m2c require a uniform field and propagate cs_step's errors.
[[nodiscard]] StepResult step_any(Method m, const CPDProblem& p, const State& s,
                                  const StepConfig& cfg);

/// |x - x_ref|/|x_ref| + |v - v_ref|/|v_ref| with Euclidean norms, the global
/// error measure of the convergence studies.
[[nodiscard]] double relative_state_error(const State& s, const State& ref);

/// States at the checkpoint times, computed with the order-4 method (M2-C on
/// uniform fields, M2-B otherwise) at h_ref = 2^-12 and validated by
/// Richardson comparison against h_ref/2 (relative disagreement <= 1e-10 at
/// every checkpoint). On validation failure the step is halved, reusing the
/// finer run, down to 2^-16 before giving up with std::runtime_error.
/// Checkpoints must be multiples of the reference step.
[[nodiscard]] std::vector<State> reference_solution(const CPDProblem& p, double t_end,
                                                    std::span<const double> checkpoints);

struct ExperimentConfig {
    std::string problem = "P2";
    std::vector<Method> methods;
    std::vector<double> epsilons{1.0, 1e-2, 1e-3};
    std::vector<double> h_values;  // convergence: >= 3 values; longrun: one
    double t_end = 10.0;
    int stride = 100;  // longrun observer stride (steps between rows)
    StepConfig step;   // h is overwritten per run
    int threads = 0;   // concurrent runs; 0 = hardware concurrency
};

/// One CSV row. Absent metrics stay disengaged and are written as empty
/// fields; a failed run keeps its inputs and carries the reason in `failure`
/// (written as a FAILED(...) marker in the error column, never NaN/Inf).
struct CsvRow {
    Method method = Method::m1c;
    std::string problem;
    double epsilon = 1.0;
    double h = 0.0;
    double t = 0.0;
    std::optional<double> error;
    std::optional<double> e_H;
    std::optional<double> e_M;
    std::optional<double> e_I;
    std::optional<double> fp_iters_mean;
    std::optional<int> fp_iters_max;
    std::string failure;
};

/// Least-squares slope of log2(error) against log2(h) for one (method,
/// epsilon) series; `points` counts the rows that contributed.
struct SlopeFit {
    Method method = Method::m1c;
    double epsilon = 1.0;
    double slope = 0.0;
    int points = 0;
};

struct ConvergenceResult {
    std::vector<CsvRow> rows;     // one per (method, epsilon, h), at t = t_end
    std::vector<SlopeFit> slopes;
    bool all_ok = true;  // false if any run failed or any slope lacks points
};

/// Runs the (method, epsilon, h) grid concurrently against shared reference
/// solutions and fits the convergence slopes. Throws std::invalid_argument
/// for malformed configs (fewer than 3 step sizes, t_end <= 0).
[[nodiscard]] ConvergenceResult run_convergence(const ExperimentConfig& cfg);

/// Invariant-drift extrema of one long run; the unscaled-momentum drift is
/// reported alongside the conserved scaled momentum for inspection.
struct LongrunSummary {
    Method method = Method::m1c;
    double epsilon = 1.0;
    double max_e_H = 0.0;
    std::optional<double> max_e_M;
    std::optional<double> max_e_I;
    std::optional<double> unscaled_momentum_drift;
    std::string failure;
};

struct LongrunResult {
    std::vector<CsvRow> rows;  // one per observer record; fp stats on the final row
    std::vector<LongrunSummary> summaries;
    bool all_ok = true;
};

/// Long-time invariant study at fixed h (first entry of h_values), sampling
/// every `stride` steps.
[[nodiscard]] LongrunResult run_longrun(const ExperimentConfig& cfg);

/// Writes rows sorted by (method, epsilon, h, t) under the fixed header
///   method,problem,epsilon,h,t,error,e_H,e_M,e_I,fp_iters_mean,fp_iters_max
/// with %.17g number formatting. Throws std::runtime_error if the file
/// cannot be written.
void write_csv(const std::string& path, std::span<const CsvRow> rows);

}  // namespace cpdexp
