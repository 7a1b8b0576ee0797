#include "cpdexp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "cpdexp/baselines.hpp"
#include "cpdexp/nonuniform.hpp"

namespace cpdexp {

namespace {

constexpr double kRefStepInit = 1.0 / 4096.0;   // 2^-12
constexpr double kRefStepMin = 1.0 / 65536.0;   // 2^-16, last rung of the refinement ladder
constexpr double kRefTol = 1e-10;               // Richardson agreement gate

/// Runs fn(0..n-1) on a small worker pool. Job bodies handle their own
/// failures; anything escaping is rethrown after the join.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    int nt = threads > 0 ? threads : int(std::thread::hardware_concurrency());
    nt = std::clamp(nt, 1, n);
    if (nt == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(nt);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            try {
                for (int i = next++; i < n; i = next++) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Reference integration at a fixed step: M2-C for uniform fields, M2-B
/// otherwise, collecting the states at the checkpoint times.
std::vector<State> integrate_reference(const CPDProblem& p, double t_end,
                                       std::span<const double> checkpoints, double h) {
    const long n = std::llround(t_end / h);
    if (n < 1 || std::abs(n * h - t_end) > 1e-9 * std::max(1.0, std::abs(t_end)))
        throw std::invalid_argument("reference_solution: t_end is not a multiple of the step");

    std::vector<std::pair<long, int>> marks;  // (step index, output slot)
    marks.reserve(checkpoints.size());
    for (int i = 0; i < int(checkpoints.size()); ++i) {
        const double c = checkpoints[i];
        const long m = std::llround(c / h);
        if (m < 0 || m > n || std::abs(m * h - c) > 1e-9 * std::max(1.0, std::abs(c)))
            throw std::invalid_argument("reference_solution: checkpoint off the reference grid");
        marks.emplace_back(m, i);
    }
    std::sort(marks.begin(), marks.end());

    static const MethodCoefficients m2c = m2c_coefficients();
    StepConfig cfg;
    cfg.h = h;

    std::vector<State> out(checkpoints.size());
    State s = initial_state(p);
    int mi = 0;
    while (mi < int(marks.size()) && marks[mi].first == 0) out[marks[mi++].second] = s;
    for (long i = 1; i <= n && mi < int(marks.size()); ++i) {
        s = p.field.uniform ? cs_step(m2c, p, s, cfg).state : m2b_step(p, s, cfg).state;
        s.t = i * h;
        while (mi < int(marks.size()) && marks[mi].first == i) out[marks[mi++].second] = s;
    }
    return out;
}

std::string failure_marker(const std::string& reason) {
    std::string clean = reason;
    for (char& c : clean)
        if (c == ',' || c == '\n' || c == '\r') c = ' ';
    return "FAILED(" + clean + ")";
}

void sort_rows(std::vector<CsvRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) {
        return std::tuple(int(a.method), a.epsilon, a.h, a.t) <
               std::tuple(int(b.method), b.epsilon, b.h, b.t);
    });
}

}  // namespace

std::string_view method_name(Method m) {
    switch (m) {
        case Method::m1c: return "m1c";
        case Method::m2c: return "m2c";
        case Method::m1b: return "m1b";
        case Method::m2b: return "m2b";
        case Method::boris: return "boris";
        case Method::avf: return "avf";
    }
    throw std::logic_error("unknown method tag");
}

Method parse_method(std::string_view name) {
    std::string low(name);
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    for (Method m : all_methods())
        if (low == method_name(m)) return m;
    throw std::invalid_argument("unknown method '" + std::string(name) +
                                "' (expected m1c, m2c, m1b, m2b, boris or avf)");
}

std::vector<Method> all_methods() {
    return {Method::m1c, Method::m2c, Method::m1b, Method::m2b, Method::boris, Method::avf};
}

StepResult step_any(Method m, const CPDProblem& p, const State& s, const StepConfig& cfg) {
    switch (m) {
        case Method::m1c: {
            static const MethodCoefficients c = m1c_coefficients();
            return cs_step(c, p, s, cfg);
        }
        case Method::m2c: {
            static const MethodCoefficients c = m2c_coefficients();
            return cs_step(c, p, s, cfg);
        }
        case Method::m1b: return m1b_step(p, s, cfg);
        case Method::m2b: return m2b_step(p, s, cfg);
        case Method::boris: return {boris_step(p, s, cfg.h), IterationStats{}};
        case Method::avf: return avf_step(p, s, cfg);
    }
    throw std::logic_error("unknown method tag");
}

double relative_state_error(const State& s, const State& ref) {
    return norm(s.x - ref.x) / std::max(norm(ref.x), 1e-300) +
           norm(s.v - ref.v) / std::max(norm(ref.v), 1e-300);
}

std::vector<State> reference_solution(const CPDProblem& p, double t_end,
                                      std::span<const double> checkpoints) {
    if (checkpoints.empty()) return {};
    double h = kRefStepInit;
    auto coarse = integrate_reference(p, t_end, checkpoints, h);
    while (true) {
        auto fine = integrate_reference(p, t_end, checkpoints, h / 2);
        double disagreement = 0.0;
        for (int i = 0; i < int(fine.size()); ++i)
            disagreement = std::max(disagreement, relative_state_error(coarse[i], fine[i]));
        if (disagreement <= kRefTol) return fine;
        h /= 2;
        if (h < kRefStepMin) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3g", disagreement);
            throw std::runtime_error(
                "reference_solution: Richardson validation still off by " + std::string(buf) +
                " at the finest step");
        }
        coarse = std::move(fine);
    }
}

ConvergenceResult run_convergence(const ExperimentConfig& cfg) {
    if (int(cfg.h_values.size()) < 3)
        throw std::invalid_argument("convergence mode needs at least 3 step sizes");
    if (cfg.t_end <= 0.0) throw std::invalid_argument("t_end must be positive");
    if (cfg.methods.empty()) throw std::invalid_argument("no methods selected");
    if (cfg.epsilons.empty()) throw std::invalid_argument("no epsilon values");

    // shared reference state at t_end, one per epsilon
    const int ne = int(cfg.epsilons.size());
    std::vector<State> refs(ne);
    std::vector<std::string> ref_failures(ne);
    const double checkpoints[] = {cfg.t_end};
    parallel_for(ne, cfg.threads, [&](int i) {
        try {
            const CPDProblem p = builtin_problem(cfg.problem, cfg.epsilons[i]);
            refs[i] = reference_solution(p, cfg.t_end, checkpoints).front();
        } catch (const std::exception& e) {
            ref_failures[i] = e.what();
        }
    });

    struct Job {
        Method m;
        int ei;
        double h;
    };
    std::vector<Job> jobs;
    for (Method m : cfg.methods)
        for (int ei = 0; ei < ne; ++ei)
            for (double h : cfg.h_values) jobs.push_back({m, ei, h});

    std::vector<CsvRow> rows(jobs.size());
    parallel_for(int(jobs.size()), cfg.threads, [&](int j) {
        const Job& job = jobs[j];
        CsvRow& row = rows[j];
        row.method = job.m;
        row.problem = cfg.problem;
        row.epsilon = cfg.epsilons[job.ei];
        row.h = job.h;
        row.t = cfg.t_end;
        if (!ref_failures[job.ei].empty()) {
            row.failure = "reference: " + ref_failures[job.ei];
            return;
        }
        try {
            const CPDProblem p = builtin_problem(cfg.problem, row.epsilon);
            StepConfig sc = cfg.step;
            sc.h = job.h;
            const auto run = run_trajectory(
                [&](const State& s) { return step_any(job.m, p, s, sc); }, p, initial_state(p),
                cfg.t_end, job.h, std::numeric_limits<int>::max());
            row.error = relative_state_error(run.final_state, refs[job.ei]);
            const StepRecord& last = run.records.back();
            row.e_H = last.e_H;
            row.e_M = last.e_M;
            row.e_I = last.e_I;
            row.fp_iters_mean = run.fp_sweep_mean;
            row.fp_iters_max = run.fp_sweep_max;
        } catch (const std::exception& e) {
            row.failure = e.what();
        }
    });
    sort_rows(rows);

    ConvergenceResult out;
    out.rows = std::move(rows);
    for (Method m : cfg.methods) {
        for (int ei = 0; ei < ne; ++ei) {
            double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
            int np = 0;
            for (const CsvRow& r : out.rows) {
                if (r.method != m || r.epsilon != cfg.epsilons[ei]) continue;
                if (!r.failure.empty() || !r.error || *r.error <= 0.0) continue;
                const double lx = std::log2(r.h), ly = std::log2(*r.error);
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
                ++np;
            }
            SlopeFit fit;
            fit.method = m;
            fit.epsilon = cfg.epsilons[ei];
            fit.points = np;
            const double den = np * sxx - sx * sx;
            fit.slope = (np >= 2 && den != 0.0) ? (np * sxy - sx * sy) / den
                                                : std::numeric_limits<double>::quiet_NaN();
            if (np < 2) out.all_ok = false;
            out.slopes.push_back(fit);
        }
    }
    for (const CsvRow& r : out.rows)
        if (!r.failure.empty()) out.all_ok = false;
    return out;
}

LongrunResult run_longrun(const ExperimentConfig& cfg) {
    if (cfg.h_values.size() != 1)
        throw std::invalid_argument("longrun mode takes exactly one step size");
    if (cfg.t_end <= 0.0) throw std::invalid_argument("t_end must be positive");
    if (cfg.stride < 1) throw std::invalid_argument("stride must be >= 1");
    if (cfg.methods.empty()) throw std::invalid_argument("no methods selected");
    if (cfg.epsilons.empty()) throw std::invalid_argument("no epsilon values");

    const double h = cfg.h_values.front();
    struct Job {
        Method m;
        double eps;
    };
    std::vector<Job> jobs;
    for (Method m : cfg.methods)
        for (double eps : cfg.epsilons) jobs.push_back({m, eps});

    std::vector<std::vector<CsvRow>> job_rows(jobs.size());
    std::vector<LongrunSummary> summaries(jobs.size());
    parallel_for(int(jobs.size()), cfg.threads, [&](int j) {
        const Job& job = jobs[j];
        LongrunSummary& sum = summaries[j];
        sum.method = job.m;
        sum.epsilon = job.eps;

        CsvRow base;
        base.method = job.m;
        base.problem = cfg.problem;
        base.epsilon = job.eps;
        base.h = h;
        try {
            const CPDProblem p = builtin_problem(cfg.problem, job.eps);
            StepConfig sc = cfg.step;
            sc.h = h;
            const auto run =
                run_trajectory([&](const State& s) { return step_any(job.m, p, s, sc); }, p,
                               initial_state(p), cfg.t_end, h, cfg.stride);

            const bool track_momentum =
                p.momentum_invariant && bool(p.field.vector_potential);
            double mu0 = 0.0;
            if (track_momentum)
                mu0 = momentum_unscaled(p, State{0.0, run.records.front().x,
                                                 run.records.front().v});
            for (const StepRecord& rec : run.records) {
                CsvRow row = base;
                row.t = rec.t;
                row.e_H = rec.e_H;
                row.e_M = rec.e_M;
                row.e_I = rec.e_I;
                job_rows[j].push_back(row);

                sum.max_e_H = std::max(sum.max_e_H, rec.e_H);
                if (rec.e_M) sum.max_e_M = std::max(sum.max_e_M.value_or(0.0), *rec.e_M);
                if (rec.e_I) sum.max_e_I = std::max(sum.max_e_I.value_or(0.0), *rec.e_I);
                if (track_momentum) {
                    const double mu = momentum_unscaled(p, State{rec.t, rec.x, rec.v});
                    const double drift = std::abs(mu - mu0) / std::max(std::abs(mu0), 1e-300);
                    sum.unscaled_momentum_drift =
                        std::max(sum.unscaled_momentum_drift.value_or(0.0), drift);
                }
            }
            job_rows[j].back().fp_iters_mean = run.fp_sweep_mean;
            job_rows[j].back().fp_iters_max = run.fp_sweep_max;
        } catch (const std::exception& e) {
            sum.failure = e.what();
            CsvRow row = base;
            row.t = cfg.t_end;
            row.failure = e.what();
            job_rows[j] = {row};
        }
    });

    LongrunResult out;
    for (auto& chunk : job_rows)
        out.rows.insert(out.rows.end(), chunk.begin(), chunk.end());
    sort_rows(out.rows);
    out.summaries = std::move(summaries);
    for (const auto& s : out.summaries)
        if (!s.failure.empty()) out.all_ok = false;
    return out;
}

void write_csv(const std::string& path, std::span<const CsvRow> rows) {
    std::vector<const CsvRow*> ordered;
    ordered.reserve(rows.size());
    for (const CsvRow& r : rows) ordered.push_back(&r);
    std::stable_sort(ordered.begin(), ordered.end(), [](const CsvRow* a, const CsvRow* b) {
        return std::tuple(int(a->method), a->epsilon, a->h, a->t) <
               std::tuple(int(b->method), b->epsilon, b->h, b->t);
    });

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "method,problem,epsilon,h,t,error,e_H,e_M,e_I,fp_iters_mean,fp_iters_max\n";

    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const CsvRow* r : ordered) {
        out << method_name(r->method) << ',' << r->problem << ',' << num(r->epsilon) << ','
            << num(r->h) << ',' << num(r->t) << ',';
        if (!r->failure.empty())
            out << failure_marker(r->failure);
        else if (r->error)
            out << num(*r->error);
        out << ',';
        if (r->e_H) out << num(*r->e_H);
        out << ',';
        if (r->e_M) out << num(*r->e_M);
        out << ',';
        if (r->e_I) out << num(*r->e_I);
        out << ',';
        if (r->fp_iters_mean) out << num(*r->fp_iters_mean);
        out << ',';
        if (r->fp_iters_max) out << *r->fp_iters_max;
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace cpdexp
