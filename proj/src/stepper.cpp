#include "cpdexp/stepper.hpp"

#include <cmath>

#include "cpdexp/quadrature.hpp"

namespace cpdexp {

namespace {

// sigma-power decomposition P_j(tau) of A(tau, sigma) = sum_j P_j(tau) sigma^j
// (degree < s in sigma). Uses the analytic decomposition when provided,
// otherwise interpolates A at s distinct sigma values and solves the
// Vandermonde system, which is exact for polynomial A.
std::vector<Mat3> sigma_powers(const MethodCoefficients& c, double tau, const PhiSet& phis) {
    const int s = c.degree;
    std::vector<Mat3> out(s);
    if (c.A_sigma_power) {
        for (int j = 0; j < s; ++j) out[j] = c.A_sigma_power(j, tau, phis);
        return out;
    }
    std::vector<double> sig(s);
    for (int i = 0; i < s; ++i) sig[i] = (s == 1) ? 0.0 : double(i) / (s - 1);
    // Gauss-Jordan inverse of the Vandermonde V_{ij} = sig_i^j
    std::vector<std::vector<double>> v(s, std::vector<double>(2 * s, 0.0));
    for (int i = 0; i < s; ++i) {
        double pw = 1.0;
        for (int j = 0; j < s; ++j) {
            v[i][j] = pw;
            pw *= sig[i];
        }
        v[i][s + i] = 1.0;
    }
    for (int col = 0; col < s; ++col) {
        int piv = col;
        for (int r = col + 1; r < s; ++r)
            if (std::abs(v[r][col]) > std::abs(v[piv][col])) piv = r;
        std::swap(v[piv], v[col]);
        const double d = v[col][col];
        for (int j = 0; j < 2 * s; ++j) v[col][j] /= d;
        for (int r = 0; r < s; ++r) {
            if (r == col) continue;
            const double f = v[r][col];
            for (int j = 0; j < 2 * s; ++j) v[r][j] -= f * v[col][j];
        }
    }
    std::vector<Mat3> samples(s);
    for (int i = 0; i < s; ++i) samples[i] = c.A(tau, sig[i], phis);
    for (int j = 0; j < s; ++j) {
        Mat3 acc;
        for (int i = 0; i < s; ++i) acc += v[j][s + i] * samples[i];
        out[j] = acc;
    }
    return out;
}

}  // namespace

StepResult cs_step(const MethodCoefficients& coeffs, const CPDProblem& p, const State& s,
                   const StepConfig& cfg) {
    if (!p.field.uniform)
        throw std::invalid_argument("cs_step: continuous-stage coefficients need a uniform field");
    if (cfg.h == 0.0) throw std::invalid_argument("cs_step: h must be nonzero");

    const double h = cfg.h;
    const double arg = h / p.epsilon;
    const Vec3 b = p.field.value;
    const PhiSet phis = make_phi_set(b, arg, coeffs.phi_scales);
    const Mat3& phi0 = phis.at(1.0).phi0;
    const Mat3& phi1 = phis.at(1.0).phi1;

    const Quadrature& quad = gauss_legendre_01(cfg.quad_nodes);
    const int nq = quad.size();
    const int deg = coeffs.degree;

    // per-node constants of the stage polynomial X(tau_q) = base_q + sum_j aq[q][j] I_j
    std::vector<Vec3> base(nq);
    std::vector<std::vector<Mat3>> aq(nq);
    std::vector<Mat3> bw(nq), bbw(nq);
    for (int q = 0; q < nq; ++q) {
        const double tau = quad.nodes[q];
        base[q] = s.x + h * (coeffs.C(tau, phis) * s.v);
        aq[q] = sigma_powers(coeffs, tau, phis);
        for (Mat3& m : aq[q]) m *= h * h;
        bw[q] = coeffs.B(tau, phis);
        bbw[q] = coeffs.Bbar(tau, phis);
    }

    // initial moments: F along the force-free flow x + tau h phi1(tau hK) v
    std::vector<Vec3> mom(deg);
    for (int q = 0; q < nq; ++q) {
        const double tau = quad.nodes[q];
        const double w = quad.weights[q];
        const Vec3 xf = s.x + (tau * h) * (phi_skew_closed(b, tau * arg).phi1 * s.v);
        const Vec3 f = p.potential.force(xf);
        double pw = 1.0;
        for (int j = 0; j < deg; ++j) {
            mom[j] += (w * pw) * f;
            pw *= tau;
        }
    }

    std::vector<Vec3> fq(nq);
    IterationStats stats;
    for (;;) {
        ++stats.total_sweeps;
        for (int q = 0; q < nq; ++q) {
            Vec3 xq = base[q];
            for (int j = 0; j < deg; ++j) xq += aq[q][j] * mom[j];
            fq[q] = p.potential.force(xq);
        }
        std::vector<Vec3> next(deg);
        for (int q = 0; q < nq; ++q) {
            const double w = quad.weights[q];
            double pw = 1.0;
            for (int j = 0; j < deg; ++j) {
                next[j] += (w * pw) * fq[q];
                pw *= quad.nodes[q];
            }
        }
        double diff = 0.0;
        for (int j = 0; j < deg; ++j) diff = std::max(diff, norm_inf(next[j] - mom[j]));
        mom = std::move(next);
        stats.residual = diff;
        if (diff <= cfg.fp_tol) break;
        if (stats.total_sweeps >= cfg.fp_maxit)
            throw FixedPointError("cs_step: stage fixed point did not converge (residual " +
                                      std::to_string(diff) + ")",
                                  diff, stats.total_sweeps);
    }

    // assemble the update with the converged stage forces
    Vec3 xint, vint;
    for (int q = 0; q < nq; ++q) {
        const double w = quad.weights[q];
        xint += w * (bbw[q] * fq[q]);
        vint += w * (bw[q] * fq[q]);
    }
    State out;
    out.t = s.t + h;
    out.x = s.x + h * (phi1 * s.v) + (h * h) * xint;
    out.v = phi0 * s.v + h * vint;
    return {out, stats};
}

RunSummary run_trajectory(const std::function<StepResult(const State&)>& step, const CPDProblem& p,
                          const State& s0, double t_end, double h, int stride) {
    if (h == 0.0) throw std::invalid_argument("run_trajectory: h must be nonzero");
    if (stride < 1) throw std::invalid_argument("run_trajectory: stride must be >= 1");
    const double span = t_end - s0.t;
    const long n = std::lround(span / h);
    if (n < 0 || std::abs(s0.t + double(n) * h - t_end) > 1e-9 * std::max(1.0, std::abs(t_end)))
        throw std::invalid_argument("run_trajectory: t_end - t0 is not a whole number of steps");

    const double h0 = energy(p, s0);
    std::optional<double> m0, i0;
    if (p.momentum_invariant && p.field.vector_potential) m0 = momentum(p, s0);
    try {
        i0 = magnetic_moment(p, s0);
    } catch (const std::domain_error&) {
        i0 = std::nullopt;
    }

    RunSummary sum;
    auto record = [&](const State& st) {
        StepRecord r;
        r.t = st.t;
        r.x = st.x;
        r.v = st.v;
        r.e_H = std::abs(energy(p, st) - h0) / std::max(std::abs(h0), 1e-300);
        if (m0) r.e_M = std::abs(momentum(p, st) - *m0) / std::max(std::abs(*m0), 1e-300);
        if (i0) r.e_I = std::abs(magnetic_moment(p, st) - *i0) / std::max(std::abs(*i0), 1e-300);
        sum.records.push_back(r);
    };

    State s = s0;
    record(s);
    long total_sweeps = 0;
    for (long i = 1; i <= n; ++i) {
        StepResult r = step(s);
        s = r.state;
        s.t = s0.t + double(i) * h;  // avoid accumulating t roundoff
        total_sweeps += r.stats.total_sweeps;
        sum.fp_sweep_max = std::max(sum.fp_sweep_max, r.stats.total_sweeps);
        if (i % stride == 0 || i == n) record(s);
    }
    sum.final_state = s;
    sum.steps = n;
    sum.fp_sweep_mean = n > 0 ? double(total_sweeps) / double(n) : 0.0;
    return sum;
}

RunSummary integrate(const MethodCoefficients& coeffs, const CPDProblem& p, const State& s0,
                     const StepConfig& cfg, double t_end, int stride) {
    return run_trajectory([&](const State& s) { return cs_step(coeffs, p, s, cfg); }, p, s0, t_end,
                          cfg.h, stride);
}

}  // namespace cpdexp
