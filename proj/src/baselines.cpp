#include "cpdexp/baselines.hpp"

#include <cmath>
#include <string>

#include "cpdexp/quadrature.hpp"

namespace cpdexp {

State boris_step(const CPDProblem& p, const State& s, double h) {
    if (h == 0.0) throw std::invalid_argument("boris_step: h must be nonzero");
    const Vec3 xh = s.x + (0.5 * h) * s.v;
    const Vec3 f = p.potential.force(xh);
    const Vec3 t = (0.5 * h / p.epsilon) * p.field.evaluate(xh);

    const Vec3 vm = s.v + (0.5 * h) * f;
    const Vec3 sv = (2.0 / (1.0 + dot(t, t))) * t;
    const Vec3 vp = vm + cross(vm + cross(vm, t), sv);
    const Vec3 v1 = vp + (0.5 * h) * f;

    State out;
    out.t = s.t + h;
    out.v = v1;
    out.x = xh + (0.5 * h) * v1;
    return out;
}

StepResult avf_step(const CPDProblem& p, const State& s, const StepConfig& cfg) {
    if (cfg.h == 0.0) throw std::invalid_argument("avf_step: h must be nonzero");
    const double h = cfg.h;
    const Quadrature& quad = gauss_legendre_01(cfg.quad_nodes);

    auto fx = [&](const Vec3& x, const Vec3& v) {
        return cross(v, p.field.evaluate(x)) * (1.0 / p.epsilon) + p.potential.force(x);
    };

    // iterate y <- y0 + h * avg of f along the chord y0 -> y
    Vec3 x1 = s.x + h * s.v;
    Vec3 v1 = s.v + h * fx(s.x, s.v);
    IterationStats stats;
    for (;;) {
        ++stats.total_sweeps;
        Vec3 qx, qv;
        for (int q = 0; q < quad.size(); ++q) {
            const double tau = quad.nodes[q];
            const double w = quad.weights[q];
            const Vec3 xm = s.x + tau * (x1 - s.x);
            const Vec3 vm = s.v + tau * (v1 - s.v);
            qx += w * vm;
            qv += w * fx(xm, vm);
        }
        const Vec3 nx = s.x + h * qx;
        const Vec3 nv = s.v + h * qv;
        const double diff = std::max(norm_inf(nx - x1), norm_inf(nv - v1));
        x1 = nx;
        v1 = nv;
        stats.residual = diff;
        if (diff <= cfg.fp_tol) break;
        if (stats.total_sweeps >= cfg.fp_maxit)
            throw FixedPointError("avf_step: fixed point did not converge (residual " +
                                      std::to_string(diff) + ")",
                                  diff, stats.total_sweeps);
        if (!std::isfinite(diff))
            throw FixedPointError("avf_step: fixed point diverged", diff, stats.total_sweeps);
    }

    State out;
    out.t = s.t + h;
    out.x = x1;
    out.v = v1;
    return {out, stats};
}

}  // namespace cpdexp
