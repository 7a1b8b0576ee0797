#include "cpdexp/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "cpdexp/quadrature.hpp"

namespace cpdexp {

namespace {

constexpr int kGridPoints = 21;       // tau/sigma grid resolution
constexpr double kZeroFloor = 1e-13;  // below this an order residual is identically zero
constexpr double kDiffStep = 1e-6;    // central-difference step for missing derivatives

std::vector<double> unit_grid(int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = double(i) / (n - 1);
    return g;
}

/// Tables at +hK and -hK for every scale the method requests, plus scale 1
/// for the phi0/phi1 factors the conditions themselves contain.
struct PhiPair {
    PhiSet plus;
    PhiSet minus;
};

PhiPair phis_for(const MethodCoefficients& coeffs, const ConditionSample& s) {
    std::vector<double> scales = coeffs.phi_scales;
    if (std::find(scales.begin(), scales.end(), 1.0) == scales.end()) scales.push_back(1.0);
    const double a = s.h / s.epsilon;
    return {make_phi_set(s.b, a, scales), make_phi_set(s.b, -a, scales)};
}

Mat3 a_dtau(const MethodCoefficients& c, double tau, double sigma, const PhiSet& phis) {
    if (c.A_dtau) return c.A_dtau(tau, sigma, phis);
    return (c.A(tau + kDiffStep, sigma, phis) - c.A(tau - kDiffStep, sigma, phis)) *
           (0.5 / kDiffStep);
}

Mat3 c_dtau(const MethodCoefficients& c, double tau, const PhiSet& phis) {
    if (c.C_dtau) return c.C_dtau(tau, phis);
    return (c.C(tau + kDiffStep, phis) - c.C(tau - kDiffStep, phis)) * (0.5 / kDiffStep);
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Least-squares slope of log(residual) against log(h).
double fit_decay_exponent(std::span<const double> hs, std::span<const double> res) {
    const int n = int(hs.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += std::log(hs[i]);
        my += std::log(std::max(res[i], 1e-300));
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = std::log(hs[i]) - mx;
        sxy += dx * (std::log(std::max(res[i], 1e-300)) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

OrderConditionResult make_order_result(std::string name, int required, std::span<const double> hs,
                                       std::vector<double> residuals) {
    OrderConditionResult r;
    r.name = std::move(name);
    r.required = required;
    r.residuals = std::move(residuals);
    r.identically_zero =
        std::all_of(r.residuals.begin(), r.residuals.end(), [](double v) { return v <= kZeroFloor; });
    r.fitted = r.identically_zero ? std::numeric_limits<double>::infinity()
                                  : fit_decay_exponent(hs, r.residuals);
    return r;
}

}  // namespace

std::vector<ConditionSample> sample_condition_arguments(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> theta_dist(0.05, 5.0);
    std::uniform_real_distribution<double> h_dist(1e-3, 0.5);
    std::uniform_int_distribution<int> eps_pick(0, 2);
    constexpr double kEps[] = {1.0, 0.1, 0.01};

    std::vector<ConditionSample> out;
    out.reserve(n);
    while (int(out.size()) < n) {
        Vec3 u{gauss(rng), gauss(rng), gauss(rng)};
        const double len = norm(u);
        if (len < 1e-3) continue;
        ConditionSample s;
        s.h = h_dist(rng);
        s.epsilon = kEps[eps_pick(rng)];
        const double theta = theta_dist(rng);  // = |h b / epsilon|
        s.b = u * (theta * s.epsilon / (s.h * len));
        out.push_back(s);
    }
    return out;
}

std::vector<AlgebraicConditionResult> check_node_constraint(
    const MethodCoefficients& coeffs, std::span<const ConditionSample> samples) {
    std::vector<AlgebraicConditionResult> rows;
    for (int i = 0; i < int(coeffs.nodes.size()); ++i)
        rows.push_back({"node-" + std::to_string(i), 0.0});
    AlgebraicConditionResult start{"stage-start", 0.0};
    AlgebraicConditionResult end{"stage-end", 0.0};
    const auto grid = unit_grid(kGridPoints);

    for (const auto& s : samples) {
        const auto [plus, minus] = phis_for(coeffs, s);
        const double a = s.h / s.epsilon;
        for (int i = 0; i < int(coeffs.nodes.size()); ++i) {
            const double c = coeffs.nodes[i];
            const Mat3 want = phi_skew_closed(s.b, c * a).phi1 * c;
            rows[i].max_residual =
                std::max(rows[i].max_residual, max_abs(coeffs.C(c, plus) - want));
        }
        for (const PhiSet* phis : {&plus, &minus}) {
            for (double sigma : grid) {
                start.max_residual =
                    std::max(start.max_residual, max_abs(coeffs.A(0.0, sigma, *phis)));
                end.max_residual =
                    std::max(end.max_residual, max_abs(coeffs.A(1.0, sigma, *phis) -
                                                       coeffs.Bbar(sigma, *phis)));
            }
        }
    }
    rows.push_back(start);
    rows.push_back(end);
    return rows;
}

std::vector<AlgebraicConditionResult> check_energy_conditions(
    const MethodCoefficients& coeffs, std::span<const ConditionSample> samples) {
    AlgebraicConditionResult e1{"ep-velocity", 0.0};
    AlgebraicConditionResult e2{"ep-stage", 0.0};
    const auto grid = unit_grid(kGridPoints);

    for (const auto& s : samples) {
        const auto [plus, minus] = phis_for(coeffs, s);
        const Mat3& exp_neg = minus.at(1.0).phi0;
        for (double tau : grid) {
            e1.max_residual = std::max(
                e1.max_residual,
                max_abs(exp_neg * coeffs.B(tau, plus) - c_dtau(coeffs, tau, minus)));
            const Mat3 b_tau_neg = coeffs.B(tau, minus);
            for (double sigma : grid) {
                const Mat3 lhs = b_tau_neg * coeffs.B(sigma, plus);
                const Mat3 rhs =
                    a_dtau(coeffs, tau, sigma, plus) + a_dtau(coeffs, sigma, tau, minus);
                e2.max_residual = std::max(e2.max_residual, max_abs(lhs - rhs));
            }
        }
    }
    return {e1, e2};
}

std::vector<AlgebraicConditionResult> check_symmetry_conditions(
    const MethodCoefficients& coeffs, std::span<const ConditionSample> samples) {
    AlgebraicConditionResult s1{"sym-bbar", 0.0};
    AlgebraicConditionResult s2{"sym-c", 0.0};
    AlgebraicConditionResult s3{"sym-a", 0.0};
    AlgebraicConditionResult s4{"sym-b", 0.0};
    const auto grid = unit_grid(kGridPoints);

    for (const auto& s : samples) {
        const auto [plus, minus] = phis_for(coeffs, s);
        const Mat3& exp_pos = plus.at(1.0).phi0;
        const Mat3& phi1_pos = plus.at(1.0).phi1;

        for (double tau : grid) {
            s1.max_residual =
                std::max(s1.max_residual,
                         max_abs(phi1_pos * coeffs.B(tau, minus) - coeffs.Bbar(tau, minus) -
                                 coeffs.Bbar(1.0 - tau, plus)));
            s2.max_residual =
                std::max(s2.max_residual,
                         max_abs(phi1_pos - coeffs.C(tau, minus) * exp_pos -
                                 coeffs.C(1.0 - tau, plus)));
            s4.max_residual =
                std::max(s4.max_residual, max_abs(exp_pos * coeffs.B(tau, minus) -
                                                  coeffs.B(1.0 - tau, plus)));

            const Mat3 c_tau_exp = coeffs.C(tau, minus) * exp_pos;
            for (double sigma : grid) {
                const Mat3 b_sig_neg = coeffs.B(sigma, minus);
                const Mat3 lhs = phi1_pos * b_sig_neg - coeffs.Bbar(sigma, minus) -
                                 c_tau_exp * b_sig_neg + coeffs.A(tau, sigma, minus);
                s3.max_residual = std::max(
                    s3.max_residual, max_abs(lhs - coeffs.A(1.0 - tau, 1.0 - sigma, plus)));
            }
        }
    }
    return {s1, s2, s3, s4};
}

std::vector<OrderConditionResult> check_order_conditions(const MethodCoefficients& coeffs, int r,
                                                         std::span<const double> h_list,
                                                         const Vec3& b, double epsilon) {
    if (r < 1) throw std::invalid_argument("order must be >= 1");
    if (h_list.size() < 2) throw std::invalid_argument("order check needs at least two steps");

    const auto& quad = gauss_legendre_01(32);
    const int nq = int(quad.size());

    // residuals[family j][h index]
    std::vector<std::vector<double>> res_b(r), res_bbar(std::max(r - 1, 0)),
        res_a(std::max(r - 2, 0));

    for (double h : h_list) {
        const double a = h / epsilon;
        const Mat3 hk = skew_matrix(b) * a;
        const PhiSet phis = make_phi_set(b, a, coeffs.phi_scales);

        std::vector<Mat3> b_at(nq), bbar_at(nq);
        for (int q = 0; q < nq; ++q) {
            b_at[q] = coeffs.B(quad.nodes[q], phis);
            bbar_at[q] = coeffs.Bbar(quad.nodes[q], phis);
        }

        for (int j = 0; j < r; ++j) {
            Mat3 lhs = Mat3::zero();
            for (int q = 0; q < nq; ++q)
                lhs += b_at[q] * (quad.weights[q] * std::pow(quad.nodes[q], j) / factorial(j));
            res_b[j].push_back(max_abs(lhs - phi_series(hk, j + 1)));
        }
        for (int j = 0; j + 1 < r; ++j) {
            Mat3 lhs = Mat3::zero();
            for (int q = 0; q < nq; ++q)
                lhs += bbar_at[q] * (quad.weights[q] * std::pow(quad.nodes[q], j) / factorial(j));
            res_bbar[j].push_back(max_abs(lhs - phi_series(hk, j + 2)));
        }
        for (int j = 0; j + 2 < r; ++j) {
            Mat3 lhs = Mat3::zero();
            for (int q = 0; q < nq; ++q) {
                Mat3 row = Mat3::zero();
                for (int p = 0; p < nq; ++p)
                    row += coeffs.A(quad.nodes[q], quad.nodes[p], phis) *
                           (quad.weights[p] * std::pow(quad.nodes[p], j) / factorial(j));
                lhs += row * quad.weights[q];
            }
            Mat3 rhs = Mat3::zero();
            for (int q = 0; q < nq; ++q) {
                const double tau = quad.nodes[q];
                rhs += phi_series(hk * tau, j + 2) *
                       (quad.weights[q] * std::pow(tau, j + 2));
            }
            res_a[j].push_back(max_abs(lhs - rhs));
        }
    }

    std::vector<OrderConditionResult> out;
    for (int j = 0; j < r; ++j)
        out.push_back(
            make_order_result("order-b-j" + std::to_string(j), r - j, h_list, std::move(res_b[j])));
    for (int j = 0; j + 1 < r; ++j)
        out.push_back(make_order_result("order-bbar-j" + std::to_string(j), r - 1 - j, h_list,
                                        std::move(res_bbar[j])));
    for (int j = 0; j + 2 < r; ++j)
        out.push_back(make_order_result("order-a-j" + std::to_string(j), r - 2 - j, h_list,
                                        std::move(res_a[j])));
    return out;
}

ConditionReport run_condition_report(const MethodCoefficients& coeffs, int order, int n,
                                     unsigned seed, double tolerance) {
    ConditionReport report;
    report.tolerance = tolerance;
    report.samples = n;

    const auto samples = sample_condition_arguments(n, seed);
    for (auto& row : check_node_constraint(coeffs, samples)) report.algebraic.push_back(row);
    for (auto& row : check_energy_conditions(coeffs, samples)) report.algebraic.push_back(row);
    for (auto& row : check_symmetry_conditions(coeffs, samples)) report.algebraic.push_back(row);

    // field direction for the decay fit drawn from the same stream
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss;
    Vec3 b{gauss(rng), gauss(rng), gauss(rng)};
    if (norm(b) < 1e-3) b = Vec3{0.0, 0.0, 1.0};
    b *= 1.0 / norm(b);

    const double hs[] = {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
    report.order = check_order_conditions(coeffs, order, hs, b, 1.0);
    return report;
}

MethodCoefficients perturb_coefficients(const MethodCoefficients& coeffs, char family,
                                        double delta) {
    MethodCoefficients out = coeffs;
    out.name += "-perturbed";
    const Mat3 d = Mat3::identity() * delta;
    switch (family) {
        case 'A': {
            auto base = coeffs.A;
            out.A = [base, d](double tau, double sigma, const PhiSet& p) {
                return base(tau, sigma, p) + d;
            };
            out.A_sigma_power = nullptr;  // decomposition no longer matches
            break;
        }
        case 'B': {
            auto base = coeffs.B;
            out.B = [base, d](double tau, const PhiSet& p) { return base(tau, p) + d; };
            break;
        }
        case 'b': {
            auto base = coeffs.Bbar;
            out.Bbar = [base, d](double tau, const PhiSet& p) { return base(tau, p) + d; };
            break;
        }
        case 'C': {
            auto base = coeffs.C;
            out.C = [base, d](double tau, const PhiSet& p) { return base(tau, p) + d; };
            break;
        }
        default:
            throw std::invalid_argument("unknown coefficient family");
    }
    return out;
}

}  // namespace cpdexp
