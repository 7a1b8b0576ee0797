#pragma once

#include <span>
#include <string>
#include <vector>

#include "cpdexp/methods.hpp"

namespace cpdexp {

/// One argument sample for the algebraic condition checks; the conditions
/// are identities in hK = (h/epsilon) B~(b).
struct ConditionSample {
    Vec3 b;
    double h = 0.0;
    double epsilon = 1.0;
};

/// Seeded sample generator with the gyro angle |h b / epsilon| kept <= 5.
[[nodiscard]] std::vector<ConditionSample> sample_condition_arguments(int n, unsigned seed);

struct AlgebraicConditionResult {
    std::string name;
    double max_residual = 0.0;  // max_abs over the tau/sigma grid and samples
};

/// Stage interpolation/boundary constraints: C_{c_i}(hK) = c_i phi1(c_i hK)
/// at the method's fitting nodes (rows node-i), plus the stage-polynomial
/// endpoint identities X_0 = x_n and X_1 = x_{n+1}, i.e. A_{0,sigma} = 0
/// (stage-start) and A_{1,sigma} = Bbar_sigma (stage-end).
[[nodiscard]] std::vector<AlgebraicConditionResult> check_node_constraint(
    const MethodCoefficients& coeffs, std::span<const ConditionSample> samples);

/// Energy-preservation conditions, evaluated on a 21x21 tau/sigma grid:
///   ep-velocity: phi0(-hK) B_tau(hK) = C'_tau(-hK)
///   ep-stage:    B_tau(-hK) B_sigma(hK) = A'_tau,sigma(hK) + A'_sigma,tau(-hK)
[[nodiscard]] std::vector<AlgebraicConditionResult> check_energy_conditions(
    const MethodCoefficients& coeffs, std::span<const ConditionSample> samples);

/// Symmetry (self-adjointness) conditions on the same grid:
///   sym-bbar: phi1(hK) B_tau(-hK) - Bbar_tau(-hK) = Bbar_{1-tau}(hK)
///   sym-c:    phi1(hK) - C_tau(-hK) phi0(hK) = C_{1-tau}(hK)
///   sym-a:    phi1(hK) B_sigma(-hK) - Bbar_sigma(-hK)
///             - C_tau(-hK) phi0(hK) B_sigma(-hK) + A_tau,sigma(-hK)
///             = A_{1-tau,1-sigma}(hK)
///   sym-b:    phi0(hK) B_tau(-hK) = B_{1-tau}(hK)
[[nodiscard]] std::vector<AlgebraicConditionResult> check_symmetry_conditions(
    const MethodCoefficients& coeffs, std::span<const ConditionSample> samples);

struct OrderConditionResult {
    std::string name;
    int required = 0;             // the residual must decay at least like h^required
    double fitted = 0.0;          // least-squares decay exponent over h_list
    bool identically_zero = false;
    std::vector<double> residuals;

    [[nodiscard]] bool pass() const { return identically_zero || fitted >= required - 0.5; }
};

/// Order-r residual decay for the three condition families
///   || int B_tau(hK) tau^j/j! dtau  - phi_{j+1}(hK) ||            <= alpha_j h^{r-j}
///   || int Bbar_tau(hK) tau^j/j! dtau - phi_{j+2}(hK) ||          <= beta_j h^{r-1-j}
///   || int int A_tau,sigma(hK) sigma^j/j! dtau dsigma
///        - int tau^{j+2} phi_{j+2}(tau hK) dtau ||                <= gamma_j h^{r-2-j}
/// measured at the steps in h_list (32-node quadrature; reference phi values
/// from phi_series). Residuals below 1e-13 everywhere report as identically
/// zero.
[[nodiscard]] std::vector<OrderConditionResult> check_order_conditions(
    const MethodCoefficients& coeffs, int r, std::span<const double> h_list, const Vec3& b,
    double epsilon);

struct ConditionReport {
    std::vector<AlgebraicConditionResult> algebraic;
    std::vector<OrderConditionResult> order;
    double tolerance = 1e-11;
    int samples = 0;

    [[nodiscard]] bool algebraic_pass() const {
        for (const auto& r : algebraic)
            if (r.max_residual > tolerance) return false;
        return true;
    }
    [[nodiscard]] bool order_pass() const {
        for (const auto& r : order)
            if (!r.pass()) return false;
        return true;
    }
    [[nodiscard]] bool passed() const { return algebraic_pass() && order_pass(); }
};

/// Runs every check with n seeded samples; `order` is the claimed order r.
[[nodiscard]] ConditionReport run_condition_report(const MethodCoefficients& coeffs, int order,
                                                   int n, unsigned seed, double tolerance);

/// Copy of `coeffs` with delta * I added to one coefficient family
/// ('A', 'B', 'b' = Bbar, 'C'); used to verify the checker flags broken
/// methods. Derivatives are unchanged (the perturbation is constant in tau)
/// and the sigma-power decomposition is dropped.
[[nodiscard]] MethodCoefficients perturb_coefficients(const MethodCoefficients& coeffs,
                                                      char family, double delta);

}  // namespace cpdexp
