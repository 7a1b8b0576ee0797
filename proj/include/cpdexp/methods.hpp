#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cpdexp/phi.hpp"

namespace cpdexp {

/// Iteration controls shared by every implicit method.
struct StepConfig {
    double h = 0.01;
    int quad_nodes = 16;    // Gauss-Legendre nodes for the stage integrals
    double fp_tol = 1e-14;  // fixed-point stop: successive max-norm difference
    int fp_maxit = 100;
};

struct IterationStats {
    int total_sweeps = 0;      // fixed-point sweeps (inner sweeps summed for nested solves)
    int outer_iterations = 0;  // nonzero only for the nonuniform outer loop
    double residual = 0.0;     // last successive-difference max norm
};

/// Coefficients of a continuous-stage method of degree s:
///   X_tau   = x_n + h C_tau(hK) v_n + h^2 int_0^1 A_tau,sigma(hK) F(X_sigma) dsigma
///   x_{n+1} = x_n + h phi1(hK) v_n + h^2 int_0^1 Bbar_tau(hK) F(X_tau) dtau
///   v_{n+1} = phi0(hK) v_n + h int_0^1 B_tau(hK) F(X_tau) dtau
/// A is polynomial of degree s in tau and s-1 in sigma; B, Bbar, C polynomial
/// in tau. Every callable receives the PhiSet holding the tables listed in
/// phi_scales (keyed by scale factor relative to hK).
struct MethodCoefficients {
    std::string name;
    int degree = 1;                  // s
    std::vector<double> nodes;       // fitting nodes c_1..c_{s+1}, c_1 = 0, c_{s+1} = 1
    std::vector<double> phi_scales;  // tables the callables require, e.g. {1, 1/2}

    std::function<Mat3(double, double, const PhiSet&)> A;     // A_tau,sigma
    std::function<Mat3(double, const PhiSet&)> B;             // B_tau
    std::function<Mat3(double, const PhiSet&)> Bbar;          // Bbar_tau
    std::function<Mat3(double, const PhiSet&)> C;             // C_tau

    // optional analytic tau-derivatives; the condition checker falls back to
    // central differences when absent
    std::function<Mat3(double, double, const PhiSet&)> A_dtau;
    std::function<Mat3(double, const PhiSet&)> C_dtau;

    // optional sigma-power decomposition A(tau,sigma) = sum_j P_j(tau) sigma^j,
    // j < degree; the stepper synthesizes it by interpolation when absent
    std::function<Mat3(int, double, const PhiSet&)> A_sigma_power;
};

/// Order-2 energy-preserving symmetric method, degree 1, nodes (0, 1):
///   A = tau phi2(hK), B = phi1(hK), Bbar = phi2(hK), C = tau phi1(hK).
[[nodiscard]] MethodCoefficients m1c_coefficients();

/// Order-4 energy-preserving symmetric method, degree 2, nodes (0, 1/2, 1):
///   B    = b1 + b2 tau,          b1 = -2 phi1(hK/2) + 3 phi1(hK), b2 = 4 phi1(hK/2) - 4 phi1(hK)
///   Bbar = c1 + c2 tau,          c1 = -phi2(hK/2) + 3 phi2(hK),   c2 = 2 phi2(hK/2) - 4 phi2(hK)
///   A    = a11 tau + a12 tau sigma + a21 tau^2 + a22 tau^2 sigma
///          a11 = 4 phi2(hK/2) - 3 phi2(hK),  a12 = -6 phi2(hK/2) + 4 phi2(hK)
///          a21 = -5 phi2(hK/2) + 6 phi2(hK), a22 = 8 phi2(hK/2) - 8 phi2(hK)
///   C    = 2 tau (1-tau) phi1(hK/2) + tau (2 tau - 1) phi1(hK)
/// (C is the degree-2 interpolant of c phi1(c hK) through the nodes.)
[[nodiscard]] MethodCoefficients m2c_coefficients();

}  // namespace cpdexp
