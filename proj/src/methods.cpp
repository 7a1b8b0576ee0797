#include "cpdexp/methods.hpp"

namespace cpdexp {

MethodCoefficients m1c_coefficients() {
    MethodCoefficients m;
    m.name = "m1c";
    m.degree = 1;
    m.nodes = {0.0, 1.0};
    m.phi_scales = {1.0};
    m.A = [](double tau, double, const PhiSet& phis) { return tau * phis.at(1.0).phi2; };
    m.B = [](double, const PhiSet& phis) { return phis.at(1.0).phi1; };
    m.Bbar = [](double, const PhiSet& phis) { return phis.at(1.0).phi2; };
    m.C = [](double tau, const PhiSet& phis) { return tau * phis.at(1.0).phi1; };
    m.A_dtau = [](double, double, const PhiSet& phis) { return phis.at(1.0).phi2; };
    m.C_dtau = [](double, const PhiSet& phis) { return phis.at(1.0).phi1; };
    m.A_sigma_power = [](int, double tau, const PhiSet& phis) { return tau * phis.at(1.0).phi2; };
    return m;
}

MethodCoefficients m2c_coefficients() {
    MethodCoefficients m;
    m.name = "m2c";
    m.degree = 2;
    m.nodes = {0.0, 0.5, 1.0};
    m.phi_scales = {1.0, 0.5};

    m.B = [](double tau, const PhiSet& phis) {
        const Mat3& p1f = phis.at(1.0).phi1;
        const Mat3& p1h = phis.at(0.5).phi1;
        return (-2.0 + 4.0 * tau) * p1h + (3.0 - 4.0 * tau) * p1f;
    };
    m.Bbar = [](double tau, const PhiSet& phis) {
        const Mat3& p2f = phis.at(1.0).phi2;
        const Mat3& p2h = phis.at(0.5).phi2;
        return (-1.0 + 2.0 * tau) * p2h + (3.0 - 4.0 * tau) * p2f;
    };
    m.A = [](double tau, double sigma, const PhiSet& phis) {
        const Mat3& p2f = phis.at(1.0).phi2;
        const Mat3& p2h = phis.at(0.5).phi2;
        const double ch = 4.0 * tau - 6.0 * tau * sigma - 5.0 * tau * tau + 8.0 * tau * tau * sigma;
        const double cf = -3.0 * tau + 4.0 * tau * sigma + 6.0 * tau * tau - 8.0 * tau * tau * sigma;
        return ch * p2h + cf * p2f;
    };
    m.C = [](double tau, const PhiSet& phis) {
        const Mat3& p1f = phis.at(1.0).phi1;
        const Mat3& p1h = phis.at(0.5).phi1;
        return (2.0 * tau * (1.0 - tau)) * p1h + (tau * (2.0 * tau - 1.0)) * p1f;
    };
    m.A_dtau = [](double tau, double sigma, const PhiSet& phis) {
        const Mat3& p2f = phis.at(1.0).phi2;
        const Mat3& p2h = phis.at(0.5).phi2;
        const double ch = 4.0 - 6.0 * sigma - 10.0 * tau + 16.0 * tau * sigma;
        const double cf = -3.0 + 4.0 * sigma + 12.0 * tau - 16.0 * tau * sigma;
        return ch * p2h + cf * p2f;
    };
    m.C_dtau = [](double tau, const PhiSet& phis) {
        const Mat3& p1f = phis.at(1.0).phi1;
        const Mat3& p1h = phis.at(0.5).phi1;
        return (2.0 - 4.0 * tau) * p1h + (4.0 * tau - 1.0) * p1f;
    };
    m.A_sigma_power = [](int j, double tau, const PhiSet& phis) {
        const Mat3& p2f = phis.at(1.0).phi2;
        const Mat3& p2h = phis.at(0.5).phi2;
        if (j == 0)  // a11 tau + a21 tau^2
            return (4.0 * tau - 5.0 * tau * tau) * p2h + (-3.0 * tau + 6.0 * tau * tau) * p2f;
        // a12 tau + a22 tau^2
        return (-6.0 * tau + 8.0 * tau * tau) * p2h + (4.0 * tau - 8.0 * tau * tau) * p2f;
    };
    return m;
}

}  // namespace cpdexp
