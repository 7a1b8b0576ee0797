#include <cmath>
#include <random>

#include "cpdexp/methods.hpp"
#include "doctest.h"

using namespace cpdexp;

namespace {

PhiSet tables_for(const MethodCoefficients& c, const Vec3& b, double arg_scale) {
    return make_phi_set(b, arg_scale, c.phi_scales);
}

}  // namespace

TEST_CASE("coefficient metadata") {
    const auto m1 = m1c_coefficients();
    CHECK(m1.degree == 1);
    REQUIRE(m1.nodes.size() == 2);
    CHECK(m1.nodes[0] == 0.0);
    CHECK(m1.nodes[1] == 1.0);
    CHECK(m1.phi_scales == std::vector<double>{1.0});
    CHECK(bool(m1.A_dtau));
    CHECK(bool(m1.C_dtau));
    CHECK(bool(m1.A_sigma_power));

    const auto m2 = m2c_coefficients();
    CHECK(m2.degree == 2);
    REQUIRE(m2.nodes.size() == 3);
    CHECK(m2.nodes[1] == 0.5);
    CHECK(m2.phi_scales == std::vector<double>({1.0, 0.5}));
    CHECK(bool(m2.A_dtau));
    CHECK(bool(m2.C_dtau));
    CHECK(bool(m2.A_sigma_power));
}

TEST_CASE("zero-argument limits") {
    const Vec3 b{0.0, 0.0, 0.0};
    const Mat3 eye = Mat3::identity();

    const auto m1 = m1c_coefficients();
    const PhiSet t1 = tables_for(m1, b, 0.3);
    CHECK(max_abs(m1.B(0.7, t1) - eye) == 0.0);
    CHECK(max_abs(m1.Bbar(0.7, t1) - eye * 0.5) == 0.0);
    CHECK(max_abs(m1.C(0.7, t1) - eye * 0.7) == 0.0);
    CHECK(max_abs(m1.A(0.7, 0.2, t1) - eye * 0.35) == 0.0);

    const auto m2 = m2c_coefficients();
    const PhiSet t2 = tables_for(m2, b, 0.3);
    CHECK(max_abs(m2.B(0.7, t2) - eye) < 1e-15);
    CHECK(max_abs(m2.Bbar(0.7, t2) - eye * 0.3) < 1e-15);  // (1 - tau) I at hK = 0
    CHECK(max_abs(m2.C(0.7, t2) - eye * 0.7) < 1e-15);
}

TEST_CASE("node interpolation of C") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> arg(0.05, 4.0);
    for (const auto& coeffs : {m1c_coefficients(), m2c_coefficients()}) {
        double worst = 0.0;
        for (int i = 0; i < 30; ++i) {
            const Vec3 b{gauss(rng), gauss(rng), gauss(rng)};
            const double a = arg(rng);
            const PhiSet t = tables_for(coeffs, b, a);
            for (double c : coeffs.nodes) {
                const Mat3 want = phi_skew_closed(b, c * a).phi1 * c;
                worst = std::max(worst, max_abs(coeffs.C(c, t) - want));
            }
        }
        CHECK(worst <= 1e-13);
    }
}

TEST_CASE("stage polynomial endpoints") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> arg(0.05, 4.0);
    for (const auto& coeffs : {m1c_coefficients(), m2c_coefficients()}) {
        double worst = 0.0;
        for (int i = 0; i < 30; ++i) {
            const Vec3 b{gauss(rng), gauss(rng), gauss(rng)};
            const PhiSet t = tables_for(coeffs, b, arg(rng));
            for (double sigma : {0.0, 0.3, 0.8, 1.0}) {
                worst = std::max(worst, max_abs(coeffs.A(0.0, sigma, t)));
                worst = std::max(worst,
                                 max_abs(coeffs.A(1.0, sigma, t) - coeffs.Bbar(sigma, t)));
            }
        }
        CHECK(worst <= 1e-14);
    }
}

TEST_CASE("analytic tau derivatives match central differences") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> arg(0.05, 3.0);
    const double d = 1e-6;
    for (const auto& coeffs : {m1c_coefficients(), m2c_coefficients()}) {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Vec3 b{gauss(rng), gauss(rng), gauss(rng)};
            const PhiSet t = tables_for(coeffs, b, arg(rng));
            for (double tau : {0.1, 0.5, 0.9}) {
                const Mat3 cd = (coeffs.C(tau + d, t) - coeffs.C(tau - d, t)) * (0.5 / d);
                worst = std::max(worst, max_abs(coeffs.C_dtau(tau, t) - cd));
                for (double sigma : {0.2, 0.7}) {
                    const Mat3 ad =
                        (coeffs.A(tau + d, sigma, t) - coeffs.A(tau - d, sigma, t)) * (0.5 / d);
                    worst = std::max(worst, max_abs(coeffs.A_dtau(tau, sigma, t) - ad));
                }
            }
        }
        CHECK(worst <= 1e-8);  // central differences carry ~1e-10 roundoff themselves
    }
}

TEST_CASE("sigma-power decomposition reassembles A") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> arg(0.05, 3.0);
    for (const auto& coeffs : {m1c_coefficients(), m2c_coefficients()}) {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Vec3 b{gauss(rng), gauss(rng), gauss(rng)};
            const PhiSet t = tables_for(coeffs, b, arg(rng));
            for (double tau : {0.0, 0.3, 0.6, 1.0}) {
                for (double sigma : {0.0, 0.25, 0.8, 1.0}) {
                    Mat3 acc = Mat3::zero();
                    double sp = 1.0;
                    for (int j = 0; j < coeffs.degree; ++j) {
                        acc += coeffs.A_sigma_power(j, tau, t) * sp;
                        sp *= sigma;
                    }
                    worst = std::max(worst, max_abs(acc - coeffs.A(tau, sigma, t)));
                }
            }
        }
        CHECK(worst <= 1e-14);
    }
}

TEST_CASE("m2c B moments reproduce phi1 and phi2 at full argument") {
    // int_0^1 B_tau dtau = phi1(hK) and int_0^1 Bbar_tau dtau = phi2(hK)
    // hold exactly for the degree-2 family (first-order conditions).
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    const auto coeffs = m2c_coefficients();
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Vec3 b{gauss(rng), gauss(rng), gauss(rng)};
        const double a = 0.8;
        const PhiSet t = tables_for(coeffs, b, a);
        // closed-form integrals of the linear-in-tau families
        const Mat3 ib = coeffs.B(0.0, t) + (coeffs.B(1.0, t) - coeffs.B(0.0, t)) * 0.5;
        const Mat3 ibb = coeffs.Bbar(0.0, t) + (coeffs.Bbar(1.0, t) - coeffs.Bbar(0.0, t)) * 0.5;
        const PhiTable full = phi_skew_closed(b, a);
        worst = std::max(worst, max_abs(ib - full.phi1));
        worst = std::max(worst, max_abs(ibb - full.phi2));
    }
    CHECK(worst <= 1e-13);
}
