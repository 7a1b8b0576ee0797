#include "cpdexp/phi.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace cpdexp {

Mat3 skew_matrix(const Vec3& b) {
    Mat3 w;
    w(0, 1) = b[2];
    w(0, 2) = -b[1];
    w(1, 0) = -b[2];
    w(1, 2) = b[0];
    w(2, 0) = b[1];
    w(2, 1) = -b[0];
    return w;
}

namespace {

constexpr double kSeriesTheta = 0.5;  // switch point for the cancelling coefficients
constexpr int kCoeffSeriesTerms = 10; // truncation < 1e-19 at theta = 1/2

[[nodiscard]] double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// (theta - sin theta)/theta^3 and (theta^2/2 - 1 + cos theta)/theta^4,
// both even in theta.
[[nodiscard]] std::pair<double, double> cancelling_coeffs(double th) {
    if (th < kSeriesTheta) {
        const double t2 = th * th;
        // sum (-1)^m th^(2m) / (2m+3)!  and  sum (-1)^m th^(2m) / (2m+4)!
        double c2 = 0.0, c3 = 0.0, pw = 1.0, f3 = 6.0, f4 = 24.0;
        for (int m = 0; m < kCoeffSeriesTerms; ++m) {
            const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
            c2 += sgn * pw / f3;
            c3 += sgn * pw / f4;
            pw *= t2;
            f3 *= (2.0 * m + 4.0) * (2.0 * m + 5.0);
            f4 *= (2.0 * m + 5.0) * (2.0 * m + 6.0);
        }
        return {c2, c3};
    }
    const double th3 = th * th * th;
    return {(th - std::sin(th)) / th3,
            (th * th / 2.0 - 1.0 + std::cos(th)) / (th3 * th)};
}

}  // namespace

PhiTable phi_skew_closed(const Vec3& b, double scale) {
    for (int i = 0; i < 3; ++i)
        if (!std::isfinite(b[i])) throw std::domain_error("phi_skew_closed: non-finite field");
    if (!std::isfinite(scale)) throw std::domain_error("phi_skew_closed: non-finite scale");

    const Mat3 w = scale * skew_matrix(b);
    const double th = std::abs(scale) * norm(b);

    const double s0 = sinc(th);
    const double half = sinc(0.5 * th);
    const double c1 = 0.5 * half * half;  // (1 - cos th)/th^2, stable for all th
    const auto [c2, c3] = cancelling_coeffs(th);

    const Mat3 w2 = w * w;
    const Mat3 id = Mat3::identity();

    PhiTable t;
    t.arg = w;
    t.phi0 = id + s0 * w + c1 * w2;
    t.phi1 = id + c1 * w + c2 * w2;
    t.phi2 = 0.5 * id + c2 * w + c3 * w2;
    return t;
}

Mat3 phi_series(const Mat3& m, int k, int terms) {
    if (k < 0 || k > 4) throw std::invalid_argument("phi_series: k must be in [0,4]");
    if (terms < 4) throw std::invalid_argument("phi_series: too few terms");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!std::isfinite(m(i, j))) throw std::domain_error("phi_series: non-finite entry");

    // scale the argument below max_abs 1/2
    int s = 0;
    for (double nrm = max_abs(m); nrm > 0.5; nrm /= 2.0) ++s;
    const double inv = std::ldexp(1.0, -s);
    Mat3 a = inv * m;

    // Taylor sums for phi_0..phi_4 at the scaled argument, sharing powers of a.
    std::array<Mat3, 5> ph{};
    Mat3 power = Mat3::identity();
    std::array<double, 5> invfact{};  // 1/(j+kk)! updated per term
    for (int kk = 0; kk <= 4; ++kk) {
        double f = 1.0;
        for (int i = 2; i <= kk; ++i) f *= i;
        invfact[static_cast<std::size_t>(kk)] = 1.0 / f;
    }
    for (int j = 0; j < terms; ++j) {
        for (int kk = 0; kk <= 4; ++kk) {
            ph[static_cast<std::size_t>(kk)] += invfact[static_cast<std::size_t>(kk)] * power;
            invfact[static_cast<std::size_t>(kk)] /= (j + kk + 1);
        }
        power = power * a;
    }

    // undo the scaling with the doubling identities
    //   phi0(2z) = phi0^2
    //   phi1(2z) = (phi0 + I) phi1 / 2
    //   phi2(2z) = (2 phi2 + phi1^2) / 4
    //   phi3(2z) = (2 phi3 + 2 phi2 + z phi2^2) / 8
    //   phi4(2z) = (2 phi4 + 2 phi3 + phi2^2) / 16
    for (int step = 0; step < s; ++step) {
        const Mat3 p2sq = ph[2] * ph[2];
        std::array<Mat3, 5> nx;
        nx[0] = ph[0] * ph[0];
        nx[1] = 0.5 * ((ph[0] + Mat3::identity()) * ph[1]);
        nx[2] = 0.5 * ph[2] + 0.25 * (ph[1] * ph[1]);
        nx[3] = 0.125 * (2.0 * ph[3] + 2.0 * ph[2] + a * p2sq);
        nx[4] = 0.0625 * (2.0 * ph[4] + 2.0 * ph[3] + p2sq);
        ph = nx;
        a = 2.0 * a;
    }
    return ph[static_cast<std::size_t>(k)];
}

void PhiSet::add(double scale, PhiTable table) {
    tables_.emplace_back(scale, table);
}

const PhiTable& PhiSet::at(double scale) const {
    for (const auto& [key, table] : tables_)
        if (std::abs(key - scale) <= 1e-14 * std::max(1.0, std::abs(scale))) return table;
    throw std::out_of_range("PhiSet: no table for requested scale");
}

PhiSet make_phi_set(const Vec3& b, double arg_scale, std::span<const double> scales) {
    PhiSet set;
    for (const double s : scales) set.add(s, phi_skew_closed(b, s * arg_scale));
    return set;
}

}  // namespace cpdexp
