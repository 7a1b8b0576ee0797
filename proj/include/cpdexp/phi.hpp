#pragma once

#include <span>
#include <vector>

#include "cpdexp/vec3.hpp"

namespace cpdexp {

/// The entire functions phi_0(z) = e^z, phi_k(z) = sum_j z^j / (j+k)!
/// evaluated at 3x3 matrix arguments. For the skew arguments arising from a
/// magnetic field the closed Rodrigues-type forms below apply; phi_series is
/// the generic reference path.

/// Skew matrix B~ of a field vector b, defined so that B~ v = v x b:
///   [  0    b3  -b2 ]
///   [ -b3   0    b1 ]
///   [  b2  -b1   0  ]
[[nodiscard]] Mat3 skew_matrix(const Vec3& b);

/// phi_0..phi_2 evaluated at a common matrix argument.
struct PhiTable {
    Mat3 arg;   // the matrix the table was evaluated at
    Mat3 phi0;  // e^arg
    Mat3 phi1;
    Mat3 phi2;
};

/// Generic reference evaluation of phi_k(M) for k <= 4: Taylor series on the
/// argument scaled below max_abs 1/2, followed by squaring/doubling steps.
/// Accurate to ~1e-14 relative in max_abs for the argument norms used here.
/// Throws std::domain_error for non-finite input, std::invalid_argument for
/// k outside [0,4].
[[nodiscard]] Mat3 phi_series(const Mat3& m, int k, int terms = 30);

/// Closed-form table for the skew argument W = scale * B~(b), using the
/// Rodrigues decomposition phi_k(W) = alpha_k I + beta_k W + gamma_k W^2
/// with theta = |scale| * |b|:
///   phi0 = I + sinc(theta) W + c1 W^2
///   phi1 = I + c1 W + c2 W^2
///   phi2 = I/2 + c2 W + c3 W^2
/// where c1 = (1-cos)/th^2 = sinc(th/2)^2 / 2, c2 = (th-sin)/th^3,
/// c3 = (th^2/2-1+cos)/th^4. c2 and c3 cancel catastrophically near zero and
/// switch to their (even) Taylor series below theta = 1/2; c1 is evaluated
/// through the half-angle identity which is stable for every theta.
/// The coefficient functions are even in theta, so negative scale is handled
/// by the sign carried in W itself.
[[nodiscard]] PhiTable phi_skew_closed(const Vec3& b, double scale);

/// Tables at the scaled arguments required by a method (e.g. hK and hK/2).
/// Keys are the method-side scale factors, not the absolute arguments.
class PhiSet {
  public:
    PhiSet() = default;

    void add(double scale, PhiTable table);

    /// Lookup by scale key; throws std::out_of_range if absent.
    [[nodiscard]] const PhiTable& at(double scale) const;

  private:
    std::vector<std::pair<double, PhiTable>> tables_;
};

/// Builds tables phi_skew_closed(b, scale * arg_scale) for each requested
/// scale, keyed by scale. arg_scale is typically h/epsilon.
[[nodiscard]] PhiSet make_phi_set(const Vec3& b, double arg_scale,
                                  std::span<const double> scales);

}  // namespace cpdexp
