#pragma once

#include <array>
#include <cmath>

namespace cpdexp {

/// Fixed-size 3-vector with value semantics. Components are accessed by
/// index; the physical coordinates x1, x2, x3 map to [0], [1], [2].
struct Vec3 {
    std::array<double, 3> e{0.0, 0.0, 0.0};

    constexpr Vec3() = default;
    constexpr Vec3(double a, double b, double c) : e{a, b, c} {}

    [[nodiscard]] constexpr double operator[](int i) const { return e[static_cast<std::size_t>(i)]; }
    [[nodiscard]] constexpr double& operator[](int i) { return e[static_cast<std::size_t>(i)]; }

    constexpr Vec3& operator+=(const Vec3& o) {
        e[0] += o.e[0]; e[1] += o.e[1]; e[2] += o.e[2];
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        e[0] -= o.e[0]; e[1] -= o.e[1]; e[2] -= o.e[2];
        return *this;
    }
    constexpr Vec3& operator*=(double s) {
        e[0] *= s; e[1] *= s; e[2] *= s;
        return *this;
    }
};

[[nodiscard]] constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
[[nodiscard]] constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
[[nodiscard]] constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
[[nodiscard]] constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
[[nodiscard]] constexpr Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

[[nodiscard]] constexpr double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

[[nodiscard]] constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

[[nodiscard]] inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

[[nodiscard]] inline double norm_inf(const Vec3& a) {
    return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

/// Row-major 3x3 matrix. The norm used throughout the library is the
/// maximum absolute entry (max_abs).
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    [[nodiscard]] constexpr double operator()(int i, int j) const {
        return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    [[nodiscard]] constexpr double& operator()(int i, int j) {
        return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }

    [[nodiscard]] static constexpr Mat3 zero() { return {}; }

    [[nodiscard]] static constexpr Mat3 identity() {
        Mat3 r;
        r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
        return r;
    }

    constexpr Mat3& operator+=(const Mat3& o) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) (*this)(i, j) += o(i, j);
        return *this;
    }
    constexpr Mat3& operator-=(const Mat3& o) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) (*this)(i, j) -= o(i, j);
        return *this;
    }
    constexpr Mat3& operator*=(double s) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) (*this)(i, j) *= s;
        return *this;
    }
};

[[nodiscard]] constexpr Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
[[nodiscard]] constexpr Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
[[nodiscard]] constexpr Mat3 operator*(double s, Mat3 a) { return a *= s; }
[[nodiscard]] constexpr Mat3 operator*(Mat3 a, double s) { return a *= s; }

[[nodiscard]] constexpr Vec3 operator*(const Mat3& a, const Vec3& v) {
    return {a(0, 0) * v[0] + a(0, 1) * v[1] + a(0, 2) * v[2],
            a(1, 0) * v[0] + a(1, 1) * v[1] + a(1, 2) * v[2],
            a(2, 0) * v[0] + a(2, 1) * v[1] + a(2, 2) * v[2]};
}

[[nodiscard]] constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
}

[[nodiscard]] constexpr Mat3 transpose(const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
    return r;
}

[[nodiscard]] constexpr Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
    return r;
}

/// Maximum absolute entry; the matrix norm used by every tolerance in this
/// library.
[[nodiscard]] inline double max_abs(const Mat3& a) {
    double r = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r = std::max(r, std::abs(a(i, j)));
    return r;
}

}  // namespace cpdexp
