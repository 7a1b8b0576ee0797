#include "cpdexp/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace cpdexp {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

Quadrature build(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be >= 1");
    Quadrature q;
    q.nodes.resize(static_cast<std::size_t>(n));
    q.weights.resize(static_cast<std::size_t>(n));
    if (n == 1) {
        q.nodes[0] = 0.5;
        q.weights[0] = 1.0;
        return q;
    }
    for (int i = 0; i < n; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const auto [p, dp] = legendre(n, x);
        (void)p;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]; reverse so nodes come out ascending
        q.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (x + 1.0);
        q.weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
    }
    return q;
}

}  // namespace

const Quadrature& gauss_legendre_01(int n) {
    static std::mutex mtx;
    static std::map<int, Quadrature> cache;
    std::scoped_lock lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build(n)).first;
    return it->second;
}

}  // namespace cpdexp
