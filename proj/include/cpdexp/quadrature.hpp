#pragma once

#include <vector>

namespace cpdexp {

/// Nodes and weights of a quadrature rule on [0, 1].
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] int size() const { return static_cast<int>(nodes.size()); }
};

/// n-point Gauss-Legendre rule mapped to [0, 1]; exact for polynomials of
/// degree <= 2n-1. Nodes are computed by Newton iteration on P_n and cached
/// per n (thread safe). Requires n >= 1.
[[nodiscard]] const Quadrature& gauss_legendre_01(int n);

}  // namespace cpdexp
