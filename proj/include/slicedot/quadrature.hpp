#pragma once

#include <vector>

namespace slicedot {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss–Legendre rule on [-1, 1], nodes ascending; exact for
// polynomials of degree ≤ 2n − 1.
[[nodiscard]] QuadratureRule gauss_legendre(int n);

}  // namespace slicedot
