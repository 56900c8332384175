#pragma once

#include <cstddef>
#include <vector>

namespace catspec {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(std::size_t n);

} // namespace catspec
