#pragma once

#include <cstddef>
#include <vector>

namespace atomgrape {

// Nodes and weights for integrals of f(x) exp(-x^2) over the real line.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_hermite(std::size_t order);

}  // namespace atomgrape
