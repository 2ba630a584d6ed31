#pragma once

#include <vector>

namespace glancing::quad {

// Gauss-Legendre rule on [-1, 1]; n in {4, 8, 16, 20, 32}.
struct Rule {
    std::vector<double> x, w;
};
const Rule& gauss_legendre(int n);

}  // namespace glancing::quad
