#pragma once

#include <vector>

namespace sgm {

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes from the eigenvalues of the Jacobi matrix (Golub-Welsch), polished
/// by Newton on P_n; weights 2 / ((1 - x^2) P_n'(x)^2).
GaussLegendre gauss_legendre(int n);

}  // namespace sgm
