#pragma once
#include <array>
#include <vector>

namespace tdgl {

// Quadrature on the reference simplex: interval [0,1], triangle
// (0,0)-(1,0)-(0,1), or tetrahedron (0,0,0)-(1,0,0)-(0,1,0)-(0,0,1).
// Weights sum to the reference volume (1, 1/2, 1/6). All weights positive.
struct QuadratureRule {
  int dim = 0;
  int degree = 0;  // guaranteed polynomial exactness
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int npoints() const { return static_cast<int>(weights.size()); }
};

// Gauss-Legendre on [0,1], n points, exact through degree 2n-1.
QuadratureRule interval_rule(int degree);  // Gauss-Legendre on [0,1], exact to the given degree

// Rule with at least the requested exactness; results are cached.
// dim in {1,2,3}; degree >= 0.
const QuadratureRule& simplex_rule(int dim, int degree);

}  // namespace tdgl
