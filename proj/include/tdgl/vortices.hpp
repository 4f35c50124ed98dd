#pragma once
// Vortex detection and the point-vortex interaction energy. 2D only.
//
// The detector walks each triangle and sums the wrapped phase differences of
// the order parameter between consecutive vertices; a net winding of at least
// half a turn flags the triangle. Edge-adjacent flagged triangles merge into
// one vortex whose position is the centroid of the cluster weighted by cell
// area times phase-depth (1 - mean |psi|).

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "tdgl/space.hpp"

namespace tdgl {

struct Vortex {
  std::array<double, 3> position = {0, 0, 0};
  double winding = 0.0;  // net cluster winding in units of full turns
  int ncells = 0;
};

std::vector<Vortex> count_vortices(const Space& psi_space, const Eigen::VectorXcd& psi);

// independent cross-check: connected components of the suppressed set
// {mean vertex |psi| < tau} that stay clear of the outer boundary
int count_suppressed_regions(const Space& psi_space, const Eigen::VectorXcd& psi,
                             double tau = 0.3);

// -pi sum_{i != j} log |x_i - x_j|  +  C pi n sum_i |x_i|^2
// (points must be distinct)
double renormalized_energy(const std::vector<std::array<double, 3>>& pts, double C);

// area fraction of {mean vertex |psi| < threshold} among the cells whose
// centroid lies within `radius` of `center`; 0 when no cell is in range
double normal_zone_fraction(const Space& psi_space, const Eigen::VectorXcd& psi,
                            const std::array<double, 3>& center, double radius,
                            double threshold);

}  // namespace tdgl
