#pragma once
// Global sparse assembly of the bilinear forms the scheme needs, plus the
// L2-type error functionals used by the convergence studies.
//
// All routines integrate with the cached element tabulations at a caller
// chosen quadrature degree. Matrices are assembled from triplets in cell
// order, so repeated assembly on the same mesh is bit-identical.

#include <Eigen/Sparse>
#include <complex>

#include "tdgl/space.hpp"

namespace tdgl {

using SpMat = Eigen::SparseMatrix<double>;

// (u, v); any family, vdim-aware
SpMat assemble_mass(const Space& sp, int quad_degree);

// (grad u, grad v); Lagrange spaces only
SpMat assemble_grad_grad(const Space& sp, int quad_degree);

// (div u, div v); Raviart-Thomas spaces only
SpMat assemble_div_div(const Space& sp, int quad_degree);

// entry (i, j) = (curl chi_i, phi_j) with chi in `gamma`, phi in `vec`.
// 2D: gamma is scalar Lagrange and curl chi = (d chi/dy, -d chi/dx);
// 3D: gamma is an edge-element space with tabulated curls. Both spaces
// must live on the same mesh.
SpMat assemble_curl_pair(const Space& gamma, const Space& vec, int quad_degree);

// local dof values of a global coefficient vector; out has ndofs_cell entries
void gather(const Space& sp, const Eigen::VectorXd& u, int cell, double* out);
void gather(const Space& sp, const Eigen::VectorXcd& u, int cell,
            std::complex<double>* out);

// || u_h - f ||_L2; f fills vdim values per point
double l2_error(const Space& sp, const Eigen::VectorXd& u, const Space::Fn& f,
                int quad_degree);

// complex scalar fields; f fills {Re, Im}
double l2_error(const Space& sp, const Eigen::VectorXcd& u, const Space::Fn& f,
                int quad_degree);

// || D u_h - g ||_L2 where D is the family's derivative tabulation
// (gradient / divergence / curl); g fills nderiv values per point
double deriv_l2_error(const Space& sp, const Eigen::VectorXd& u, const Space::Fn& g,
                      int quad_degree);

}  // namespace tdgl
