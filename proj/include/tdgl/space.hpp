// Finite element spaces on simplicial meshes. Basis functions are built per
// cell directly in physical coordinates: each space is a span of monomials in
// the centered, scaled variable (x - centroid)/h, and the basis dual to the
// degree-of-freedom functionals is obtained from a small Vandermonde solve.
// Functionals are defined with globally oriented data only (edges run from
// the lower to the higher vertex id, face normals follow the sorted vertex
// triple), so shared entities carry identical functionals in both incident
// cells and conformity needs no per-cell sign bookkeeping.
//
// Families:
//   Lagrange(p)       scalar nodal space, 2D p <= 3, 3D p <= 2
//   RaviartThomas(k)  H(div), normal trace of degree k-1 on facets;
//                     2D k <= 3 (dim k(k+2)), 3D k = 1 (one dof per face)
//   Nedelec(1)        H(curl) lowest order in 3D, one dof per edge
//
// Cells that are translates of each other (and agree in the orientation of
// their global entities) share one "congruence class": the Vandermonde solve
// and all quadrature tabulations are done once per class. The structured
// generators produce 2 (square) and 6 (cube) classes.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdgl/mesh.hpp"
#include "tdgl/quadrature.hpp"

namespace tdgl {

struct SpaceError : std::runtime_error {
  explicit SpaceError(const std::string& what) : std::runtime_error(what) {}
};

enum class Family { Lagrange, RaviartThomas, Nedelec };

// Basis tabulation at the quadrature points of one congruence class.
// val: vdim matrices of size nq x nloc. der: derivative rows, meaning by
// family: Lagrange gradient (dim matrices), RaviartThomas divergence (one),
// Nedelec curl (three).
struct ElementTab {
  int nq = 0;
  int nloc = 0;
  std::vector<std::array<double, 3>> xq_rel;  // quad points relative to cell vertex 0
  std::vector<double> wq;                     // physical weights
  std::vector<Eigen::MatrixXd> val;
  std::vector<Eigen::MatrixXd> der;
};

class Space {
 public:
  Space(const Mesh& mesh, Family family, int degree);
  ~Space();
  Space(const Space&) = delete;
  Space& operator=(const Space&) = delete;

  const Mesh& mesh() const { return *mesh_; }
  Family family() const { return family_; }
  int degree() const { return degree_; }
  int vdim() const { return vdim_; }    // value components of the field
  int nderiv() const { return nderiv_; }
  int ndofs() const { return ndofs_; }
  int ndofs_cell() const { return nloc_; }
  const int* cell_dofs(int c) const { return cell_dofs_.data() + static_cast<size_t>(c) * nloc_; }

  struct DofEntity {
    int8_t dim;  // 0 vertex, 1 edge, 2 face, mesh dim = cell interior
    int id;
  };
  DofEntity dof_entity(int dof) const { return dof_entity_[dof]; }
  bool dof_on_boundary(int dof) const { return dof_on_boundary_[dof] != 0; }

  // tabulation for the class of this cell at the given quadrature degree;
  // cached per (class, degree)
  const ElementTab& tab(int cell, int quad_degree) const;
  // physical quadrature points for a cell: tab.xq_rel translated by vertex 0
  std::array<double, 3> quad_point(int cell, const ElementTab& t, int q) const;

  // apply the cell's dof functionals to a function with vdim components
  using Fn = std::function<void(const std::array<double, 3>&, double*)>;
  void apply_functionals(int cell, const Fn& f, double* out) const;
  Eigen::VectorXd interpolate(const Fn& f) const;

  // basis values at one physical point of a cell; val is nloc x vdim,
  // optional der is nloc x nderiv
  void eval_basis(int cell, const std::array<double, 3>& x, Eigen::MatrixXd& val,
                  Eigen::MatrixXd* der = nullptr) const;

  int nclasses() const;
  int cell_class(int c) const { return cell_class_[c]; }

 private:
  struct ClassData;
  void build_class(int rep_cell, ClassData& cd) const;

  const Mesh* mesh_;
  Family family_;
  int degree_;
  int vdim_ = 1;
  int nderiv_ = 0;
  int nloc_ = 0;
  int ndofs_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<int> cell_class_;
  std::vector<DofEntity> dof_entity_;
  std::vector<uint8_t> dof_on_boundary_;
  std::vector<ClassData> classes_;
};

}  // namespace tdgl
