#include "tdgl/assembly.hpp"

#include <vector>

namespace tdgl {

namespace {

void scatter_local(std::vector<Eigen::Triplet<double>>& trips, const int* rows,
                   const int* cols, const Eigen::MatrixXd& loc) {
  for (int i = 0; i < loc.rows(); ++i)
    for (int j = 0; j < loc.cols(); ++j) trips.emplace_back(rows[i], cols[j], loc(i, j));
}

}  // namespace

SpMat assemble_mass(const Space& sp, int quad_degree) {
  const Mesh& m = sp.mesh();
  const int nloc = sp.ndofs_cell();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(m.ncells()) * nloc * nloc);
  Eigen::MatrixXd loc(nloc, nloc);
  for (int c = 0; c < m.ncells(); ++c) {
    const ElementTab& t = sp.tab(c, quad_degree);
    const Eigen::Map<const Eigen::VectorXd> w(t.wq.data(), t.nq);
    loc.setZero();
    for (int d = 0; d < sp.vdim(); ++d)
      loc.noalias() += t.val[d].transpose() * w.asDiagonal() * t.val[d];
    scatter_local(trips, sp.cell_dofs(c), sp.cell_dofs(c), loc);
  }
  SpMat M(sp.ndofs(), sp.ndofs());
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

SpMat assemble_grad_grad(const Space& sp, int quad_degree) {
  if (sp.family() != Family::Lagrange)
    throw SpaceError("assemble_grad_grad needs a Lagrange space");
  const Mesh& m = sp.mesh();
  const int nloc = sp.ndofs_cell();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(m.ncells()) * nloc * nloc);
  Eigen::MatrixXd loc(nloc, nloc);
  for (int c = 0; c < m.ncells(); ++c) {
    const ElementTab& t = sp.tab(c, quad_degree);
    const Eigen::Map<const Eigen::VectorXd> w(t.wq.data(), t.nq);
    loc.setZero();
    for (int d = 0; d < sp.nderiv(); ++d)
      loc.noalias() += t.der[d].transpose() * w.asDiagonal() * t.der[d];
    scatter_local(trips, sp.cell_dofs(c), sp.cell_dofs(c), loc);
  }
  SpMat K(sp.ndofs(), sp.ndofs());
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

SpMat assemble_div_div(const Space& sp, int quad_degree) {
  if (sp.family() != Family::RaviartThomas)
    throw SpaceError("assemble_div_div needs a Raviart-Thomas space");
  const Mesh& m = sp.mesh();
  const int nloc = sp.ndofs_cell();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(m.ncells()) * nloc * nloc);
  Eigen::MatrixXd loc(nloc, nloc);
  for (int c = 0; c < m.ncells(); ++c) {
    const ElementTab& t = sp.tab(c, quad_degree);
    const Eigen::Map<const Eigen::VectorXd> w(t.wq.data(), t.nq);
    loc.noalias() = t.der[0].transpose() * w.asDiagonal() * t.der[0];
    scatter_local(trips, sp.cell_dofs(c), sp.cell_dofs(c), loc);
  }
  SpMat D(sp.ndofs(), sp.ndofs());
  D.setFromTriplets(trips.begin(), trips.end());
  return D;
}

SpMat assemble_curl_pair(const Space& gamma, const Space& vec, int quad_degree) {
  if (&gamma.mesh() != &vec.mesh())
    throw SpaceError("assemble_curl_pair: spaces live on different meshes");
  const Mesh& m = gamma.mesh();
  const bool planar = m.dim == 2;
  if (planar && (gamma.family() != Family::Lagrange || vec.family() != Family::RaviartThomas))
    throw SpaceError("assemble_curl_pair: 2D wants Lagrange x Raviart-Thomas");
  if (!planar && (gamma.family() != Family::Nedelec || vec.family() != Family::RaviartThomas))
    throw SpaceError("assemble_curl_pair: 3D wants Nedelec x Raviart-Thomas");
  const int ng = gamma.ndofs_cell(), nv = vec.ndofs_cell();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(m.ncells()) * ng * nv);
  Eigen::MatrixXd loc(ng, nv);
  for (int c = 0; c < m.ncells(); ++c) {
    const ElementTab& tg = gamma.tab(c, quad_degree);
    const ElementTab& tv = vec.tab(c, quad_degree);
    const Eigen::Map<const Eigen::VectorXd> w(tg.wq.data(), tg.nq);
    if (planar) {
      // curl chi = (d chi/dy, -d chi/dx) against (phi_x, phi_y)
      loc.noalias() = tg.der[1].transpose() * w.asDiagonal() * tv.val[0];
      loc.noalias() -= tg.der[0].transpose() * w.asDiagonal() * tv.val[1];
    } else {
      loc.setZero();
      for (int d = 0; d < 3; ++d)
        loc.noalias() += tg.der[d].transpose() * w.asDiagonal() * tv.val[d];
    }
    scatter_local(trips, gamma.cell_dofs(c), vec.cell_dofs(c), loc);
  }
  SpMat C(gamma.ndofs(), vec.ndofs());
  C.setFromTriplets(trips.begin(), trips.end());
  return C;
}

void gather(const Space& sp, const Eigen::VectorXd& u, int cell, double* out) {
  const int* dofs = sp.cell_dofs(cell);
  for (int i = 0; i < sp.ndofs_cell(); ++i) out[i] = u[dofs[i]];
}

void gather(const Space& sp, const Eigen::VectorXcd& u, int cell,
            std::complex<double>* out) {
  const int* dofs = sp.cell_dofs(cell);
  for (int i = 0; i < sp.ndofs_cell(); ++i) out[i] = u[dofs[i]];
}

double l2_error(const Space& sp, const Eigen::VectorXd& u, const Space::Fn& f,
                int quad_degree) {
  const Mesh& m = sp.mesh();
  const int nloc = sp.ndofs_cell();
  Eigen::VectorXd loc(nloc);
  double fx[3], acc = 0.0;
  for (int c = 0; c < m.ncells(); ++c) {
    const ElementTab& t = sp.tab(c, quad_degree);
    gather(sp, u, c, loc.data());
    for (int q = 0; q < t.nq; ++q) {
      f(sp.quad_point(c, t, q), fx);
      for (int d = 0; d < sp.vdim(); ++d) {
        const double e = t.val[d].row(q).dot(loc) - fx[d];
        acc += t.wq[q] * e * e;
      }
    }
  }
  return std::sqrt(acc);
}

double l2_error(const Space& sp, const Eigen::VectorXcd& u, const Space::Fn& f,
                int quad_degree) {
  if (sp.vdim() != 1) throw SpaceError("complex l2_error wants a scalar space");
  const Mesh& m = sp.mesh();
  const int nloc = sp.ndofs_cell();
  Eigen::VectorXcd loc(nloc);
  double fx[2];
  double acc = 0.0;
  for (int c = 0; c < m.ncells(); ++c) {
    const ElementTab& t = sp.tab(c, quad_degree);
    gather(sp, u, c, loc.data());
    for (int q = 0; q < t.nq; ++q) {
      f(sp.quad_point(c, t, q), fx);
      std::complex<double> uh(0.0, 0.0);
      for (int i = 0; i < nloc; ++i) uh += t.val[0](q, i) * loc[i];
      acc += t.wq[q] * std::norm(uh - std::complex<double>(fx[0], fx[1]));
    }
  }
  return std::sqrt(acc);
}

double deriv_l2_error(const Space& sp, const Eigen::VectorXd& u, const Space::Fn& g,
                      int quad_degree) {
  const Mesh& m = sp.mesh();
  const int nloc = sp.ndofs_cell();
  Eigen::VectorXd loc(nloc);
  double gx[3], acc = 0.0;
  for (int c = 0; c < m.ncells(); ++c) {
    const ElementTab& t = sp.tab(c, quad_degree);
    gather(sp, u, c, loc.data());
    for (int q = 0; q < t.nq; ++q) {
      g(sp.quad_point(c, t, q), gx);
      for (int d = 0; d < sp.nderiv(); ++d) {
        const double e = t.der[d].row(q).dot(loc) - gx[d];
        acc += t.wq[q] * e * e;
      }
    }
  }
  return std::sqrt(acc);
}

}  // namespace tdgl
