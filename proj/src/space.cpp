#include "tdgl/space.hpp"

#include <algorithm>
#include <cmath>

namespace tdgl {
namespace {

// vector-valued polynomial in the scaled cell variable xi = (x - centroid)/h,
// stored as a sum of monomial terms
struct Term {
  int comp;
  std::array<int, 3> e;
  double c;
};
using VPoly = std::vector<Term>;

double eval_term(const Term& t, const std::array<double, 3>& xi) {
  double v = t.c;
  for (int d = 0; d < 3; ++d)
    for (int k = 0; k < t.e[d]; ++k) v *= xi[d];
  return v;
}

void eval_vpoly(const VPoly& p, const std::array<double, 3>& xi, double* out, int ncomp) {
  std::fill(out, out + ncomp, 0.0);
  for (const auto& t : p) out[t.comp] += eval_term(t, xi);
}

// d/dxi_d of a single term
void append_dterm(VPoly& out, int comp, const Term& t, int d, double scale) {
  if (t.e[d] == 0) return;
  Term r = t;
  r.comp = comp;
  r.c = t.c * t.e[d] * scale;
  r.e[d] -= 1;
  out.push_back(r);
}

double shifted_legendre(int k, double s) {
  // Legendre P_k mapped to [0,1]
  const double t = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = t;
  if (k == 0) return p0;
  if (k == 1) return p1;
  for (int n = 1; n < k; ++n) {
    const double p2 = ((2 * n + 1) * t * p1 - n * p0) / (n + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

using V3 = std::array<double, 3>;

V3 vsub(const V3& a, const V3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double vnorm(const V3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }
V3 vcross(const V3& a, const V3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

// one dof functional: l(f) = sum_q w[q] . f(v0 + x[q])
struct SpaceFunctional {
  std::vector<V3> x;  // relative to cell vertex 0
  std::vector<V3> w;  // vector weight (component 0 only for scalar spaces)
};

struct Space::ClassData {
  int rep = -1;           // representative cell
  double h = 1.0;
  V3 v0 = {0, 0, 0};      // absolute vertex-0 position of the representative cell
  V3 x0_rel = {0, 0, 0};  // centroid - v0
  std::vector<VPoly> mono;
  std::vector<VPoly> dmono;  // derivative polys, physical units, comp < nderiv
  Eigen::MatrixXd C;         // basis_i = sum_j C(j,i) mono_j
  std::vector<SpaceFunctional> fns;
  mutable std::map<int, ElementTab> tabs;
};

Space::~Space() = default;

int Space::nclasses() const { return static_cast<int>(classes_.size()); }

namespace {

// local interior node / moment exponent sets
std::vector<std::array<int, 3>> monomial_exponents(int dim, int maxdeg) {
  std::vector<std::array<int, 3>> out;
  if (maxdeg < 0) return out;
  for (int a = 0; a <= maxdeg; ++a)
    for (int b = 0; a + b <= maxdeg; ++b) {
      if (dim == 2) {
        out.push_back({a, b, 0});
      } else {
        for (int c = 0; a + b + c <= maxdeg; ++c) out.push_back({a, b, c});
      }
    }
  return out;
}

}  // namespace

Space::Space(const Mesh& mesh, Family family, int degree)
    : mesh_(&mesh), family_(family), degree_(degree) {
  const int dim = mesh.dim;
  const int p = degree;

  // admissible combinations and sizes
  int edge_dofs = 0, face_dofs = 0, cell_dofs = 0, vertex_dofs = 0;
  switch (family) {
    case Family::Lagrange:
      if ((dim == 2 && (p < 1 || p > 3)) || (dim == 3 && (p < 1 || p > 2)))
        throw SpaceError("Lagrange degree " + std::to_string(p) + " not supported in " +
                         std::to_string(dim) + "D");
      vdim_ = 1;
      nderiv_ = dim;
      vertex_dofs = 1;
      edge_dofs = p - 1;
      cell_dofs = (dim == 2 && p == 3) ? 1 : 0;
      nloc_ = (dim + 1) + (dim == 2 ? 3 : 6) * edge_dofs + cell_dofs;
      break;
    case Family::RaviartThomas:
      if ((dim == 2 && (p < 1 || p > 3)) || (dim == 3 && p != 1))
        throw SpaceError("RaviartThomas degree " + std::to_string(p) + " not supported in " +
                         std::to_string(dim) + "D");
      vdim_ = dim;
      nderiv_ = 1;  // divergence
      if (dim == 2) {
        edge_dofs = p;
        cell_dofs = p * (p - 1);
        nloc_ = 3 * edge_dofs + cell_dofs;
      } else {
        face_dofs = 1;
        nloc_ = 4;
      }
      break;
    case Family::Nedelec:
      if (dim != 3 || p != 1) throw SpaceError("Nedelec is supported in 3D at lowest order only");
      vdim_ = 3;
      nderiv_ = 3;  // curl
      edge_dofs = 1;
      nloc_ = 6;
      break;
  }

  // global dof layout: vertex blocks, then edge, face, cell blocks
  const int nv = mesh.nverts(), ne = mesh.nedges(), nf = mesh.nfaces(), nc = mesh.ncells();
  const int off_edge = vertex_dofs * nv;
  const int off_face = off_edge + edge_dofs * ne;
  const int off_cell = off_face + face_dofs * nf;
  ndofs_ = off_cell + cell_dofs * nc;

  dof_entity_.resize(ndofs_);
  dof_on_boundary_.assign(ndofs_, 0);
  for (int v = 0; v < nv * vertex_dofs; ++v) {
    dof_entity_[v] = {0, v};
    dof_on_boundary_[v] = mesh.vertex_on_boundary[v];
  }
  for (int e = 0; e < ne; ++e)
    for (int k = 0; k < edge_dofs; ++k) {
      dof_entity_[off_edge + e * edge_dofs + k] = {1, e};
      dof_on_boundary_[off_edge + e * edge_dofs + k] = mesh.edge_on_boundary[e];
    }
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < face_dofs; ++k) {
      dof_entity_[off_face + f * face_dofs + k] = {2, f};
      dof_on_boundary_[off_face + f * face_dofs + k] = mesh.face_on_boundary[f];
    }
  for (int c = 0; c < nc; ++c)
    for (int k = 0; k < cell_dofs; ++k)
      dof_entity_[off_cell + c * cell_dofs + k] = {static_cast<int8_t>(dim), c};

  // cell -> global dofs, in the order the local functionals are built
  cell_dofs_.resize(static_cast<size_t>(nc) * nloc_);
  const int nle = dim == 2 ? 3 : 6;
  for (int c = 0; c < nc; ++c) {
    int* out = cell_dofs_.data() + static_cast<size_t>(c) * nloc_;
    int k = 0;
    if (family == Family::Lagrange) {
      for (int v = 0; v <= dim; ++v) out[k++] = mesh.cells[c][v];
      for (int le = 0; le < nle; ++le)
        for (int j = 0; j < edge_dofs; ++j) out[k++] = off_edge + mesh.cell_edges[c][le] * edge_dofs + j;
      for (int j = 0; j < cell_dofs; ++j) out[k++] = off_cell + c * cell_dofs + j;
    } else if (family == Family::RaviartThomas && dim == 2) {
      for (int le = 0; le < 3; ++le)
        for (int j = 0; j < edge_dofs; ++j) out[k++] = off_edge + mesh.cell_edges[c][le] * edge_dofs + j;
      for (int j = 0; j < cell_dofs; ++j) out[k++] = off_cell + c * cell_dofs + j;
    } else if (family == Family::RaviartThomas) {
      for (int lf = 0; lf < 4; ++lf) out[k++] = off_face + mesh.cell_faces[c][lf];
    } else {
      for (int le = 0; le < 6; ++le) out[k++] = off_edge + mesh.cell_edges[c][le];
    }
    if (k != nloc_) throw SpaceError("internal: local dof count mismatch");
  }

  // congruence classes: cells that are translates with matching global
  // orientation of their entities share basis construction and tabulations
  cell_class_.resize(nc);
  std::map<std::vector<int64_t>, int> key_to_class;
  const double scale = mesh.max_edge_length();
  for (int c = 0; c < nc; ++c) {
    std::vector<int64_t> key;
    const V3& v0 = mesh.vertices[mesh.cells[c][0]];
    for (int v = 1; v <= dim; ++v) {
      const V3 d = vsub(mesh.vertices[mesh.cells[c][v]], v0);
      for (int j = 0; j < 3; ++j) key.push_back(llround(d[j] / scale * 1e12));
    }
    int64_t orient = 0;
    for (int le = 0; le < nle; ++le) {
      const auto& ev = dim == 2 ? tri_edge_verts[le] : tet_edge_verts[le];
      orient = orient * 2 + (mesh.cells[c][ev[0]] < mesh.cells[c][ev[1]] ? 1 : 0);
    }
    if (dim == 3)
      for (int lf = 0; lf < 4; ++lf) {
        // rank of the permutation ordering the face's global ids
        int ids[3];
        for (int j = 0; j < 3; ++j) ids[j] = mesh.cells[c][tet_face_verts[lf][j]];
        int rank = 0;
        for (int a = 0; a < 3; ++a)
          for (int b = a + 1; b < 3; ++b)
            if (ids[a] > ids[b]) rank = rank * 2 + 1; else rank = rank * 2;
        orient = orient * 8 + rank;
      }
    key.push_back(orient);
    auto [it, inserted] = key_to_class.try_emplace(key, static_cast<int>(classes_.size()));
    cell_class_[c] = it->second;
    if (inserted) {
      classes_.emplace_back();
      build_class(c, classes_.back());
    }
  }
}

void Space::build_class(int rep, ClassData& cd) const {
  const Mesh& mesh = *mesh_;
  const int dim = mesh.dim;
  const int p = degree_;

  cd.rep = rep;
  cd.v0 = mesh.vertices[mesh.cells[rep][0]];
  const auto cen = mesh.cell_centroid(rep);
  cd.x0_rel = vsub(cen, cd.v0);
  double h = 0.0;
  for (int a = 0; a <= dim; ++a)
    for (int b = a + 1; b <= dim; ++b)
      h = std::max(h, vnorm(vsub(mesh.vertices[mesh.cells[rep][a]],
                                 mesh.vertices[mesh.cells[rep][b]])));
  cd.h = h;

  // ----- monomial span -----
  cd.mono.clear();
  if (family_ == Family::Lagrange) {
    for (const auto& e : monomial_exponents(dim, p)) cd.mono.push_back({{0, e, 1.0}});
  } else if (family_ == Family::RaviartThomas) {
    for (int comp = 0; comp < dim; ++comp)
      for (const auto& e : monomial_exponents(dim, p - 1)) cd.mono.push_back({{comp, e, 1.0}});
    for (const auto& e : monomial_exponents(dim, p - 1)) {
      if (e[0] + e[1] + e[2] != p - 1) continue;  // homogeneous top degree
      VPoly v;
      for (int comp = 0; comp < dim; ++comp) {
        Term t{comp, e, 1.0};
        t.e[comp] += 1;
        v.push_back(t);
      }
      cd.mono.push_back(v);
    }
  } else {
    for (int comp = 0; comp < 3; ++comp) cd.mono.push_back({{comp, {0, 0, 0}, 1.0}});
    // b x xi for b = e_x, e_y, e_z
    cd.mono.push_back({{1, {0, 0, 1}, -1.0}, {2, {0, 1, 0}, 1.0}});
    cd.mono.push_back({{0, {0, 0, 1}, 1.0}, {2, {1, 0, 0}, -1.0}});
    cd.mono.push_back({{0, {0, 1, 0}, -1.0}, {1, {1, 0, 0}, 1.0}});
  }
  if (static_cast<int>(cd.mono.size()) != nloc_)
    throw SpaceError("internal: monomial span size mismatch");

  // ----- derivative polys (physical units: each d/dx = (1/h) d/dxi) -----
  const double is = 1.0 / cd.h;
  cd.dmono.assign(nloc_, {});
  for (int j = 0; j < nloc_; ++j) {
    VPoly& dp = cd.dmono[j];
    for (const auto& t : cd.mono[j]) {
      if (family_ == Family::Lagrange) {
        for (int d = 0; d < dim; ++d) append_dterm(dp, d, t, d, is);
      } else if (family_ == Family::RaviartThomas) {
        append_dterm(dp, 0, t, t.comp, is);  // div: d(comp)/dx_comp
      } else {
        // curl rows: (d_y v_z - d_z v_y, d_z v_x - d_x v_z, d_x v_y - d_y v_x)
        if (t.comp == 2) append_dterm(dp, 0, t, 1, is);
        if (t.comp == 1) append_dterm(dp, 0, {t.comp, t.e, -t.c}, 2, is);
        if (t.comp == 0) append_dterm(dp, 1, t, 2, is);
        if (t.comp == 2) append_dterm(dp, 1, {t.comp, t.e, -t.c}, 0, is);
        if (t.comp == 1) append_dterm(dp, 2, t, 0, is);
        if (t.comp == 0) append_dterm(dp, 2, {t.comp, t.e, -t.c}, 1, is);
      }
    }
  }

  // ----- dof functionals, in the cell_dofs order -----
  cd.fns.clear();
  const int c = rep;
  auto edge_endpoints = [&](int le, V3& lo, V3& hi) {
    const int ge = mesh.cell_edges[c][le];
    lo = mesh.vertices[mesh.edges[ge][0]];
    hi = mesh.vertices[mesh.edges[ge][1]];
  };
  if (family_ == Family::Lagrange) {
    for (int v = 0; v <= dim; ++v) {
      SpaceFunctional f;
      f.x.push_back(vsub(mesh.vertices[mesh.cells[c][v]], cd.v0));
      f.w.push_back({1.0, 0.0, 0.0});
      cd.fns.push_back(std::move(f));
    }
    const int nle = dim == 2 ? 3 : 6;
    for (int le = 0; le < nle; ++le) {
      V3 lo, hi;
      edge_endpoints(le, lo, hi);
      for (int j = 1; j < p; ++j) {
        const double s = static_cast<double>(j) / p;
        SpaceFunctional f;
        f.x.push_back(
            vsub({lo[0] + s * (hi[0] - lo[0]), lo[1] + s * (hi[1] - lo[1]), lo[2] + s * (hi[2] - lo[2])},
                 cd.v0));
        f.w.push_back({1.0, 0.0, 0.0});
        cd.fns.push_back(std::move(f));
      }
    }
    if (dim == 2 && p == 3) {
      SpaceFunctional f;
      f.x.push_back(cd.x0_rel);
      f.w.push_back({1.0, 0.0, 0.0});
      cd.fns.push_back(std::move(f));
    }
  } else if (family_ == Family::RaviartThomas && dim == 2) {
    const QuadratureRule lineq = interval_rule(2 * p);
    for (int le = 0; le < 3; ++le) {
      V3 lo, hi;
      edge_endpoints(le, lo, hi);
      const V3 t = vsub(hi, lo);
      const double len = vnorm(t);
      const V3 n = {t[1] / len, -t[0] / len, 0.0};
      for (int j = 0; j < p; ++j) {
        SpaceFunctional f;
        for (int q = 0; q < lineq.npoints(); ++q) {
          const double s = lineq.points[q][0];
          const double wq = lineq.weights[q] * len * shifted_legendre(j, s);
          f.x.push_back(vsub({lo[0] + s * t[0], lo[1] + s * t[1], 0.0}, cd.v0));
          f.w.push_back({wq * n[0], wq * n[1], 0.0});
        }
        cd.fns.push_back(std::move(f));
      }
    }
    if (p >= 2) {
      const QuadratureRule& cq = simplex_rule(2, 2 * p);
      const V3& a = mesh.vertices[mesh.cells[c][0]];
      const V3 e1 = vsub(mesh.vertices[mesh.cells[c][1]], a);
      const V3 e2 = vsub(mesh.vertices[mesh.cells[c][2]], a);
      const double jac = std::abs(e1[0] * e2[1] - e1[1] * e2[0]);
      for (const auto& me : monomial_exponents(2, p - 2))
        for (int comp = 0; comp < 2; ++comp) {
          SpaceFunctional f;
          for (int q = 0; q < cq.npoints(); ++q) {
            const double u = cq.points[q][0], v = cq.points[q][1];
            const V3 x = {a[0] + u * e1[0] + v * e2[0], a[1] + u * e1[1] + v * e2[1], 0.0};
            const std::array<double, 3> xi = {(x[0] - cd.v0[0] - cd.x0_rel[0]) / cd.h,
                                              (x[1] - cd.v0[1] - cd.x0_rel[1]) / cd.h, 0.0};
            const double wq = cq.weights[q] * jac * eval_term({0, me, 1.0}, xi);
            V3 w = {0, 0, 0};
            w[comp] = wq;
            f.x.push_back(vsub(x, cd.v0));
            f.w.push_back(w);
          }
          cd.fns.push_back(std::move(f));
        }
    }
  } else if (family_ == Family::RaviartThomas) {
    const QuadratureRule& fq = simplex_rule(2, 2);
    for (int lf = 0; lf < 4; ++lf) {
      const auto& fv = mesh.faces[mesh.cell_faces[c][lf]];
      const V3 &a = mesh.vertices[fv[0]], &b = mesh.vertices[fv[1]], &d = mesh.vertices[fv[2]];
      const V3 nr = vcross(vsub(b, a), vsub(d, a));
      SpaceFunctional f;
      for (int q = 0; q < fq.npoints(); ++q) {
        const double u = fq.points[q][0], v = fq.points[q][1];
        const V3 x = {a[0] + u * (b[0] - a[0]) + v * (d[0] - a[0]),
                      a[1] + u * (b[1] - a[1]) + v * (d[1] - a[1]),
                      a[2] + u * (b[2] - a[2]) + v * (d[2] - a[2])};
        // dS = |nr| du dv, so unit normal times surface measure is nr du dv
        const double wq = fq.weights[q];
        f.x.push_back(vsub(x, cd.v0));
        f.w.push_back({wq * nr[0], wq * nr[1], wq * nr[2]});
      }
      cd.fns.push_back(std::move(f));
    }
  } else {
    const QuadratureRule lineq = interval_rule(2);
    for (int le = 0; le < 6; ++le) {
      V3 lo, hi;
      edge_endpoints(le, lo, hi);
      const V3 t = vsub(hi, lo);
      SpaceFunctional f;
      for (int q = 0; q < lineq.npoints(); ++q) {
        const double s = lineq.points[q][0];
        const double wq = lineq.weights[q];  // t carries the length factor
        f.x.push_back(vsub({lo[0] + s * t[0], lo[1] + s * t[1], lo[2] + s * t[2]}, cd.v0));
        f.w.push_back({wq * t[0], wq * t[1], wq * t[2]});
      }
      cd.fns.push_back(std::move(f));
    }
  }
  if (static_cast<int>(cd.fns.size()) != nloc_)
    throw SpaceError("internal: functional count mismatch");

  // ----- Vandermonde solve -----
  Eigen::MatrixXd V(nloc_, nloc_);
  for (int i = 0; i < nloc_; ++i)
    for (int j = 0; j < nloc_; ++j) {
      double acc = 0.0;
      for (size_t q = 0; q < cd.fns[i].x.size(); ++q) {
        const std::array<double, 3> xi = {(cd.fns[i].x[q][0] - cd.x0_rel[0]) / cd.h,
                                          (cd.fns[i].x[q][1] - cd.x0_rel[1]) / cd.h,
                                          (cd.fns[i].x[q][2] - cd.x0_rel[2]) / cd.h};
        double val[3];
        eval_vpoly(cd.mono[j], xi, val, 3);
        acc += cd.fns[i].w[q][0] * val[0] + cd.fns[i].w[q][1] * val[1] + cd.fns[i].w[q][2] * val[2];
      }
      V(i, j) = acc;
    }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
  if (!lu.isInvertible())
    throw SpaceError("element construction failed: singular dof/basis pairing");
  cd.C = lu.inverse();
}

const ElementTab& Space::tab(int cell, int quad_degree) const {
  const ClassData& cd = classes_[cell_class_[cell]];
  auto it = cd.tabs.find(quad_degree);
  if (it != cd.tabs.end()) return it->second;

  const Mesh& mesh = *mesh_;
  const int dim = mesh.dim;
  const QuadratureRule& rule = simplex_rule(dim, quad_degree);
  ElementTab t;
  t.nq = rule.npoints();
  t.nloc = nloc_;

  // representative cell affine map
  const int rep = cd.rep;
  const V3& a = mesh.vertices[mesh.cells[rep][0]];
  V3 ed[3];
  for (int v = 1; v <= dim; ++v) ed[v - 1] = vsub(mesh.vertices[mesh.cells[rep][v]], a);
  const double volratio = mesh.cell_volume(rep) / (dim == 2 ? 0.5 : 1.0 / 6.0);

  t.xq_rel.resize(t.nq);
  t.wq.resize(t.nq);
  Eigen::MatrixXd monoval[3], monoder[3];
  for (int cmp = 0; cmp < vdim_; ++cmp) monoval[cmp].setZero(t.nq, nloc_);
  for (int cmp = 0; cmp < nderiv_; ++cmp) monoder[cmp].setZero(t.nq, nloc_);
  for (int q = 0; q < t.nq; ++q) {
    V3 xr = {0, 0, 0};
    for (int d2 = 0; d2 < 3; ++d2) {
      xr[d2] = 0.0;
      for (int v = 0; v < dim; ++v) xr[d2] += rule.points[q][v] * ed[v][d2];
    }
    t.xq_rel[q] = xr;
    t.wq[q] = rule.weights[q] * volratio;
    const std::array<double, 3> xi = {(xr[0] - cd.x0_rel[0]) / cd.h, (xr[1] - cd.x0_rel[1]) / cd.h,
                                      (xr[2] - cd.x0_rel[2]) / cd.h};
    double buf[3];
    for (int j = 0; j < nloc_; ++j) {
      eval_vpoly(cd.mono[j], xi, buf, 3);
      for (int cmp = 0; cmp < vdim_; ++cmp) monoval[cmp](q, j) = buf[cmp];
      eval_vpoly(cd.dmono[j], xi, buf, 3);
      for (int cmp = 0; cmp < nderiv_; ++cmp) monoder[cmp](q, j) = buf[cmp];
    }
  }
  t.val.resize(vdim_);
  t.der.resize(nderiv_);
  for (int cmp = 0; cmp < vdim_; ++cmp) t.val[cmp] = monoval[cmp] * cd.C;
  for (int cmp = 0; cmp < nderiv_; ++cmp) t.der[cmp] = monoder[cmp] * cd.C;

  return cd.tabs.emplace(quad_degree, std::move(t)).first->second;
}

std::array<double, 3> Space::quad_point(int cell, const ElementTab& t, int q) const {
  const V3& v0 = mesh_->vertices[mesh_->cells[cell][0]];
  return {v0[0] + t.xq_rel[q][0], v0[1] + t.xq_rel[q][1], v0[2] + t.xq_rel[q][2]};
}

void Space::apply_functionals(int cell, const Fn& f, double* out) const {
  const ClassData& cd = classes_[cell_class_[cell]];
  const V3& v0 = mesh_->vertices[mesh_->cells[cell][0]];
  for (int i = 0; i < nloc_; ++i) {
    double acc = 0.0;
    for (size_t q = 0; q < cd.fns[i].x.size(); ++q) {
      const std::array<double, 3> x = {v0[0] + cd.fns[i].x[q][0], v0[1] + cd.fns[i].x[q][1],
                                       v0[2] + cd.fns[i].x[q][2]};
      double val[3] = {0, 0, 0};
      f(x, val);
      acc += cd.fns[i].w[q][0] * val[0] + cd.fns[i].w[q][1] * val[1] + cd.fns[i].w[q][2] * val[2];
    }
    out[i] = acc;
  }
}

Eigen::VectorXd Space::interpolate(const Fn& f) const {
  Eigen::VectorXd u(ndofs_);
  std::vector<double> local(nloc_);
  for (int c = 0; c < mesh_->ncells(); ++c) {
    apply_functionals(c, f, local.data());
    const int* dofs = cell_dofs(c);
    for (int i = 0; i < nloc_; ++i) u[dofs[i]] = local[i];
  }
  return u;
}

void Space::eval_basis(int cell, const std::array<double, 3>& x, Eigen::MatrixXd& val,
                       Eigen::MatrixXd* der) const {
  const ClassData& cd = classes_[cell_class_[cell]];
  const V3& v0 = mesh_->vertices[mesh_->cells[cell][0]];
  const std::array<double, 3> xi = {(x[0] - v0[0] - cd.x0_rel[0]) / cd.h,
                                    (x[1] - v0[1] - cd.x0_rel[1]) / cd.h,
                                    (x[2] - v0[2] - cd.x0_rel[2]) / cd.h};
  double buf[3];
  Eigen::MatrixXd mv(nloc_, vdim_), md(nloc_, nderiv_);
  for (int j = 0; j < nloc_; ++j) {
    eval_vpoly(cd.mono[j], xi, buf, 3);
    for (int cmp = 0; cmp < vdim_; ++cmp) mv(j, cmp) = buf[cmp];
    eval_vpoly(cd.dmono[j], xi, buf, 3);
    for (int cmp = 0; cmp < nderiv_; ++cmp) md(j, cmp) = buf[cmp];
  }
  val = cd.C.transpose() * mv;
  if (der) *der = cd.C.transpose() * md;
}

}  // namespace tdgl
