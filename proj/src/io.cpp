#include "tdgl/io.hpp"

#include <cinttypes>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace tdgl {

namespace {

FILE* open_or_throw(const std::string& path, const char* mode) {
  FILE* f = std::fopen(path.c_str(), mode);
  if (!f) throw IOError("cannot open '" + path + "'");
  return f;
}

// vertex samples of the solver fields, averaged over incident cells for the
// cell-based spaces so shared vertices get one well-defined value
struct VertexFields {
  std::vector<double> abs_psi, phase, re_psi, im_psi, phi;
  std::vector<std::array<double, 3>> A, gamma;
};

VertexFields sample_at_vertices(const TDGLSolver& s) {
  const Mesh& m = s.mesh();
  const int nv = m.nverts();
  const int dim = m.dim;
  VertexFields vf;
  vf.abs_psi.assign(nv, 0.0);
  vf.phase.assign(nv, 0.0);
  vf.re_psi.assign(nv, 0.0);
  vf.im_psi.assign(nv, 0.0);
  vf.phi.assign(nv, 0.0);
  vf.A.assign(nv, {0, 0, 0});
  vf.gamma.assign(nv, {0, 0, 0});

  // psi straight from the vertex dofs of the nodal space
  const Space& vpsi = s.psi_space();
  for (int i = 0; i < vpsi.ndofs(); ++i) {
    const auto e = vpsi.dof_entity(i);
    if (e.dim != 0) continue;
    const std::complex<double> z = s.psi()[i];
    vf.re_psi[e.id] = z.real();
    vf.im_psi[e.id] = z.imag();
    vf.abs_psi[e.id] = std::abs(z);
    vf.phase[e.id] = std::arg(z);
  }

  std::vector<int> ninc(nv, 0);
  const double omega = s.options().omega;
  for (int c = 0; c < m.ncells(); ++c) {
    for (int k = 0; k <= dim; ++k) {
      const int v = m.cells[c][k];
      ++ninc[v];
      double av[4] = {0, 0, 0, 0};
      s.A_at(c, m.vertices[v], av);
      double gv[3] = {0, 0, 0};
      s.gamma_at(c, m.vertices[v], gv);
      for (int d = 0; d < 3; ++d) {
        vf.A[v][d] += av[d];
        vf.gamma[v][d] += gv[d];
      }
      vf.phi[v] += -omega * av[dim];
    }
  }
  for (int v = 0; v < nv; ++v) {
    const double inv = ninc[v] > 0 ? 1.0 / ninc[v] : 0.0;
    for (int d = 0; d < 3; ++d) {
      vf.A[v][d] *= inv;
      vf.gamma[v][d] *= inv;
    }
    vf.phi[v] *= inv;
  }
  return vf;
}

void put_scalar(FILE* f, const char* name, const std::vector<double>& v) {
  std::fprintf(f, "SCALARS %s double 1\nLOOKUP_TABLE default\n", name);
  for (double x : v) std::fprintf(f, "%.9g\n", x);
}

void put_vector(FILE* f, const char* name, const std::vector<std::array<double, 3>>& v) {
  std::fprintf(f, "VECTORS %s double\n", name);
  for (const auto& x : v) std::fprintf(f, "%.9g %.9g %.9g\n", x[0], x[1], x[2]);
}

}  // namespace

void write_vtk(const std::string& path, const TDGLSolver& s) {
  const Mesh& m = s.mesh();
  const VertexFields vf = sample_at_vertices(s);
  FILE* f = open_or_throw(path, "w");
  std::fprintf(f, "# vtk DataFile Version 3.0\n");
  std::fprintf(f, "state at t=%.9g step=%d\n", s.time(), s.step_index());
  std::fprintf(f, "ASCII\nDATASET UNSTRUCTURED_GRID\n");
  std::fprintf(f, "POINTS %d double\n", m.nverts());
  for (const auto& p : m.vertices) std::fprintf(f, "%.9g %.9g %.9g\n", p[0], p[1], p[2]);
  const int nvc = m.dim + 1;
  std::fprintf(f, "CELLS %d %d\n", m.ncells(), m.ncells() * (nvc + 1));
  for (int c = 0; c < m.ncells(); ++c) {
    std::fprintf(f, "%d", nvc);
    for (int k = 0; k < nvc; ++k) std::fprintf(f, " %d", m.cells[c][k]);
    std::fprintf(f, "\n");
  }
  std::fprintf(f, "CELL_TYPES %d\n", m.ncells());
  for (int c = 0; c < m.ncells(); ++c) std::fprintf(f, "%d\n", m.dim == 2 ? 5 : 10);
  std::fprintf(f, "POINT_DATA %d\n", m.nverts());
  put_scalar(f, "abs_psi", vf.abs_psi);
  put_scalar(f, "phase", vf.phase);
  put_scalar(f, "re_psi", vf.re_psi);
  put_scalar(f, "im_psi", vf.im_psi);
  put_scalar(f, "phi", vf.phi);
  put_vector(f, "A", vf.A);
  if (m.dim == 2) {
    std::vector<double> g(m.nverts());
    for (int v = 0; v < m.nverts(); ++v) g[v] = vf.gamma[v][0];
    put_scalar(f, "curl_A", g);
  } else {
    put_vector(f, "curl_A", vf.gamma);
  }
  std::fclose(f);
}

void write_run_log_csv(const std::string& path, const std::vector<RunLogEntry>& log) {
  FILE* f = open_or_throw(path, "w");
  std::fprintf(f, "step,t,energy,rel_ediff,vortices\n");
  for (const auto& e : log)
    std::fprintf(f, "%d,%.12g,%.12g,%.12g,%d\n", e.n, e.t, e.energy, e.rel_ediff, e.vortices);
  std::fclose(f);
}

void write_checkpoint(const std::string& path, const TDGLSolver& s) {
  FILE* f = open_or_throw(path, "w");
  const SolverOptions& o = s.options();
  std::fprintf(f, "tdgl-checkpoint v1\n");
  std::fprintf(f, "mesh_hash %" PRIx64 "\n", s.mesh().content_hash());
  std::fprintf(f, "dim %d degree %d\n", s.mesh().dim, o.degree);
  std::fprintf(f, "kappa %a omega %a dt %a\n", o.kappa, o.omega, o.dt);
  std::fprintf(f, "t %a n %d\n", s.time(), s.step_index());
  std::fprintf(f, "psi %d\n", static_cast<int>(s.psi().size()));
  for (Eigen::Index i = 0; i < s.psi().size(); ++i)
    std::fprintf(f, "%a %a\n", s.psi()[i].real(), s.psi()[i].imag());
  std::fprintf(f, "A %d\n", static_cast<int>(s.A().size()));
  for (Eigen::Index i = 0; i < s.A().size(); ++i) std::fprintf(f, "%a\n", s.A()[i]);
  std::fprintf(f, "gamma %d\n", static_cast<int>(s.gamma().size()));
  for (Eigen::Index i = 0; i < s.gamma().size(); ++i) std::fprintf(f, "%a\n", s.gamma()[i]);
  std::fclose(f);
}

namespace {

struct TokenReader {
  std::ifstream in;
  std::string path;
  explicit TokenReader(const std::string& p) : in(p), path(p) {
    if (!in) throw IOError("cannot open '" + p + "'");
  }
  std::string word() {
    std::string w;
    if (!(in >> w)) throw IOError("checkpoint '" + path + "' is truncated");
    return w;
  }
  void expect(const char* lit) {
    const std::string w = word();
    if (w != lit)
      throw IOError("checkpoint '" + path + "': expected '" + lit + "', got '" + w + "'");
  }
  double number() {
    const std::string w = word();
    char* end = nullptr;
    const double v = std::strtod(w.c_str(), &end);  // handles the %a hex form
    if (end == w.c_str() || *end != '\0')
      throw IOError("checkpoint '" + path + "': bad number '" + w + "'");
    return v;
  }
  int integer() { return static_cast<int>(number()); }
};

}  // namespace

Checkpoint read_checkpoint(const std::string& path) {
  TokenReader r(path);
  r.expect("tdgl-checkpoint");
  r.expect("v1");
  Checkpoint ck;
  r.expect("mesh_hash");
  {
    const std::string w = r.word();
    char* end = nullptr;
    ck.mesh_hash = std::strtoull(w.c_str(), &end, 16);
    if (end == w.c_str() || *end != '\0')
      throw IOError("checkpoint '" + path + "': bad mesh hash");
  }
  r.expect("dim");
  ck.dim = r.integer();
  r.expect("degree");
  ck.degree = r.integer();
  r.expect("kappa");
  ck.kappa = r.number();
  r.expect("omega");
  ck.omega = r.number();
  r.expect("dt");
  ck.dt = r.number();
  r.expect("t");
  ck.t = r.number();
  r.expect("n");
  ck.n = r.integer();
  r.expect("psi");
  const int np = r.integer();
  ck.psi.resize(np);
  for (int i = 0; i < np; ++i) {
    const double re = r.number(), im = r.number();
    ck.psi[i] = {re, im};
  }
  r.expect("A");
  const int na = r.integer();
  ck.A.resize(na);
  for (int i = 0; i < na; ++i) ck.A[i] = r.number();
  r.expect("gamma");
  const int ng = r.integer();
  ck.gamma.resize(ng);
  for (int i = 0; i < ng; ++i) ck.gamma[i] = r.number();
  return ck;
}

void install_checkpoint(const Checkpoint& ck, TDGLSolver& s) {
  if (ck.mesh_hash != s.mesh().content_hash())
    throw IOError("checkpoint was written for a different mesh");
  if (ck.dim != s.mesh().dim || ck.degree != s.options().degree)
    throw IOError("checkpoint dimension/degree does not match the solver");
  if (ck.kappa != s.options().kappa)
    throw IOError("checkpoint kappa does not match the solver");
  if (ck.psi.size() != s.psi().size() || ck.A.size() != s.A().size() ||
      ck.gamma.size() != s.gamma().size())
    throw IOError("checkpoint field sizes do not match the solver spaces");
  s.set_omega(ck.omega);
  s.set_state(ck.psi, ck.A, ck.gamma, ck.t, ck.n);
}

}  // namespace tdgl
