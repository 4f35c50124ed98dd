#include "tdgl/convergence.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "tdgl/assembly.hpp"

namespace tdgl {

double richardson_order(double e_coarse, double e_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !std::isfinite(e_coarse) ||
      !std::isfinite(e_fine))
    throw std::invalid_argument("richardson_order needs positive finite errors");
  return std::log2(e_coarse / e_fine);
}

namespace {

Mesh make_mesh(int dim, int M) {
  return dim == 2 ? generate_unit_square_mesh(M) : generate_unit_cube_mesh(M);
}

// L2 differences of all five columns between solutions on nested meshes,
// integrated on the finer one. The difference of two same-degree polynomials
// is integrated exactly at degree 2r + 2.
std::array<double, 5> pair_difference(const TDGLSolver& coarse, const TDGLSolver& fine) {
  const Mesh& mf = fine.mesh();
  const Mesh& mc = coarse.mesh();
  const int dim = mf.dim;
  const int qd = 2 * fine.options().degree + 2;
  const Space& pf = fine.psi_space();
  const Space& af = fine.A_space();
  const Space& gf = fine.gamma_space();
  const Space& pc = coarse.psi_space();
  const Space& ac = coarse.A_space();
  const Space& gc = coarse.gamma_space();
  const int gcomp = gf.vdim();
  const int gder = gf.nderiv();

  double acc[5] = {0, 0, 0, 0, 0};
  std::vector<std::complex<double>> plf(pf.ndofs_cell()), plc(pc.ndofs_cell());
  std::vector<double> alf(af.ndofs_cell()), alc(ac.ndofs_cell());
  std::vector<double> glf(gf.ndofs_cell()), glc(gc.ndofs_cell());
  Eigen::MatrixXd vp, va, vg, va_d, vg_d;
  for (int cf = 0; cf < mf.ncells(); ++cf) {
    const int cc = locate_structured_cell(mc, mf.cell_centroid(cf));
    const ElementTab& tp = pf.tab(cf, qd);
    const ElementTab& ta = af.tab(cf, qd);
    const ElementTab& tg = gf.tab(cf, qd);
    gather(pf, fine.psi(), cf, plf.data());
    gather(af, fine.A(), cf, alf.data());
    gather(gf, fine.gamma(), cf, glf.data());
    gather(pc, coarse.psi(), cc, plc.data());
    gather(ac, coarse.A(), cc, alc.data());
    gather(gc, coarse.gamma(), cc, glc.data());
    for (int q = 0; q < tp.nq; ++q) {
      const std::array<double, 3> x = pf.quad_point(cf, tp, q);
      const double w = tp.wq[q];

      std::complex<double> psi_f(0, 0), psi_c(0, 0);
      for (int i = 0; i < tp.nloc; ++i) psi_f += tp.val[0](q, i) * plf[i];
      pc.eval_basis(cc, x, vp);
      for (int i = 0; i < pc.ndofs_cell(); ++i) psi_c += vp(i, 0) * plc[i];
      acc[0] += w * std::norm(psi_f - psi_c);

      double Af[3] = {0, 0, 0}, Ac[3] = {0, 0, 0}, divf = 0, divc = 0;
      for (int j = 0; j < ta.nloc; ++j) {
        for (int d = 0; d < dim; ++d) Af[d] += ta.val[d](q, j) * alf[j];
        divf += ta.der[0](q, j) * alf[j];
      }
      ac.eval_basis(cc, x, va, &va_d);
      for (int j = 0; j < ac.ndofs_cell(); ++j) {
        for (int d = 0; d < dim; ++d) Ac[d] += va(j, d) * alc[j];
        divc += va_d(j, 0) * alc[j];
      }
      for (int d = 0; d < dim; ++d) acc[1] += w * (Af[d] - Ac[d]) * (Af[d] - Ac[d]);
      acc[4] += w * (divf - divc) * (divf - divc);

      double gvf[3] = {0, 0, 0}, gvc[3] = {0, 0, 0};
      double gdf[3] = {0, 0, 0}, gdc[3] = {0, 0, 0};
      for (int i = 0; i < tg.nloc; ++i) {
        for (int d = 0; d < gcomp; ++d) gvf[d] += tg.val[d](q, i) * glf[i];
        for (int d = 0; d < gder; ++d) gdf[d] += tg.der[d](q, i) * glf[i];
      }
      gc.eval_basis(cc, x, vg, &vg_d);
      for (int i = 0; i < gc.ndofs_cell(); ++i) {
        for (int d = 0; d < gcomp; ++d) gvc[d] += vg(i, d) * glc[i];
        for (int d = 0; d < gder; ++d) gdc[d] += vg_d(i, d) * glc[i];
      }
      for (int d = 0; d < gcomp; ++d) acc[2] += w * (gvf[d] - gvc[d]) * (gvf[d] - gvc[d]);
      // in 2D the gradient rows stand in for the rotated curl isometrically
      for (int d = 0; d < gder; ++d) acc[3] += w * (gdf[d] - gdc[d]) * (gdf[d] - gdc[d]);
    }
  }
  std::array<double, 5> out;
  for (int i = 0; i < 5; ++i) out[i] = std::sqrt(acc[i]);
  return out;
}

void finish_slopes(GraphicalStudy& st) {
  const int n = static_cast<int>(st.levels.size());
  for (int k = 0; k + 1 < n; ++k) {
    std::array<double, 5> seg;
    for (int i = 0; i < 5; ++i)
      seg[i] = richardson_order(st.levels[k].error[i], st.levels[k + 1].error[i]);
    st.segment_slopes.push_back(seg);
  }
  // least squares over the finest three levels: log e = -p log M + c
  const int first = n >= 3 ? n - 3 : 0;
  const int m = n - first;
  for (int i = 0; i < 5; ++i) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = first; k < n; ++k) {
      const double xk = std::log(1.0 / st.levels[k].M);
      const double yk = std::log(st.levels[k].error[i]);
      sx += xk;
      sy += yk;
      sxx += xk * xk;
      sxy += xk * yk;
    }
    st.slopes[i] = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
}

}  // namespace

RichardsonStudy richardson_study(const ManufacturedCase& c, int degree, int base_M,
                                 int nlevels, double dt, int nsteps) {
  if (nlevels < 3) throw std::invalid_argument("richardson study needs at least 3 levels");
  RichardsonStudy st;
  std::unique_ptr<Mesh> prev_mesh, cur_mesh;
  std::unique_ptr<TDGLSolver> prev, cur;
  int M = base_M;
  for (int k = 0; k < nlevels; ++k, M *= 2) {
    cur_mesh = std::make_unique<Mesh>(make_mesh(c.dim, M));
    SolverOptions o;
    o.degree = degree;
    o.kappa = c.kappa;
    o.omega = c.omega;
    o.dt = dt;
    cur = std::make_unique<TDGLSolver>(*cur_mesh, o);
    cur->use_manufactured(c);
    for (int s = 0; s < nsteps; ++s) cur->step();
    if (prev) {
      RichardsonLevel lv;
      lv.M = M;
      lv.diff = pair_difference(*prev, *cur);
      st.levels.push_back(lv);
    }
    prev = std::move(cur);
    prev_mesh = std::move(cur_mesh);
  }
  const auto& d1 = st.levels[st.levels.size() - 2].diff;
  const auto& d2 = st.levels.back().diff;
  for (int i = 0; i < 5; ++i) st.orders[i] = richardson_order(d1[i], d2[i]);
  return st;
}

GraphicalStudy graphical_study(const ManufacturedCase& c, int degree, int base_M,
                               int nlevels, double t_final) {
  if (nlevels < 2) throw std::invalid_argument("graphical study needs at least 2 levels");
  GraphicalStudy st;
  int M = base_M;
  for (int k = 0; k < nlevels; ++k, M *= 2) {
    const double dt = 1.0 / (static_cast<double>(M) * M * M);
    const int nsteps = static_cast<int>(std::llround(t_final / dt));
    Mesh mesh = make_mesh(c.dim, M);
    SolverOptions o;
    o.degree = degree;
    o.kappa = c.kappa;
    o.omega = c.omega;
    o.dt = dt;
    TDGLSolver s(mesh, o);
    s.use_manufactured(c);
    for (int n = 0; n < nsteps; ++n) s.step();
    GraphicalLevel lv;
    lv.M = M;
    lv.dt = dt;
    lv.error = s.errors_vs_exact();
    st.levels.push_back(lv);
  }
  finish_slopes(st);
  return st;
}

GraphicalStudy graphical_study_interpolants(const ManufacturedCase& c, int degree,
                                            int base_M, int nlevels, double t_final) {
  if (nlevels < 2) throw std::invalid_argument("graphical study needs at least 2 levels");
  GraphicalStudy st;
  const int qe = 2 * degree + 4;
  int M = base_M;
  for (int k = 0; k < nlevels; ++k, M *= 2) {
    Mesh mesh = make_mesh(c.dim, M);
    Space vp(mesh, Family::Lagrange, degree);
    Space va(mesh, Family::RaviartThomas, c.dim == 2 ? degree + 1 : 1);
    Space vg = c.dim == 2 ? Space(mesh, Family::Lagrange, degree + 1)
                          : Space(mesh, Family::Nedelec, 1);
    const double t = t_final;
    Eigen::VectorXd pre = vp.interpolate([&](const std::array<double, 3>& x, double* out) {
      double reim[2];
      c.psi(x, t, reim);
      out[0] = reim[0];
    });
    Eigen::VectorXd pim = vp.interpolate([&](const std::array<double, 3>& x, double* out) {
      double reim[2];
      c.psi(x, t, reim);
      out[0] = reim[1];
    });
    Eigen::VectorXcd psi(pre.size());
    psi.real() = pre;
    psi.imag() = pim;
    Eigen::VectorXd A =
        va.interpolate([&](const std::array<double, 3>& x, double* out) { c.A(x, t, out); });
    Eigen::VectorXd gamma =
        vg.interpolate([&](const std::array<double, 3>& x, double* out) { c.gamma(x, t, out); });

    GraphicalLevel lv;
    lv.M = M;
    lv.dt = 1.0 / (static_cast<double>(M) * M * M);
    lv.error[0] = l2_error(
        vp, psi, [&](const std::array<double, 3>& x, double* out) { c.psi(x, t, out); }, qe);
    lv.error[1] = l2_error(
        va, A, [&](const std::array<double, 3>& x, double* out) { c.A(x, t, out); }, qe);
    lv.error[2] = l2_error(
        vg, gamma, [&](const std::array<double, 3>& x, double* out) { c.gamma(x, t, out); }, qe);
    lv.error[3] = deriv_l2_error(
        vg, gamma, [&](const std::array<double, 3>& x, double* out) { c.gamma_deriv(x, t, out); },
        qe);
    lv.error[4] = deriv_l2_error(
        va, A, [&](const std::array<double, 3>& x, double* out) { c.div_A(x, t, out); }, qe);
    st.levels.push_back(lv);
  }
  finish_slopes(st);
  return st;
}

void write_study_csv(const std::string& path, const RichardsonStudy& st) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::fprintf(f, "M_fine,psi,A,gamma,curl_gamma,div_A\n");
  for (const auto& lv : st.levels) {
    std::fprintf(f, "%d", lv.M);
    for (double d : lv.diff) std::fprintf(f, ",%.8g", d);
    std::fprintf(f, "\n");
  }
  std::fprintf(f, "orders");
  for (double p : st.orders) std::fprintf(f, ",%.6g", p);
  std::fprintf(f, "\n");
  std::fclose(f);
}

void write_study_csv(const std::string& path, const GraphicalStudy& st) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::fprintf(f, "M,dt,psi,A,gamma,curl_gamma,div_A\n");
  for (const auto& lv : st.levels) {
    std::fprintf(f, "%d,%.8g", lv.M, lv.dt);
    for (double e : lv.error) std::fprintf(f, ",%.8g", e);
    std::fprintf(f, "\n");
  }
  for (size_t k = 0; k < st.segment_slopes.size(); ++k) {
    std::fprintf(f, "segment_%d_%d,", st.levels[k].M, st.levels[k + 1].M);
    for (int i = 0; i < 5; ++i)
      std::fprintf(f, "%s%.6g", i ? "," : "", st.segment_slopes[k][i]);
    std::fprintf(f, "\n");
  }
  std::fprintf(f, "slopes,");
  for (int i = 0; i < 5; ++i) std::fprintf(f, "%s%.6g", i ? "," : "", st.slopes[i]);
  std::fprintf(f, "\n");
  std::fclose(f);
}

}  // namespace tdgl
