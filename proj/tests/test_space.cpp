#include <doctest.h>

#include <cmath>
#include <random>

#include "tdgl/mesh.hpp"
#include "tdgl/space.hpp"

using namespace tdgl;

namespace {

std::mt19937 rng(2024);

std::array<double, 3> random_point_in_cell(const Mesh& m, int c) {
  std::uniform_real_distribution<double> U(0.05, 0.95);
  double l[4];
  double s = 0.0;
  for (int k = 0; k <= m.dim; ++k) s += (l[k] = U(rng));
  std::array<double, 3> x = {0, 0, 0};
  for (int k = 0; k <= m.dim; ++k)
    for (int d = 0; d < 3; ++d) x[d] += l[k] / s * m.vertices[m.cells[c][k]][d];
  return x;
}

double eval_scalar(const Space& sp, const Eigen::VectorXd& u, int c, const std::array<double, 3>& x) {
  Eigen::MatrixXd val;
  sp.eval_basis(c, x, val);
  double s = 0.0;
  for (int i = 0; i < sp.ndofs_cell(); ++i) s += u[sp.cell_dofs(c)[i]] * val(i, 0);
  return s;
}

std::array<double, 3> eval_vector(const Space& sp, const Eigen::VectorXd& u, int c,
                                  const std::array<double, 3>& x) {
  Eigen::MatrixXd val;
  sp.eval_basis(c, x, val);
  std::array<double, 3> s = {0, 0, 0};
  for (int i = 0; i < sp.ndofs_cell(); ++i)
    for (int d = 0; d < sp.vdim(); ++d) s[d] += u[sp.cell_dofs(c)[i]] * val(i, d);
  return s;
}

// the two cells sharing an interior facet, or (-1,-1)
std::pair<int, int> facet_cells(const Mesh& m, int facet) {
  int a = -1, b = -1;
  const int nlf = m.dim == 2 ? 3 : 4;
  for (int c = 0; c < m.ncells(); ++c)
    for (int k = 0; k < nlf; ++k) {
      const int f = m.dim == 2 ? m.cell_edges[c][k] : m.cell_faces[c][k];
      if (f == facet) (a < 0 ? a : b) = c;
    }
  return {a, b};
}

}  // namespace

TEST_SUITE_BEGIN("space");

TEST_CASE("dof counts") {
  Mesh sq2 = generate_unit_square_mesh(2);
  CHECK(Space(sq2, Family::Lagrange, 1).ndofs() == 9);
  CHECK(Space(sq2, Family::Lagrange, 2).ndofs() == 9 + 16);
  CHECK(Space(sq2, Family::Lagrange, 3).ndofs() == 9 + 2 * 16 + 8);
  Mesh sq1 = generate_unit_square_mesh(1);
  CHECK(Space(sq1, Family::RaviartThomas, 2).ndofs() == 14);  // 5 edges x2 + 2 cells x2
  CHECK(Space(sq1, Family::RaviartThomas, 3).ndofs() == 5 * 3 + 2 * 6);
  Mesh cu1 = generate_unit_cube_mesh(1);
  CHECK(Space(cu1, Family::Lagrange, 1).ndofs() == 8);
  CHECK(Space(cu1, Family::Lagrange, 2).ndofs() == 8 + 19);
  CHECK(Space(cu1, Family::RaviartThomas, 1).ndofs() == 18);
  CHECK(Space(cu1, Family::Nedelec, 1).ndofs() == 19);
  CHECK_THROWS_AS(Space(sq2, Family::Lagrange, 4), SpaceError);
  CHECK_THROWS_AS(Space(cu1, Family::Lagrange, 3), SpaceError);
  CHECK_THROWS_AS(Space(cu1, Family::RaviartThomas, 2), SpaceError);
  CHECK_THROWS_AS(Space(sq2, Family::Nedelec, 1), SpaceError);
}

TEST_CASE("congruence class counts") {
  Mesh sq = generate_unit_square_mesh(4);
  CHECK(Space(sq, Family::Lagrange, 2).nclasses() == 2);
  CHECK(Space(sq, Family::RaviartThomas, 2).nclasses() == 2);
  Mesh cu = generate_unit_cube_mesh(2);
  CHECK(Space(cu, Family::Lagrange, 1).nclasses() == 6);
  CHECK(Space(cu, Family::RaviartThomas, 1).nclasses() == 6);
  CHECK(Space(cu, Family::Nedelec, 1).nclasses() == 6);
}

TEST_CASE("Lagrange partition of unity and nodal interpolation") {
  for (int dim = 2; dim <= 3; ++dim) {
    Mesh m = dim == 2 ? generate_unit_square_mesh(3) : generate_unit_cube_mesh(2);
    for (int p = 1; p <= (dim == 2 ? 3 : 2); ++p) {
      Space sp(m, Family::Lagrange, p);
      Eigen::VectorXd ones = sp.interpolate([](const std::array<double, 3>&, double* v) { v[0] = 1.0; });
      for (int c = 0; c < m.ncells(); c += 3) {
        const auto x = random_point_in_cell(m, c);
        CHECK(eval_scalar(sp, ones, c, x) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("Lagrange interpolation reproduces polynomials of full degree") {
  Mesh m = generate_unit_square_mesh(3);
  auto f3 = [](const std::array<double, 3>& x, double* v) {
    v[0] = 1.0 + x[0] - 2.0 * x[1] + 3.0 * x[0] * x[1] - x[0] * x[0] + 0.5 * x[1] * x[1] * x[1] +
           2.0 * x[0] * x[0] * x[1];
  };
  Space sp(m, Family::Lagrange, 3);
  Eigen::VectorXd u = sp.interpolate(f3);
  for (int c = 0; c < m.ncells(); ++c) {
    const auto x = random_point_in_cell(m, c);
    double exact[1];
    f3(x, exact);
    CHECK(eval_scalar(sp, u, c, x) == doctest::Approx(exact[0]).epsilon(1e-11));
  }
  // gradient rows
  Space sp2(m, Family::Lagrange, 2);
  auto f2 = [](const std::array<double, 3>& x, double* v) {
    v[0] = 2.0 - x[0] + 4.0 * x[1] + x[0] * x[1] - 3.0 * x[1] * x[1];
  };
  Eigen::VectorXd u2 = sp2.interpolate(f2);
  for (int c = 0; c < m.ncells(); c += 2) {
    const auto x = random_point_in_cell(m, c);
    Eigen::MatrixXd val, der;
    sp2.eval_basis(c, x, val, &der);
    double gx = 0, gy = 0;
    for (int i = 0; i < sp2.ndofs_cell(); ++i) {
      gx += u2[sp2.cell_dofs(c)[i]] * der(i, 0);
      gy += u2[sp2.cell_dofs(c)[i]] * der(i, 1);
    }
    CHECK(gx == doctest::Approx(-1.0 + x[1]).epsilon(1e-11));
    CHECK(gy == doctest::Approx(4.0 + x[0] - 6.0 * x[1]).epsilon(1e-11));
  }
}

TEST_CASE("scalar continuity across interior edges (includes cubic node order)") {
  Mesh m = generate_unit_square_mesh(3);
  for (int p = 2; p <= 3; ++p) {
    Space sp(m, Family::Lagrange, p);
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::VectorXd u(sp.ndofs());
    for (int i = 0; i < sp.ndofs(); ++i) u[i] = N(rng);
    for (int e = 0; e < m.nedges(); ++e) {
      if (m.edge_on_boundary[e]) continue;
      auto [c1, c2] = facet_cells(m, e);
      REQUIRE(c2 >= 0);
      for (double s : {0.21, 0.55, 0.83}) {
        std::array<double, 3> x;
        for (int d = 0; d < 3; ++d)
          x[d] = (1 - s) * m.vertices[m.edges[e][0]][d] + s * m.vertices[m.edges[e][1]][d];
        CHECK(eval_scalar(sp, u, c1, x) ==
              doctest::Approx(eval_scalar(sp, u, c2, x)).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("H(div) interpolation reproduces its polynomial span") {
  Mesh m = generate_unit_square_mesh(3);
  // degree 2 span: (P1)^2 plus x times homogeneous P1
  auto f = [](const std::array<double, 3>& p, double* v) {
    const double x = p[0], y = p[1], q = 2.0 * x - 3.0 * y;
    v[0] = 1.0 + 2.0 * x - y + x * q;
    v[1] = -2.0 + x + 0.5 * y + y * q;
  };
  Space sp(m, Family::RaviartThomas, 2);
  Eigen::VectorXd u = sp.interpolate(f);
  for (int c = 0; c < m.ncells(); ++c) {
    const auto x = random_point_in_cell(m, c);
    double exact[2];
    f(x, exact);
    const auto got = eval_vector(sp, u, c, x);
    CHECK(got[0] == doctest::Approx(exact[0]).epsilon(1e-11));
    CHECK(got[1] == doctest::Approx(exact[1]).epsilon(1e-11));
    // divergence rows: div(x q) = 2q + x.grad(q) = 3q for q homogeneous linear
    Eigen::MatrixXd val, der;
    sp.eval_basis(c, x, val, &der);
    double dv = 0.0;
    for (int i = 0; i < sp.ndofs_cell(); ++i) dv += u[sp.cell_dofs(c)[i]] * der(i, 0);
    const double q = 2.0 * x[0] - 3.0 * x[1];
    CHECK(dv == doctest::Approx(2.5 + 3.0 * q).epsilon(1e-10));
  }
}

TEST_CASE("H(div) normal continuity for arbitrary coefficients") {
  // normal traces agree across every interior edge; tangential traces jump
  for (int k = 2; k <= 3; ++k) {
    Mesh m = generate_unit_square_mesh(3);
    Space sp(m, Family::RaviartThomas, k);
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::VectorXd u(sp.ndofs());
    for (int i = 0; i < sp.ndofs(); ++i) u[i] = N(rng);
    double max_tangential_jump = 0.0;
    for (int e = 0; e < m.nedges(); ++e) {
      if (m.edge_on_boundary[e]) continue;
      auto [c1, c2] = facet_cells(m, e);
      const auto &a = m.vertices[m.edges[e][0]], &b = m.vertices[m.edges[e][1]];
      const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      const double nx = (b[1] - a[1]) / len, ny = -(b[0] - a[0]) / len;
      for (double s : {0.13, 0.5, 0.77}) {
        const std::array<double, 3> x = {(1 - s) * a[0] + s * b[0], (1 - s) * a[1] + s * b[1], 0.0};
        const auto v1 = eval_vector(sp, u, c1, x), v2 = eval_vector(sp, u, c2, x);
        CHECK(v1[0] * nx + v1[1] * ny ==
              doctest::Approx(v2[0] * nx + v2[1] * ny).epsilon(1e-10));
        max_tangential_jump = std::max(
            max_tangential_jump, std::abs((v1[0] - v2[0]) * -ny + (v1[1] - v2[1]) * nx));
      }
    }
    CHECK(max_tangential_jump > 0.1);  // genuinely discontinuous space
  }
}

TEST_CASE("3D face elements: normal continuity and span reproduction") {
  Mesh m = generate_unit_cube_mesh(2);
  Space sp(m, Family::RaviartThomas, 1);
  auto f = [](const std::array<double, 3>& p, double* v) {
    v[0] = 1.0 - 2.0 * p[0];
    v[1] = 3.0 - 2.0 * p[1];
    v[2] = -1.0 - 2.0 * p[2];
  };
  Eigen::VectorXd u = sp.interpolate(f);
  for (int c = 0; c < m.ncells(); c += 5) {
    const auto x = random_point_in_cell(m, c);
    double exact[3];
    f(x, exact);
    const auto got = eval_vector(sp, u, c, x);
    for (int d = 0; d < 3; ++d) CHECK(got[d] == doctest::Approx(exact[d]).epsilon(1e-11));
    Eigen::MatrixXd val, der;
    sp.eval_basis(c, x, val, &der);
    double dv = 0.0;
    for (int i = 0; i < sp.ndofs_cell(); ++i) dv += u[sp.cell_dofs(c)[i]] * der(i, 0);
    CHECK(dv == doctest::Approx(-6.0).epsilon(1e-11));
  }
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::VectorXd w(sp.ndofs());
  for (int i = 0; i < sp.ndofs(); ++i) w[i] = N(rng);
  for (int fc = 0; fc < m.nfaces(); fc += 7) {
    if (m.face_on_boundary[fc]) continue;
    auto [c1, c2] = facet_cells(m, fc);
    const auto &a = m.vertices[m.faces[fc][0]], &b = m.vertices[m.faces[fc][1]],
               &d = m.vertices[m.faces[fc][2]];
    double nr[3] = {(b[1] - a[1]) * (d[2] - a[2]) - (b[2] - a[2]) * (d[1] - a[1]),
                    (b[2] - a[2]) * (d[0] - a[0]) - (b[0] - a[0]) * (d[2] - a[2]),
                    (b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0])};
    const std::array<double, 3> x = {0.3 * a[0] + 0.4 * b[0] + 0.3 * d[0],
                                     0.3 * a[1] + 0.4 * b[1] + 0.3 * d[1],
                                     0.3 * a[2] + 0.4 * b[2] + 0.3 * d[2]};
    const auto v1 = eval_vector(sp, w, c1, x), v2 = eval_vector(sp, w, c2, x);
    const double n1 = v1[0] * nr[0] + v1[1] * nr[1] + v1[2] * nr[2];
    const double n2 = v2[0] * nr[0] + v2[1] * nr[1] + v2[2] * nr[2];
    CHECK(n1 == doctest::Approx(n2).epsilon(1e-10));
  }
}

TEST_CASE("3D edge elements: tangential continuity and curl") {
  Mesh m = generate_unit_cube_mesh(2);
  Space sp(m, Family::Nedelec, 1);
  // member of the span: a + b x x
  const double av[3] = {1.0, -2.0, 0.5}, bv[3] = {0.3, 1.1, -0.7};
  auto f = [&](const std::array<double, 3>& p, double* v) {
    v[0] = av[0] + bv[1] * p[2] - bv[2] * p[1];
    v[1] = av[1] + bv[2] * p[0] - bv[0] * p[2];
    v[2] = av[2] + bv[0] * p[1] - bv[1] * p[0];
  };
  Eigen::VectorXd u = sp.interpolate(f);
  for (int c = 0; c < m.ncells(); c += 5) {
    const auto x = random_point_in_cell(m, c);
    double exact[3];
    f(x, exact);
    const auto got = eval_vector(sp, u, c, x);
    for (int d = 0; d < 3; ++d) CHECK(got[d] == doctest::Approx(exact[d]).epsilon(1e-11));
    // curl(a + b x x) = 2b
    Eigen::MatrixXd val, der;
    sp.eval_basis(c, x, val, &der);
    double cu[3] = {0, 0, 0};
    for (int i = 0; i < sp.ndofs_cell(); ++i)
      for (int d = 0; d < 3; ++d) cu[d] += u[sp.cell_dofs(c)[i]] * der(i, d);
    for (int d = 0; d < 3; ++d) CHECK(cu[d] == doctest::Approx(2.0 * bv[d]).epsilon(1e-11));
  }
  // tangential continuity across interior faces for random coefficients
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::VectorXd w(sp.ndofs());
  for (int i = 0; i < sp.ndofs(); ++i) w[i] = N(rng);
  for (int fc = 0; fc < m.nfaces(); fc += 7) {
    if (m.face_on_boundary[fc]) continue;
    auto [c1, c2] = facet_cells(m, fc);
    const auto &a = m.vertices[m.faces[fc][0]], &b = m.vertices[m.faces[fc][1]],
               &d = m.vertices[m.faces[fc][2]];
    double nr[3] = {(b[1] - a[1]) * (d[2] - a[2]) - (b[2] - a[2]) * (d[1] - a[1]),
                    (b[2] - a[2]) * (d[0] - a[0]) - (b[0] - a[0]) * (d[2] - a[2]),
                    (b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0])};
    const double nn = std::sqrt(nr[0] * nr[0] + nr[1] * nr[1] + nr[2] * nr[2]);
    for (int dd = 0; dd < 3; ++dd) nr[dd] /= nn;
    const std::array<double, 3> x = {0.25 * a[0] + 0.35 * b[0] + 0.4 * d[0],
                                     0.25 * a[1] + 0.35 * b[1] + 0.4 * d[1],
                                     0.25 * a[2] + 0.35 * b[2] + 0.4 * d[2]};
    const auto v1 = eval_vector(sp, w, c1, x), v2 = eval_vector(sp, w, c2, x);
    double j[3] = {v1[0] - v2[0], v1[1] - v2[1], v1[2] - v2[2]};
    // jump must be purely normal
    double t[3] = {j[0] - (j[0] * nr[0] + j[1] * nr[1] + j[2] * nr[2]) * nr[0],
                   j[1] - (j[0] * nr[0] + j[1] * nr[1] + j[2] * nr[2]) * nr[1],
                   j[2] - (j[0] * nr[0] + j[1] * nr[1] + j[2] * nr[2]) * nr[2]};
    CHECK(std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]) < 1e-10);
  }
}

TEST_CASE("tabulations match pointwise basis evaluation") {
  Mesh m = generate_unit_square_mesh(2);
  for (auto [fam, deg] : {std::pair{Family::Lagrange, 2}, {Family::RaviartThomas, 3}}) {
    Space sp(m, fam, deg);
    for (int c : {0, 3, 5}) {
      const ElementTab& t = sp.tab(c, 4);
      const ElementTab& t2 = sp.tab(c, 4);
      CHECK(&t == &t2);  // cached
      for (int q = 0; q < t.nq; q += 2) {
        Eigen::MatrixXd val, der;
        sp.eval_basis(c, sp.quad_point(c, t, q), val, &der);
        for (int i = 0; i < sp.ndofs_cell(); ++i) {
          for (int d = 0; d < sp.vdim(); ++d)
            CHECK(t.val[d](q, i) == doctest::Approx(val(i, d)).epsilon(1e-12));
          for (int d = 0; d < sp.nderiv(); ++d)
            CHECK(t.der[d](q, i) == doctest::Approx(der(i, d)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("quadrature weights in tabulations integrate cell volume") {
  Mesh m = generate_unit_cube_mesh(2);
  Space sp(m, Family::Lagrange, 1);
  double vol = 0.0;
  for (int c = 0; c < m.ncells(); ++c) {
    const ElementTab& t = sp.tab(c, 2);
    for (int q = 0; q < t.nq; ++q) vol += t.wq[q];
  }
  CHECK(vol == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("boundary dof classification") {
  Mesh m = generate_unit_square_mesh(2);
  Space rt(m, Family::RaviartThomas, 2);
  int nb = 0;
  for (int i = 0; i < rt.ndofs(); ++i)
    if (rt.dof_on_boundary(i)) {
      ++nb;
      CHECK(rt.dof_entity(i).dim == 1);
    }
  CHECK(nb == 16);  // 8 boundary edges x 2 moments
  Space p2(m, Family::Lagrange, 2);
  nb = 0;
  for (int i = 0; i < p2.ndofs(); ++i) nb += p2.dof_on_boundary(i);
  CHECK(nb == 16);  // 8 boundary vertices + 8 boundary edge midpoints
}

TEST_CASE("spaces on an unstructured mesh") {
  NotchedDiskParams prm;
  prm.target_h = 0.8;
  Mesh m = generate_notched_disk_mesh(prm);
  Space sp(m, Family::RaviartThomas, 3);
  CHECK(sp.nclasses() == m.ncells());
  auto f = [](const std::array<double, 3>& p, double* v) {
    const double q = -p[0] + 2.0 * p[1];
    v[0] = 0.25 - p[0] + 0.5 * p[1] + p[0] * q;
    v[1] = 1.5 * p[0] - p[1] + p[1] * q;
  };
  Eigen::VectorXd u = sp.interpolate(f);
  for (int c = 0; c < m.ncells(); c += 7) {
    const auto x = random_point_in_cell(m, c);
    double exact[2];
    f(x, exact);
    const auto got = eval_vector(sp, u, c, x);
    CHECK(got[0] == doctest::Approx(exact[0]).epsilon(1e-9));
    CHECK(got[1] == doctest::Approx(exact[1]).epsilon(1e-9));
  }
}

TEST_SUITE_END();
