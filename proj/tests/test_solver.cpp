#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "tdgl/assembly.hpp"
#include "tdgl/mesh.hpp"
#include "tdgl/solver.hpp"
#include "tdgl/vortices.hpp"

using namespace tdgl;

namespace {

constexpr double kPi = 3.14159265358979323846;

ManufacturedCase mk_case(int dim, double kappa, double omega) {
  ManufacturedCase c;
  c.dim = dim;
  c.kappa = kappa;
  c.omega = omega;
  return c;
}

SolverOptions mk_opt(int degree, double kappa, double omega, double dt) {
  SolverOptions o;
  o.degree = degree;
  o.kappa = kappa;
  o.omega = omega;
  o.dt = dt;
  return o;
}

// manufactured run on the unit square/cube; errors at the final time
std::array<double, 5> mms_errors(int dim, int M, int degree, double omega, double dt,
                                 int nsteps, double kappa = 1.0) {
  Mesh m = dim == 2 ? generate_unit_square_mesh(M) : generate_unit_cube_mesh(M);
  TDGLSolver s(m, mk_opt(degree, kappa, omega, dt));
  s.use_manufactured(mk_case(dim, kappa, omega));
  for (int k = 0; k < nsteps; ++k) s.step();
  return s.errors_vs_exact();
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("spaces and initial state") {
  Mesh m = generate_unit_square_mesh(4);
  TDGLSolver s(m, mk_opt(1, 2.0, 1.0, 0.1));
  CHECK(s.psi_space().ndofs() == 25);       // P1 vertices
  CHECK(s.gamma_space().ndofs() == 81);     // P2
  CHECK(s.A_space().ndofs() == 2 * 56 + 2 * 32);
  CHECK(s.psi().size() == 25);
  for (int i = 0; i < 25; ++i) {
    CHECK(s.psi()[i].real() == 1.0);
    CHECK(s.psi()[i].imag() == 0.0);
  }
  CHECK(s.A().norm() == 0.0);
  CHECK(s.gamma().norm() == 0.0);
  CHECK(s.time() == 0.0);

  CHECK_THROWS_AS(TDGLSolver(m, mk_opt(3, 1.0, 1.0, 0.1)), SolverError);
  CHECK_THROWS_AS(TDGLSolver(m, mk_opt(1, 1.0, 1.0, 0.0)), SolverError);
  CHECK_THROWS_AS(TDGLSolver(m, mk_opt(1, 1.0, -0.5, 0.1)), SolverError);
  Mesh m3 = generate_unit_cube_mesh(2);
  CHECK_THROWS_AS(TDGLSolver(m3, mk_opt(2, 1.0, 1.0, 0.1)), SolverError);
}

TEST_CASE("superconducting state is a fixed point of the discrete step") {
  for (const double omega : {0.0, 1e-4, 1.0}) {
    for (const int r : {1, 2}) {
      Mesh m = generate_unit_square_mesh(3);
      TDGLSolver s(m, mk_opt(r, 1.7, omega, 0.05));
      for (int k = 0; k < 3; ++k) {
        s.step();
        CHECK((s.psi().array() - 1.0).abs().maxCoeff() < 1e-12);
        CHECK(s.A().lpNorm<Eigen::Infinity>() < 1e-12);
        CHECK(s.gamma().lpNorm<Eigen::Infinity>() < 1e-12);
      }
    }
    Mesh m3 = generate_unit_cube_mesh(2);
    TDGLSolver s3(m3, mk_opt(1, 1.7, omega, 0.05));
    for (int k = 0; k < 3; ++k) {
      s3.step();
      CHECK((s3.psi().array() - 1.0).abs().maxCoeff() < 1e-12);
      CHECK(s3.A().lpNorm<Eigen::Infinity>() < 1e-12);
      CHECK(s3.gamma().lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }
}

TEST_CASE("discrete curl constraint holds after every solve") {
  for (const int dim : {2, 3}) {
    Mesh m = dim == 2 ? generate_unit_square_mesh(4) : generate_unit_cube_mesh(2);
    TDGLSolver s(m, mk_opt(1, 1.0, 1.0, 0.01));
    s.use_manufactured(mk_case(dim, 1.0, 1.0));
    for (int k = 0; k < 3; ++k) {
      s.step();
      CHECK(s.gamma_equation_residual() < 1e-10);
    }
  }
}

TEST_CASE("one-step defect shrinks at second order in dt") {
  // against a same-mesh reference marched with much smaller steps, so the
  // spatial error cancels and the pure time defect remains
  Mesh m = generate_unit_square_mesh(8);
  auto defect = [&](double dt) {
    TDGLSolver one(m, mk_opt(2, 1.0, 1.0, dt));
    one.use_manufactured(mk_case(2, 1.0, 1.0));
    one.step();
    const int nref = 64;
    TDGLSolver ref(m, mk_opt(2, 1.0, 1.0, dt / nref));
    ref.use_manufactured(mk_case(2, 1.0, 1.0));
    for (int k = 0; k < nref; ++k) ref.step();
    double d = (one.psi() - ref.psi()).norm() + (one.A() - ref.A()).norm() +
               (one.gamma() - ref.gamma()).norm();
    return d;
  };
  const double d1 = defect(0.1), d2 = defect(0.05), d3 = defect(0.025);
  const double p12 = std::log2(d1 / d2), p23 = std::log2(d2 / d3);
  CHECK(p12 > 1.6);
  CHECK(p12 < 2.4);
  CHECK(p23 > 1.6);
  CHECK(p23 < 2.4);
}

TEST_CASE("manufactured convergence smoke, omega = 1") {
  // dt ~ h^2 so the first-order time error rides along with the O(h^2) fields
  const auto e8 = mms_errors(2, 8, 1, 1.0, 0.25 / 64.0, 16);
  const auto e16 = mms_errors(2, 16, 1, 1.0, 0.25 / 256.0, 64);
  for (int i = 0; i < 5; ++i) {
    const double slope = std::log2(e8[i] / e16[i]);
    CAPTURE(i);
    CHECK(slope > 1.5);
    CHECK(slope < 2.5);
  }
}

TEST_CASE("manufactured convergence smoke, omega = 0 degenerates") {
  const auto e8 = mms_errors(2, 8, 1, 0.0, 0.25 / 64.0, 16);
  const auto e16 = mms_errors(2, 16, 1, 0.0, 0.25 / 256.0, 64);
  const double slope_A = std::log2(e8[1] / e16[1]);
  const double slope_div = std::log2(e8[4] / e16[4]);
  // A falls to first order and div A stops converging outright
  CHECK(slope_A > 0.6);
  CHECK(slope_A < 1.6);
  CHECK(std::abs(slope_div) < 0.6);
  // psi keeps its rate
  const double slope_psi = std::log2(e8[0] / e16[0]);
  CHECK(slope_psi > 1.5);
  CHECK(slope_psi < 2.5);
}

TEST_CASE("gibbs energy of the initial states") {
  Mesh m = generate_unit_square_mesh(6);
  TDGLSolver s(m, mk_opt(1, 4.0, 1.0, 0.1));
  s.use_applied_field({0.9, 0.0, 0.0});
  CHECK(s.gibbs_energy() == doctest::Approx(0.81).epsilon(1e-12));
  s.use_applied_field({0.0, 0.0, 0.0});
  CHECK(s.gibbs_energy() == doctest::Approx(0.0).epsilon(1e-14));
  Mesh m3 = generate_unit_cube_mesh(2);
  TDGLSolver s3(m3, mk_opt(1, 4.0, 1.0, 0.1));
  s3.use_applied_field({0.0, 0.0, 0.5});
  CHECK(s3.gibbs_energy() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("with psi frozen at zero the curl field relaxes to the applied one") {
  // psi = 0 stays zero without forcing, and the (gamma, A) pair then solves
  // the linear induction problem whose steady state carries gamma = H
  Mesh m = generate_unit_square_mesh(8);
  TDGLSolver s(m, mk_opt(1, 1.0, 1.0, 0.1));
  const double H = 0.9;
  s.use_applied_field({H, 0.0, 0.0});
  s.set_state(Eigen::VectorXcd::Zero(s.psi_space().ndofs()),
              Eigen::VectorXd::Zero(s.A_space().ndofs()),
              Eigen::VectorXd::Zero(s.gamma_space().ndofs()), 0.0, 0);
  for (int k = 0; k < 300; ++k) s.step();
  CHECK(s.psi().norm() == 0.0);
  const double gerr = l2_error(
      s.gamma_space(), s.gamma(),
      [&](const std::array<double, 3>&, double* out) { out[0] = H; }, 6);
  CHECK(gerr < 1e-8);
}

TEST_CASE("pointwise gauge transformation invariances") {
  Mesh m = generate_unit_square_mesh(4);
  TDGLSolver s(m, mk_opt(1, 2.0, 1.0, 0.01));
  s.use_manufactured(mk_case(2, 2.0, 1.0));
  for (int k = 0; k < 2; ++k) s.step();

  auto chi = [](double x, double y) { return 0.3 + 0.2 * x - 0.15 * y + 0.07 * x * y; };
  auto chi_x = [](double, double y) { return 0.2 + 0.07 * y; };
  auto chi_y = [](double x, double) { return -0.15 + 0.07 * x; };

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u01(0.15, 0.85);
  for (int trial = 0; trial < 20; ++trial) {
    // barycentric point of a random cell
    const int c = static_cast<int>(rng() % m.ncells());
    double l0 = u01(rng), l1 = u01(rng), l2 = u01(rng);
    const double ls = l0 + l1 + l2;
    std::array<double, 3> x = {0, 0, 0};
    const double lam[3] = {l0 / ls, l1 / ls, l2 / ls};
    for (int k = 0; k < 3; ++k)
      for (int d = 0; d < 2; ++d) x[d] += lam[k] * m.vertices[m.cells[c][k]][d];

    const double g[2] = {chi_x(x[0], x[1]), chi_y(x[0], x[1])};
    double zeta[2], Q[2], theta;
    s.gauge_transformed(c, x, chi(x[0], x[1]), g, 0.0, zeta, Q, &theta);
    const std::complex<double> z(zeta[0], zeta[1]);
    CHECK(std::abs(std::abs(z) - std::abs(s.psi_at(c, x))) < 1e-12);

    // curl Q == curl A via a centered stencil (exact on the polynomial chi)
    const double h = 1e-3;
    auto curl_of = [&](bool transformed) {
      auto field = [&](double px, double py, int comp) {
        std::array<double, 3> p = {px, py, 0.0};
        double av[3];
        s.A_at(c, p, av);
        if (!transformed) return av[comp];
        const double gg[2] = {chi_x(px, py), chi_y(px, py)};
        return av[comp] + gg[comp];
      };
      return (field(x[0] + h, x[1], 1) - field(x[0] - h, x[1], 1)) / (2 * h) -
             (field(x[0], x[1] + h, 0) - field(x[0], x[1] - h, 0)) / (2 * h);
    };
    CHECK(std::abs(curl_of(true) - curl_of(false)) < 1e-10);

    // constant chi leaves the potential part untouched
    double zeta2[2], Q2[2], theta2;
    const double zg[2] = {0.0, 0.0};
    s.gauge_transformed(c, x, 0.4, zg, 0.0, zeta2, Q2, &theta2);
    double av[3];
    s.A_at(c, x, av);
    CHECK(theta2 == doctest::Approx(-1.0 * av[2]).epsilon(1e-13));
    CHECK(Q2[0] == doctest::Approx(av[0]).epsilon(1e-13));
    CHECK(Q2[1] == doctest::Approx(av[1]).epsilon(1e-13));
  }
}

TEST_CASE("schur path reproduces the direct saddle solve") {
  Mesh m = generate_unit_square_mesh(4);
  auto run3 = [&](int direct_budget, int mass_budget) {
    SolverOptions o = mk_opt(1, 1.0, 1.0, 0.01);
    o.direct_budget = direct_budget;
    o.mass_direct_budget = mass_budget;
    TDGLSolver s(m, o);
    s.use_manufactured(mk_case(2, 1.0, 1.0));
    for (int k = 0; k < 3; ++k) s.step();
    return std::make_tuple(Eigen::VectorXcd(s.psi()), Eigen::VectorXd(s.A()),
                           Eigen::VectorXd(s.gamma()));
  };
  const auto [p0, a0, g0] = run3(1 << 20, 1 << 20);  // monolithic LU
  const auto [p1, a1, g1] = run3(1, 1 << 20);        // Schur, direct mass
  const auto [p2, a2, g2] = run3(1, 1);              // Schur, inner-CG mass
  CHECK((p1 - p0).norm() / p0.norm() < 5e-7);
  CHECK((a1 - a0).norm() / a0.norm() < 5e-7);
  CHECK((g1 - g0).norm() / g0.norm() < 5e-7);
  CHECK((p2 - p0).norm() / p0.norm() < 5e-7);
  CHECK((a2 - a0).norm() / a0.norm() < 5e-7);
  CHECK((g2 - g0).norm() / g0.norm() < 5e-7);
}

TEST_CASE("run log, omega schedule, and non-finite abort") {
  Mesh m = generate_unit_square_mesh(3);
  TDGLSolver s(m, mk_opt(1, 2.0, 1e-4, 0.05));
  s.use_applied_field({0.3, 0.0, 0.0});
  const auto log = s.run(5, 2);
  REQUIRE(log.size() == 4);  // n = 0, 2, 4, 5
  CHECK(log[0].n == 0);
  CHECK(log[1].n == 2);
  CHECK(log[2].n == 4);
  CHECK(log[3].n == 5);
  CHECK(log[3].t == doctest::Approx(0.25));
  CHECK(s.saddle_factorizations() == 1);

  // schedule flips omega when the step index is reached (and catches up on
  // entries a warm start skipped over)
  OmegaSchedule sched = {{0, 1e-4}, {7, 1.0}};
  s.run(4, 1, sched);
  CHECK(s.options().omega == 1.0);
  CHECK(s.saddle_factorizations() == 2);
  CHECK_THROWS_AS(s.run(1, 1, OmegaSchedule{{3, 1.0}, {3, 2.0}}), SolverError);

  Eigen::VectorXd bad = s.A();
  bad[0] = std::nan("");
  s.set_state(s.psi(), bad, s.gamma(), s.time(), s.step_index());
  CHECK_THROWS_AS(s.run(1), SolverError);
}

TEST_CASE("energy decays towards the end of a relaxation run") {
  Mesh m = generate_unit_square_mesh(6);
  TDGLSolver s(m, mk_opt(1, 4.0, 1.0, 0.1));
  s.use_applied_field({0.9, 0.0, 0.0});
  const auto log = s.run(100, 1);
  // the late-run relative energy increments sit far below the early ones
  const double early = log[10].rel_ediff;
  const double late = log.back().rel_ediff;
  CHECK(late < early);
  for (size_t i = 2; i + 1 < log.size(); ++i) CHECK(log[i].energy < 10.0 * log[1].energy);
}

TEST_CASE("vortex detection on synthetic order parameters") {
  Mesh m = generate_unit_square_mesh(24);
  Space p1(m, Family::Lagrange, 1);

  auto interp = [&](auto f) {
    Eigen::VectorXcd v(p1.ndofs());
    Eigen::VectorXd re = p1.interpolate([&](const std::array<double, 3>& x, double* out) {
      out[0] = f(x[0], x[1]).real();
    });
    Eigen::VectorXd im = p1.interpolate([&](const std::array<double, 3>& x, double* out) {
      out[0] = f(x[0], x[1]).imag();
    });
    v.real() = re;
    v.imag() = im;
    return v;
  };

  const auto ones = interp([](double, double) { return std::complex<double>(1.0, 0.0); });
  CHECK(count_vortices(p1, ones).empty());
  CHECK(count_suppressed_regions(p1, ones) == 0);

  const auto single = interp([](double x, double y) {
    return std::complex<double>(x - 0.51, y - 0.49);
  });
  auto vs = count_vortices(p1, single);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].winding == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::hypot(vs[0].position[0] - 0.51, vs[0].position[1] - 0.49) < 0.05);

  const auto anti = interp([](double x, double y) {
    return std::complex<double>(x - 0.51, -(y - 0.49));
  });
  auto va = count_vortices(p1, anti);
  REQUIRE(va.size() == 1);
  CHECK(va[0].winding == doctest::Approx(-1.0).epsilon(1e-9));

  const auto pair = interp([](double x, double y) {
    return std::complex<double>(x - 0.3, y - 0.3) * std::complex<double>(x - 0.7, y - 0.7);
  });
  auto vp = count_vortices(p1, pair);
  REQUIRE(vp.size() == 2);
  double d0 = std::hypot(vp[0].position[0] - 0.3, vp[0].position[1] - 0.3);
  double d1 = std::hypot(vp[1].position[0] - 0.7, vp[1].position[1] - 0.7);
  if (d0 > 0.2) std::swap(d0, d1);
  CHECK(d0 < 0.05);
  CHECK(d1 < 0.05);
  // the raw product stays small along the whole segment between the zeros,
  // so saturate each factor to carve out two separated cores
  const auto pair_sat = interp([](double x, double y) {
    const std::complex<double> z1(x - 0.3, y - 0.3), z2(x - 0.7, y - 0.7);
    const double a = 0.2;
    return z1 / std::sqrt(std::norm(z1) + a * a) * z2 / std::sqrt(std::norm(z2) + a * a);
  });
  CHECK(count_suppressed_regions(p1, pair_sat, 0.3) == 2);
}

TEST_CASE("renormalized point-vortex energy") {
  using P = std::array<double, 3>;
  // one vortex: pure confinement
  CHECK(renormalized_energy({P{0.3, -0.4, 0}}, 2.0) ==
        doctest::Approx(2.0 * kPi * 0.25).epsilon(1e-13));
  // symmetric pair at unit distance: the interaction term vanishes
  CHECK(renormalized_energy({P{0.5, 0, 0}, P{-0.5, 0, 0}}, 1.0) ==
        doctest::Approx(kPi).epsilon(1e-13));
  // rotation leaves it unchanged
  const double a = 0.57;
  const std::vector<P> rot = {{0.5 * std::cos(a), 0.5 * std::sin(a), 0},
                              {-0.5 * std::cos(a), -0.5 * std::sin(a), 0}};
  CHECK(renormalized_energy(rot, 1.0) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK_THROWS_AS(renormalized_energy({P{0.1, 0.2, 0}, P{0.1, 0.2, 0}}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("normal zone fraction") {
  Mesh m = generate_unit_square_mesh(16);
  Space p1(m, Family::Lagrange, 1);
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(p1.ndofs());
  const Eigen::VectorXcd zeros = Eigen::VectorXcd::Zero(p1.ndofs());
  CHECK(normal_zone_fraction(p1, ones, {0.5, 0.5, 0}, 0.3, 0.1) == 0.0);
  CHECK(normal_zone_fraction(p1, zeros, {0.5, 0.5, 0}, 0.3, 0.1) == 1.0);
  CHECK(normal_zone_fraction(p1, ones, {9.0, 9.0, 0}, 0.3, 0.1) == 0.0);  // empty range
}

TEST_CASE("3D manufactured errors shrink under refinement") {
  const auto e2 = mms_errors(3, 2, 1, 1.0, 1e-3, 5);
  const auto e4 = mms_errors(3, 4, 1, 1.0, 1e-3, 5);
  for (int i = 0; i < 5; ++i) {
    CAPTURE(i);
    CHECK(e4[i] < e2[i]);
    CHECK(std::isfinite(e4[i]));
  }
}
}
