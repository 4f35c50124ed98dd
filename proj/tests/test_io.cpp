#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tdgl/io.hpp"
#include "tdgl/mesh.hpp"
#include "tdgl/solver.hpp"

using namespace tdgl;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TDGLSolver make_run(const Mesh& m, double omega = 1.0) {
  SolverOptions o;
  o.degree = 1;
  o.kappa = 1.5;
  o.omega = omega;
  o.dt = 0.02;
  TDGLSolver s(m, o);
  ManufacturedCase c;
  c.dim = m.dim;
  c.kappa = 1.5;
  c.omega = omega;
  s.use_manufactured(c);
  for (int k = 0; k < 3; ++k) s.step();
  return s;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("checkpoint round trip is exact") {
  Mesh m = generate_unit_square_mesh(4);
  TDGLSolver s = make_run(m);
  const std::string path = "ck_test.txt";
  write_checkpoint(path, s);
  const Checkpoint ck = read_checkpoint(path);
  CHECK(ck.mesh_hash == m.content_hash());
  CHECK(ck.dim == 2);
  CHECK(ck.degree == 1);
  CHECK(ck.kappa == 1.5);
  CHECK(ck.omega == 1.0);
  CHECK(ck.dt == 0.02);
  CHECK(ck.t == s.time());
  CHECK(ck.n == 3);
  REQUIRE(ck.psi.size() == s.psi().size());
  CHECK((ck.psi - s.psi()).norm() == 0.0);  // bitwise via hex floats
  CHECK((ck.A - s.A()).norm() == 0.0);
  CHECK((ck.gamma - s.gamma()).norm() == 0.0);

  // a fresh solver continues exactly like the original
  SolverOptions o;
  o.degree = 1;
  o.kappa = 1.5;
  o.omega = 1.0;
  o.dt = 0.02;
  TDGLSolver s2(m, o);
  ManufacturedCase c;
  c.dim = 2;
  c.kappa = 1.5;
  c.omega = 1.0;
  s2.use_manufactured(c);
  install_checkpoint(ck, s2);
  CHECK(s2.time() == s.time());
  CHECK(s2.step_index() == 3);
  s.step();
  s2.step();
  CHECK((s2.psi() - s.psi()).norm() == 0.0);
  CHECK((s2.A() - s.A()).norm() == 0.0);
  CHECK((s2.gamma() - s.gamma()).norm() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("checkpoint validation rejects mismatches") {
  Mesh m4 = generate_unit_square_mesh(4);
  Mesh m5 = generate_unit_square_mesh(5);
  TDGLSolver s = make_run(m4);
  const std::string path = "ck_bad.txt";
  write_checkpoint(path, s);
  const Checkpoint ck = read_checkpoint(path);

  SolverOptions o;
  o.degree = 1;
  o.kappa = 1.5;
  o.omega = 1.0;
  o.dt = 0.02;
  TDGLSolver other(m5, o);
  CHECK_THROWS_AS(install_checkpoint(ck, other), IOError);

  SolverOptions o2 = o;
  o2.kappa = 2.0;
  TDGLSolver wrong_kappa(m4, o2);
  CHECK_THROWS_AS(install_checkpoint(ck, wrong_kappa), IOError);

  SolverOptions o3 = o;
  o3.degree = 2;
  TDGLSolver wrong_degree(m4, o3);
  CHECK_THROWS_AS(install_checkpoint(ck, wrong_degree), IOError);

  // truncated file
  const std::string text = slurp(path);
  std::ofstream trunc(path, std::ios::binary);
  trunc << text.substr(0, text.size() / 2);
  trunc.close();
  CHECK_THROWS_AS(read_checkpoint(path), IOError);
  CHECK_THROWS_AS(read_checkpoint("no_such_file.txt"), IOError);
  std::remove(path.c_str());
}

TEST_CASE("vtk snapshots are well formed and deterministic") {
  for (const int dim : {2, 3}) {
    Mesh m = dim == 2 ? generate_unit_square_mesh(3) : generate_unit_cube_mesh(2);
    TDGLSolver s = make_run(m);
    const std::string path = "snap_test.vtk";
    write_vtk(path, s);
    const std::string text = slurp(path);
    CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
    CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
    CHECK(text.find("POINTS " + std::to_string(m.nverts()) + " double") != std::string::npos);
    CHECK(text.find("CELL_TYPES " + std::to_string(m.ncells())) != std::string::npos);
    CHECK(text.find(dim == 2 ? "\n5\n" : "\n10\n") != std::string::npos);
    CHECK(text.find("SCALARS abs_psi double 1") != std::string::npos);
    CHECK(text.find("SCALARS phase double 1") != std::string::npos);
    CHECK(text.find("SCALARS phi double 1") != std::string::npos);
    CHECK(text.find("VECTORS A double") != std::string::npos);
    CHECK(text.find("curl_A") != std::string::npos);
    write_vtk(path, s);
    CHECK(slurp(path) == text);
    std::remove(path.c_str());
  }
}

TEST_CASE("run log csv") {
  std::vector<RunLogEntry> log;
  log.push_back({0, 0.0, 1.25, 0.0, -1});
  log.push_back({5, 0.5, 1.0, 0.2, 3});
  const std::string path = "log_test.csv";
  write_run_log_csv(path, log);
  const std::string text = slurp(path);
  CHECK(text == "step,t,energy,rel_ediff,vortices\n0,0,1.25,0,-1\n5,0.5,1,0.2,3\n");
  std::remove(path.c_str());
}
}
