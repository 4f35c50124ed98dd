#pragma once
// Run output: legacy-VTK snapshots, observable traces as CSV, and a
// versioned checkpoint that restores solver state bit for bit.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdgl/solver.hpp"

namespace tdgl {

struct IOError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// vertex-sampled snapshot: |psi|, phase, Re/Im psi, A, gamma, and the
// reconstructed electric potential -omega div A
void write_vtk(const std::string& path, const TDGLSolver& s);

void write_run_log_csv(const std::string& path, const std::vector<RunLogEntry>& log);

struct Checkpoint {
  uint64_t mesh_hash = 0;
  int dim = 0;
  int degree = 0;
  int n = 0;
  double kappa = 0, omega = 0, dt = 0, t = 0;
  Eigen::VectorXcd psi;
  Eigen::VectorXd A, gamma;
};

// doubles are stored as hex floats, so write -> read is exact
void write_checkpoint(const std::string& path, const TDGLSolver& s);
Checkpoint read_checkpoint(const std::string& path);

// validates mesh hash, degree, kappa, and sizes, then adopts the stored
// omega and state; the solver keeps its own dt
void install_checkpoint(const Checkpoint& ck, TDGLSolver& s);

}  // namespace tdgl
