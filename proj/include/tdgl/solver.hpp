#pragma once
// Fully linearised mixed scheme for the gauged evolution system.
//
// Unknowns per step: the complex order parameter psi (nodal space), the
// vector potential A (normal-trace conforming space), and the auxiliary
// curl gamma = curl A (nodal scalar in 2D, edge space in 3D). Both updates
// read step-n fields on their right-hand sides, so each step is two linear
// solves with matrices factored once:
//
//   psi:      (1/dt) M + (1/kappa^2) K   (real SPD; complex rhs = 2 solves)
//   (gamma,A) [ M_g   -C  ]
//             [ C^T  (1/dt) M_A + omega D ]  with gamma = H and A.n = 0
//                                            imposed essentially
//
// The saddle block is solved by sparse LU up to a dof budget, above it by
// conjugate gradients on the A-Schur complement (SPD), with the gamma mass
// inverted directly or by an inner CG depending on size.
//
// Driving: either a manufactured case (forcing enters through precomputed
// moment vectors, boundary data through an exponentially scaled trace) or a
// constant applied field (enters through the gamma boundary data only).

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "tdgl/linalg.hpp"
#include "tdgl/mms.hpp"
#include "tdgl/space.hpp"

namespace tdgl {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  double kappa = 1.0;
  double omega = 1.0;
  double dt = 1e-3;
  int degree = 1;          // r; 2D: 1 or 2, 3D: 1 only
  int direct_budget = -1;  // saddle dofs handled by sparse LU; -1: 300000 (2D) / 60000 (3D)
  int mass_direct_budget = 0;  // gamma mass dofs handled by LDLT in the Schur path
                               // (default: always the incomplete-Cholesky CG, which
                               // beats the LDLT backsolve on edge-element mass)
  double cg_tol = 1e-10;
  int cg_maxit = 50000;
  int quad_degree = -1;  // -1: 3r+1
};

struct RunLogEntry {
  int n = 0;
  double t = 0.0;
  double energy = 0.0;
  double rel_ediff = 0.0;  // |G_n - G_prev| / |G_prev|
  int vortices = -1;       // filled only when requested
};

// iteration counters for the Schur path (zero on the direct path)
struct SolverStats {
  long outer_iters = 0;  // Schur complement CG, accumulated
  long inner_iters = 0;  // nested mass solves, accumulated
  int last_outer_iters = 0;
};

// piecewise-constant omega(step): value of the last entry with step <= n
using OmegaSchedule = std::vector<std::pair<int, double>>;

class TDGLSolver {
 public:
  TDGLSolver(const Mesh& mesh, const SolverOptions& opt);

  // --- driving -----------------------------------------------------------
  // manufactured forcing + boundary data + exact initial fields at t = 0
  void use_manufactured(const ManufacturedCase& mc);
  // constant applied field (2D: {H, 0, 0} scalar in the z sense); starts
  // from the superconducting state psi = 1, A = 0, gamma = 0
  void use_applied_field(const std::array<double, 3>& H);

  // --- state -------------------------------------------------------------
  const Space& psi_space() const { return *Vpsi_; }
  const Space& A_space() const { return *VA_; }
  const Space& gamma_space() const { return *Vg_; }
  const Eigen::VectorXcd& psi() const { return psi_; }
  const Eigen::VectorXd& A() const { return A_; }
  const Eigen::VectorXd& gamma() const { return gamma_; }
  double time() const { return t_; }
  int step_index() const { return n_; }
  const SolverOptions& options() const { return opt_; }
  const Mesh& mesh() const { return mesh_; }

  void set_state(const Eigen::VectorXcd& psi, const Eigen::VectorXd& A,
                 const Eigen::VectorXd& gamma, double t, int n = 0);

  // changing the gauge parameter refactors the saddle system
  void set_omega(double omega);
  int saddle_factorizations() const { return nfactor_; }
  const SolverStats& stats() const { return stats_; }

  // --- stepping ----------------------------------------------------------
  void step();
  // steps n times; energy/observer cadence in steps (0: only at start/end).
  // The observer runs after the log entry is appended.
  std::vector<RunLogEntry> run(
      int nsteps, int cadence = 1, const OmegaSchedule& schedule = {},
      const std::function<void(const TDGLSolver&, const RunLogEntry&)>& observer = {});

  // --- observables ---------------------------------------------------------
  // integral of  1/2 (|psi|^2-1)^2 + |(grad/kappa - iA) psi|^2 + |curl A - H|^2
  // with curl A represented by gamma
  double gibbs_energy() const;
  // {psi, A, gamma, curl gamma, div A} L2 errors against the manufactured
  // exact fields at the current time
  std::array<double, 5> errors_vs_exact() const;
  // residual of the discrete constraint (gamma, chi) = (curl chi, A) over
  // unconstrained test functions, scaled by |gamma|
  double gamma_equation_residual() const;

  // pointwise gauge transformation at x in the given cell: chi value,
  // gradient, and time derivative are supplied by the caller.
  // zeta = psi e^{i kappa chi}, Q = A + grad chi, theta = -omega div A - dchi/dt
  void gauge_transformed(int cell, const std::array<double, 3>& x, double chi,
                         const double* grad_chi, double dchi_dt, double* zeta_reim,
                         double* Q, double* theta) const;

  // pointwise evaluation of the stored fields
  std::complex<double> psi_at(int cell, const std::array<double, 3>& x) const;
  void A_at(int cell, const std::array<double, 3>& x, double* out) const;     // + div in out[dim]
  void gamma_at(int cell, const std::array<double, 3>& x, double* out) const;

 private:
  void build_psi_system();
  void build_saddle_structure();  // matrices + dof partitions, omega independent
  void factor_saddle();           // recombined and refactored per omega
  void rebuild_forcing_moments();
  Eigen::VectorXd gamma_boundary_values(double t) const;
  Eigen::VectorXcd assemble_psi_rhs(double tn1) const;
  Eigen::VectorXd assemble_A_rhs(double tn1) const;
  void solve_saddle(const Eigen::VectorXd& bA, double tn1);
  Eigen::VectorXd mass_solve(const Eigen::VectorXd& v) const;
  void check_finite() const;

  const Mesh& mesh_;
  SolverOptions opt_;
  int qdeg_;
  std::unique_ptr<Space> Vpsi_, VA_, Vg_;

  // state
  Eigen::VectorXcd psi_;
  Eigen::VectorXd A_, gamma_;
  double t_ = 0.0;
  int n_ = 0;

  // psi system
  std::unique_ptr<Factorization> psi_fact_;

  // saddle system
  SpMat Mg_, C_, MA_, D_, SA_;  // SA = (1/dt) MA + omega D
  std::vector<int> blk_constrained_;            // gamma boundary dofs, then A boundary dofs
  int ng_bdry_ = 0;
  std::unique_ptr<DirichletSystem> saddle_;     // on the assembled block matrix
  std::unique_ptr<Factorization> saddle_fact_;  // direct path
  bool use_schur_ = false;
  int nfactor_ = 0;
  // Schur path pieces (free-dof restrictions)
  std::vector<int> g_free_, g_bdry_, a_free_;
  SpMat Mg_ff_, Mg_fb_, C_ff_, C_bf_, SA_ff_;
  std::unique_ptr<Factorization> mass_fact_;  // direct flavor of the gamma mass
  std::unique_ptr<ICPreconditioner> ic_mass_;  // iterative flavor
  std::unique_ptr<ICPreconditioner> ic_schur_;
  Eigen::VectorXd mass_diag_;
  mutable SolverStats stats_;

  // driving
  std::optional<ManufacturedCase> mc_;
  std::array<double, 3> applied_H_ = {0, 0, 0};
  Eigen::VectorXcd gmom_[3];     // (g_m, w_i) moment vectors
  Eigen::VectorXd fmom_[3];      // (f_m, phi_i)
  Eigen::VectorXd curlH_mom_;    // (curl H at unit time factor, phi_i)
  Eigen::VectorXd gamma_data0_;  // trace values at unit time factor
  double data_sign_ = 0.0;       // data scales with exp(data_sign * t)
};

}  // namespace tdgl
