#pragma once
// Thin deterministic wrappers around the sparse direct solvers, essential
// boundary condition elimination, and a preconditioned conjugate gradient
// for the matrix-free Schur complement path.

#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "tdgl/assembly.hpp"

namespace tdgl {

struct LinalgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// factor once, solve many; throws LinalgError when the factorization
// reports a singular or numerically broken matrix
class Factorization {
 public:
  enum class Method { LDLT, SparseLU };
  Factorization(const SpMat& A, Method method);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;  // two real solves
  int nsolves() const { return nsolves_; }
  Method method() const { return method_; }

 private:
  Method method_;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  Eigen::SparseLU<SpMat> lu_;
  mutable int nsolves_ = 0;
};

// Splits a linear system into free and constrained dofs for essential
// conditions. The reduced matrix is built once; right-hand sides can be
// reduced per solve with fresh constrained values (time-dependent data).
class DirichletSystem {
 public:
  DirichletSystem(const SpMat& A, std::vector<int> constrained);

  const SpMat& reduced() const { return Aff_; }  // free rows x free cols
  int nfree() const { return static_cast<int>(free_.size()); }
  int nconstrained() const { return static_cast<int>(constrained_.size()); }
  const std::vector<int>& free_dofs() const { return free_; }
  const std::vector<int>& constrained_dofs() const { return constrained_; }

  // (b - A_fc xc) restricted to free dofs; xc ordered like constrained_dofs()
  Eigen::VectorXd reduce_rhs(const Eigen::VectorXd& b, const Eigen::VectorXd& xc) const;
  // full-size vector from free solution + constrained values
  Eigen::VectorXd expand(const Eigen::VectorXd& xf, const Eigen::VectorXd& xc) const;

 private:
  int n_;
  std::vector<int> constrained_, free_;
  std::vector<int> full_to_free_;  // -1 on constrained dofs
  SpMat Aff_, Afc_;
};

struct CGResult {
  Eigen::VectorXd x;
  int iters = 0;
  double residual = 0.0;  // final |r| / |b|
  bool converged = false;
};

// Preconditioned conjugate gradient on a symmetric positive definite
// operator given as a callback; prec applies an SPD preconditioner
// (z from r). Stops at |r| <= tol * refnorm (refnorm <= 0: use |b|).
// A shifted system b - A x0 can pass the original |b| as refnorm so a warm
// start keeps the original absolute stopping target.
CGResult pcg_prec(const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& op,
                  const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& prec,
                  const Eigen::VectorXd& b, double tol, int maxit, double refnorm = -1.0);

// Jacobi flavour: diag holds the (positive) diagonal used for preconditioning.
CGResult pcg(const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& op,
             const Eigen::VectorXd& diag, const Eigen::VectorXd& b, double tol,
             int maxit);

// Zero-fill incomplete Cholesky preconditioner for SPD matrices. Eigen picks
// a diagonal shift automatically when the factorization would break down.
class ICPreconditioner {
 public:
  explicit ICPreconditioner(const SpMat& A);
  ~ICPreconditioner();
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tdgl
