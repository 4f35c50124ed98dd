#include "tdgl/linalg.hpp"

#include <Eigen/IterativeLinearSolvers>

namespace tdgl {

Factorization::Factorization(const SpMat& A, Method method) : method_(method) {
  if (A.rows() != A.cols()) throw LinalgError("factorization needs a square matrix");
  if (method_ == Method::LDLT) {
    ldlt_.compute(A);
    if (ldlt_.info() != Eigen::Success)
      throw LinalgError("sparse LDLT factorization failed (matrix singular or indefinite)");
  } else {
    lu_.isSymmetric(false);
    lu_.compute(A);
    if (lu_.info() != Eigen::Success) throw LinalgError("sparse LU factorization failed");
  }
}

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& b) const {
  ++nsolves_;
  Eigen::VectorXd x = method_ == Method::LDLT ? ldlt_.solve(b).eval() : lu_.solve(b).eval();
  if (!x.allFinite()) throw LinalgError("direct solve produced non-finite values");
  return x;
}

Eigen::VectorXcd Factorization::solve(const Eigen::VectorXcd& b) const {
  Eigen::VectorXd re = solve(Eigen::VectorXd(b.real()));
  Eigen::VectorXd im = solve(Eigen::VectorXd(b.imag()));
  Eigen::VectorXcd x(b.size());
  x.real() = re;
  x.imag() = im;
  return x;
}

DirichletSystem::DirichletSystem(const SpMat& A, std::vector<int> constrained)
    : n_(static_cast<int>(A.rows())), constrained_(std::move(constrained)) {
  if (A.rows() != A.cols()) throw LinalgError("DirichletSystem needs a square matrix");
  std::vector<uint8_t> is_con(n_, 0);
  for (int d : constrained_) {
    if (d < 0 || d >= n_) throw LinalgError("constrained dof out of range");
    if (is_con[d]) throw LinalgError("constrained dof listed twice");
    is_con[d] = 1;
  }
  std::vector<int> full_to_con(n_, -1);
  for (size_t i = 0; i < constrained_.size(); ++i) full_to_con[constrained_[i]] = static_cast<int>(i);
  full_to_free_.assign(n_, -1);
  free_.reserve(n_ - constrained_.size());
  for (int i = 0; i < n_; ++i)
    if (!is_con[i]) {
      full_to_free_[i] = static_cast<int>(free_.size());
      free_.push_back(i);
    }
  std::vector<Eigen::Triplet<double>> tff, tfc;
  for (int col = 0; col < A.outerSize(); ++col)
    for (SpMat::InnerIterator it(A, col); it; ++it) {
      const int fr = full_to_free_[it.row()];
      if (fr < 0) continue;
      if (full_to_free_[col] >= 0)
        tff.emplace_back(fr, full_to_free_[col], it.value());
      else
        tfc.emplace_back(fr, full_to_con[col], it.value());
    }
  Aff_.resize(nfree(), nfree());
  Aff_.setFromTriplets(tff.begin(), tff.end());
  Afc_.resize(nfree(), nconstrained());
  Afc_.setFromTriplets(tfc.begin(), tfc.end());
}

Eigen::VectorXd DirichletSystem::reduce_rhs(const Eigen::VectorXd& b,
                                            const Eigen::VectorXd& xc) const {
  if (b.size() != n_ || xc.size() != nconstrained())
    throw LinalgError("reduce_rhs: size mismatch");
  Eigen::VectorXd r(nfree());
  for (int i = 0; i < nfree(); ++i) r[i] = b[free_[i]];
  if (nconstrained() > 0) r -= Afc_ * xc;
  return r;
}

Eigen::VectorXd DirichletSystem::expand(const Eigen::VectorXd& xf,
                                        const Eigen::VectorXd& xc) const {
  if (xf.size() != nfree() || xc.size() != nconstrained())
    throw LinalgError("expand: size mismatch");
  Eigen::VectorXd x(n_);
  for (int i = 0; i < nfree(); ++i) x[free_[i]] = xf[i];
  for (int i = 0; i < nconstrained(); ++i) x[constrained_[i]] = xc[i];
  return x;
}

CGResult pcg_prec(const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& op,
                  const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& prec,
                  const Eigen::VectorXd& b, double tol, int maxit, double refnorm) {
  const auto n = b.size();
  CGResult res;
  res.x = Eigen::VectorXd::Zero(n);
  const double bnorm = refnorm > 0.0 ? refnorm : b.norm();
  if (b.norm() <= tol * bnorm) {
    res.converged = true;
    return res;
  }
  Eigen::VectorXd r = b;  // x0 = 0
  Eigen::VectorXd z(n);
  prec(r, z);
  Eigen::VectorXd p = z;
  Eigen::VectorXd Ap(n);
  double rz = r.dot(z);
  for (int it = 0; it < maxit; ++it) {
    op(p, Ap);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) throw LinalgError("pcg: operator not positive definite");
    const double alpha = rz / pAp;
    res.x += alpha * p;
    r -= alpha * Ap;
    res.iters = it + 1;
    res.residual = r.norm() / bnorm;
    if (res.residual <= tol) {
      res.converged = true;
      return res;
    }
    prec(r, z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return res;
}

CGResult pcg(const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& op,
             const Eigen::VectorXd& diag, const Eigen::VectorXd& b, double tol,
             int maxit) {
  return pcg_prec(
      op, [&diag](const Eigen::VectorXd& r, Eigen::VectorXd& z) { z = r.cwiseQuotient(diag); }, b,
      tol, maxit);
}

struct ICPreconditioner::Impl {
  Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>> ic;
};

ICPreconditioner::ICPreconditioner(const SpMat& A) : impl_(std::make_unique<Impl>()) {
  impl_->ic.compute(A);
  if (impl_->ic.info() != Eigen::Success)
    throw LinalgError("incomplete Cholesky factorization failed");
}

ICPreconditioner::~ICPreconditioner() = default;

void ICPreconditioner::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
  z = impl_->ic.solve(r);
}

}  // namespace tdgl
