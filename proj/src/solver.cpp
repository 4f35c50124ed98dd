#include "tdgl/solver.hpp"

#include <cmath>
#include <string>

#include "tdgl/assembly.hpp"

namespace tdgl {

namespace {

constexpr std::complex<double> kI(0.0, 1.0);

// rows/cols of A restricted through full-index -> restricted-index maps (-1 drops)
SpMat restrict_matrix(const SpMat& A, const std::vector<int>& rmap, int nrows,
                      const std::vector<int>& cmap, int ncols) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(A.nonZeros()));
  for (int col = 0; col < A.outerSize(); ++col)
    for (SpMat::InnerIterator it(A, col); it; ++it) {
      const int r = rmap[it.row()];
      const int c = cmap[col];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  SpMat out(nrows, ncols);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace

TDGLSolver::TDGLSolver(const Mesh& mesh, const SolverOptions& opt) : mesh_(mesh), opt_(opt) {
  if (mesh_.dim == 2) {
    if (opt_.degree != 1 && opt_.degree != 2)
      throw SolverError("2D runs support degree 1 or 2");
  } else if (opt_.degree != 1) {
    throw SolverError("3D runs support degree 1 only");
  }
  if (!(opt_.dt > 0.0)) throw SolverError("time step must be positive");
  if (!(opt_.kappa > 0.0)) throw SolverError("kappa must be positive");
  if (opt_.omega < 0.0) throw SolverError("omega must be nonnegative");
  if (opt_.quad_degree <= 0) opt_.quad_degree = 3 * opt_.degree + 1;
  if (opt_.direct_budget < 0) opt_.direct_budget = mesh_.dim == 2 ? 300000 : 60000;
  qdeg_ = opt_.quad_degree;

  const int r = opt_.degree;
  Vpsi_ = std::make_unique<Space>(mesh_, Family::Lagrange, r);
  if (mesh_.dim == 2) {
    VA_ = std::make_unique<Space>(mesh_, Family::RaviartThomas, r + 1);
    Vg_ = std::make_unique<Space>(mesh_, Family::Lagrange, r + 1);
  } else {
    VA_ = std::make_unique<Space>(mesh_, Family::RaviartThomas, 1);
    Vg_ = std::make_unique<Space>(mesh_, Family::Nedelec, 1);
  }

  psi_ = Eigen::VectorXcd::Ones(Vpsi_->ndofs());
  A_ = Eigen::VectorXd::Zero(VA_->ndofs());
  gamma_ = Eigen::VectorXd::Zero(Vg_->ndofs());
  gamma_data0_ = Eigen::VectorXd::Zero(Vg_->ndofs());

  build_psi_system();
  build_saddle_structure();
  factor_saddle();
}

void TDGLSolver::build_psi_system() {
  SpMat M = assemble_mass(*Vpsi_, qdeg_);
  SpMat K = assemble_grad_grad(*Vpsi_, qdeg_);
  SpMat S = (1.0 / opt_.dt) * M + (1.0 / (opt_.kappa * opt_.kappa)) * K;
  psi_fact_ = std::make_unique<Factorization>(S, Factorization::Method::LDLT);
}

void TDGLSolver::build_saddle_structure() {
  Mg_ = assemble_mass(*Vg_, qdeg_);
  C_ = assemble_curl_pair(*Vg_, *VA_, qdeg_);
  MA_ = assemble_mass(*VA_, qdeg_);
  D_ = assemble_div_div(*VA_, qdeg_);

  const int ng = Vg_->ndofs();
  const int na = VA_->ndofs();
  g_free_.clear();
  g_bdry_.clear();
  a_free_.clear();
  std::vector<int> a_bdry;
  for (int i = 0; i < ng; ++i) (Vg_->dof_on_boundary(i) ? g_bdry_ : g_free_).push_back(i);
  for (int j = 0; j < na; ++j) (VA_->dof_on_boundary(j) ? a_bdry : a_free_).push_back(j);
  ng_bdry_ = static_cast<int>(g_bdry_.size());
  blk_constrained_.clear();
  for (int i : g_bdry_) blk_constrained_.push_back(i);
  for (int j : a_bdry) blk_constrained_.push_back(ng + j);

  const int nfree = ng + na - static_cast<int>(blk_constrained_.size());
  use_schur_ = nfree > opt_.direct_budget;
  if (!use_schur_) return;

  std::vector<int> g2f(ng, -1), g2b(ng, -1), a2f(na, -1);
  for (size_t k = 0; k < g_free_.size(); ++k) g2f[g_free_[k]] = static_cast<int>(k);
  for (size_t k = 0; k < g_bdry_.size(); ++k) g2b[g_bdry_[k]] = static_cast<int>(k);
  for (size_t k = 0; k < a_free_.size(); ++k) a2f[a_free_[k]] = static_cast<int>(k);
  const int ngf = static_cast<int>(g_free_.size());
  const int naf = static_cast<int>(a_free_.size());
  Mg_ff_ = restrict_matrix(Mg_, g2f, ngf, g2f, ngf);
  Mg_fb_ = restrict_matrix(Mg_, g2f, ngf, g2b, ng_bdry_);
  C_ff_ = restrict_matrix(C_, g2f, ngf, a2f, naf);
  C_bf_ = restrict_matrix(C_, g2b, ng_bdry_, a2f, naf);
  mass_diag_ = Mg_ff_.diagonal();
  if (ngf <= opt_.mass_direct_budget) {
    mass_fact_ = std::make_unique<Factorization>(Mg_ff_, Factorization::Method::LDLT);
    ic_mass_.reset();
  } else {
    mass_fact_.reset();
    ic_mass_ = std::make_unique<ICPreconditioner>(Mg_ff_);
  }
}

void TDGLSolver::factor_saddle() {
  SA_ = (1.0 / opt_.dt) * MA_ + opt_.omega * D_;
  const int ng = Vg_->ndofs();
  const int na = VA_->ndofs();
  if (!use_schur_) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(Mg_.nonZeros() + 2 * C_.nonZeros() + SA_.nonZeros()));
    for (int col = 0; col < Mg_.outerSize(); ++col)
      for (SpMat::InnerIterator it(Mg_, col); it; ++it)
        trips.emplace_back(static_cast<int>(it.row()), col, it.value());
    for (int col = 0; col < C_.outerSize(); ++col)
      for (SpMat::InnerIterator it(C_, col); it; ++it) {
        trips.emplace_back(static_cast<int>(it.row()), ng + col, -it.value());
        trips.emplace_back(ng + col, static_cast<int>(it.row()), it.value());
      }
    for (int col = 0; col < SA_.outerSize(); ++col)
      for (SpMat::InnerIterator it(SA_, col); it; ++it)
        trips.emplace_back(ng + static_cast<int>(it.row()), ng + col, it.value());
    SpMat B(ng + na, ng + na);
    B.setFromTriplets(trips.begin(), trips.end());
    saddle_ = std::make_unique<DirichletSystem>(B, blk_constrained_);
    saddle_fact_ =
        std::make_unique<Factorization>(saddle_->reduced(), Factorization::Method::SparseLU);
  } else {
    std::vector<int> a2f(na, -1);
    for (size_t k = 0; k < a_free_.size(); ++k) a2f[a_free_[k]] = static_cast<int>(k);
    const int naf = static_cast<int>(a_free_.size());
    SA_ff_ = restrict_matrix(SA_, a2f, naf, a2f, naf);
    // sparse stand-in for the dense Schur complement: lump the mass inverse
    // to its diagonal, keeping the curl-curl coupling pattern, then take
    // incomplete Cholesky of the result
    SpMat shat =
        SA_ff_ + SpMat(C_ff_.transpose() * mass_diag_.cwiseInverse().asDiagonal() * C_ff_);
    ic_schur_ = std::make_unique<ICPreconditioner>(shat);
  }
  ++nfactor_;
}

Eigen::VectorXd TDGLSolver::mass_solve(const Eigen::VectorXd& v) const {
  if (mass_fact_) return mass_fact_->solve(v);
  CGResult res =
      pcg_prec([this](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = Mg_ff_ * x; },
          [this](const Eigen::VectorXd& r, Eigen::VectorXd& z) { ic_mass_->apply(r, z); }, v,
          1e-13, opt_.cg_maxit);
  if (!res.converged) throw SolverError("inner mass solve did not converge");
  stats_.inner_iters += res.iters;
  return std::move(res.x);
}

void TDGLSolver::use_manufactured(const ManufacturedCase& mc) {
  if (mc.dim != mesh_.dim) throw SolverError("manufactured case dimension does not match mesh");
  if (mc.kappa != opt_.kappa || mc.omega != opt_.omega)
    throw SolverError("manufactured case parameters must match solver options");
  mc_ = mc;
  applied_H_ = {0.0, 0.0, 0.0};
  data_sign_ = mc.time_sign();
  rebuild_forcing_moments();

  // unit-time-factor boundary trace; scaled by exp(sign * t) per step
  gamma_data0_ = Vg_->interpolate(
      [&](const std::array<double, 3>& x, double* out) { mc.gamma(x, 0.0, out); });

  // start from the interpolated exact fields at t = 0
  Eigen::VectorXd pre = Vpsi_->interpolate([&](const std::array<double, 3>& x, double* out) {
    double reim[2];
    mc.psi(x, 0.0, reim);
    out[0] = reim[0];
  });
  Eigen::VectorXd pim = Vpsi_->interpolate([&](const std::array<double, 3>& x, double* out) {
    double reim[2];
    mc.psi(x, 0.0, reim);
    out[0] = reim[1];
  });
  psi_.resize(pre.size());
  psi_.real() = pre;
  psi_.imag() = pim;
  A_ = VA_->interpolate([&](const std::array<double, 3>& x, double* out) { mc.A(x, 0.0, out); });
  gamma_ = gamma_data0_;
  t_ = 0.0;
  n_ = 0;
}

void TDGLSolver::rebuild_forcing_moments() {
  const ManufacturedCase& mc = *mc_;
  const int npsi = Vpsi_->ndofs();
  const int na = VA_->ndofs();
  for (int m = 0; m < ManufacturedCase::nparts; ++m) {
    gmom_[m] = Eigen::VectorXcd::Zero(npsi);
    fmom_[m] = Eigen::VectorXd::Zero(na);
  }
  curlH_mom_ = Eigen::VectorXd::Zero(na);
  const int dim = mesh_.dim;
  for (int c = 0; c < mesh_.ncells(); ++c) {
    const ElementTab& tp = Vpsi_->tab(c, qdeg_);
    const ElementTab& ta = VA_->tab(c, qdeg_);
    const int* pdofs = Vpsi_->cell_dofs(c);
    const int* adofs = VA_->cell_dofs(c);
    for (int q = 0; q < tp.nq; ++q) {
      const std::array<double, 3> x = Vpsi_->quad_point(c, tp, q);
      const double w = tp.wq[q];
      std::complex<double> g3[3];
      mc.g_parts(x, g3);
      double fp[9] = {0};
      mc.f_parts(x, fp);
      double ch[3] = {0, 0, 0};
      mc.curl_gamma(x, 0.0, ch);
      for (int i = 0; i < tp.nloc; ++i) {
        const double v = w * tp.val[0](q, i);
        for (int m = 0; m < 3; ++m) gmom_[m][pdofs[i]] += v * g3[m];
      }
      for (int j = 0; j < ta.nloc; ++j) {
        for (int d = 0; d < dim; ++d) {
          const double v = w * ta.val[d](q, j);
          for (int m = 0; m < 3; ++m) fmom_[m][adofs[j]] += v * fp[d * 3 + m];
          curlH_mom_[adofs[j]] += v * ch[d];
        }
      }
    }
  }
}

void TDGLSolver::use_applied_field(const std::array<double, 3>& H) {
  mc_.reset();
  applied_H_ = H;
  data_sign_ = 0.0;
  const int dim = mesh_.dim;
  gamma_data0_ = Vg_->interpolate([&](const std::array<double, 3>&, double* out) {
    if (dim == 2) {
      out[0] = H[0];
    } else {
      out[0] = H[0];
      out[1] = H[1];
      out[2] = H[2];
    }
  });
  psi_ = Eigen::VectorXcd::Ones(Vpsi_->ndofs());
  A_ = Eigen::VectorXd::Zero(VA_->ndofs());
  gamma_ = Eigen::VectorXd::Zero(Vg_->ndofs());
  t_ = 0.0;
  n_ = 0;
}

void TDGLSolver::set_state(const Eigen::VectorXcd& psi, const Eigen::VectorXd& A,
                           const Eigen::VectorXd& gamma, double t, int n) {
  if (psi.size() != Vpsi_->ndofs() || A.size() != VA_->ndofs() || gamma.size() != Vg_->ndofs())
    throw SolverError("set_state: field sizes do not match the spaces");
  psi_ = psi;
  A_ = A;
  gamma_ = gamma;
  t_ = t;
  n_ = n;
}

void TDGLSolver::set_omega(double omega) {
  if (omega < 0.0) throw SolverError("omega must be nonnegative");
  if (omega == opt_.omega) return;
  opt_.omega = omega;
  if (mc_) {
    mc_->omega = omega;  // forcing compensates so the exact fields are unchanged
    rebuild_forcing_moments();
  }
  factor_saddle();
}

Eigen::VectorXd TDGLSolver::gamma_boundary_values(double t) const {
  const double s = data_sign_ == 0.0 ? 1.0 : std::exp(data_sign_ * t);
  Eigen::VectorXd gb(ng_bdry_);
  for (int k = 0; k < ng_bdry_; ++k) gb[k] = s * gamma_data0_[g_bdry_[k]];
  return gb;
}

Eigen::VectorXcd TDGLSolver::assemble_psi_rhs(double tn1) const {
  const int npsi = Vpsi_->ndofs();
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(npsi);
  const double idt = 1.0 / opt_.dt;
  const double co_div = opt_.kappa * opt_.omega + 1.0 / opt_.kappa;
  const double co_grad = 2.0 / opt_.kappa;
  const int dim = mesh_.dim;
  std::vector<std::complex<double>> ploc, bloc;
  std::vector<double> aloc;
  for (int c = 0; c < mesh_.ncells(); ++c) {
    const ElementTab& tp = Vpsi_->tab(c, qdeg_);
    const ElementTab& ta = VA_->tab(c, qdeg_);
    ploc.resize(tp.nloc);
    bloc.assign(tp.nloc, {0.0, 0.0});
    aloc.resize(ta.nloc);
    gather(*Vpsi_, psi_, c, ploc.data());
    gather(*VA_, A_, c, aloc.data());
    for (int q = 0; q < tp.nq; ++q) {
      std::complex<double> psi_q(0.0, 0.0);
      for (int i = 0; i < tp.nloc; ++i) psi_q += tp.val[0](q, i) * ploc[i];
      double A_q[3] = {0, 0, 0};
      double div_q = 0.0;
      for (int j = 0; j < ta.nloc; ++j) {
        const double aj = aloc[j];
        for (int d = 0; d < dim; ++d) A_q[d] += ta.val[d](q, j) * aj;
        div_q += ta.der[0](q, j) * aj;
      }
      double a2 = 0.0;
      for (int d = 0; d < dim; ++d) a2 += A_q[d] * A_q[d];
      const double p2 = std::norm(psi_q);
      const double w = tp.wq[q];
      const std::complex<double> coef =
          w * ((idt + (1.0 - a2 - p2)) * psi_q + kI * (co_div * div_q) * psi_q);
      const std::complex<double> gcoef = w * (kI * co_grad) * psi_q;
      for (int i = 0; i < tp.nloc; ++i) {
        std::complex<double> acc = coef * tp.val[0](q, i);
        for (int d = 0; d < dim; ++d) acc += gcoef * A_q[d] * tp.der[d](q, i);
        bloc[i] += acc;
      }
    }
    const int* pdofs = Vpsi_->cell_dofs(c);
    for (int i = 0; i < tp.nloc; ++i) b[pdofs[i]] += bloc[i];
  }
  if (mc_) {
    const double s = mc_->time_sign();
    for (int m = 0; m < ManufacturedCase::nparts; ++m)
      b += std::exp(s * (m + 1) * tn1) * gmom_[m];
  }
  return b;
}

Eigen::VectorXd TDGLSolver::assemble_A_rhs(double tn1) const {
  const int na = VA_->ndofs();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(na);
  const double idt = 1.0 / opt_.dt;
  const double ikappa = 1.0 / opt_.kappa;
  const int dim = mesh_.dim;
  std::vector<std::complex<double>> ploc;
  std::vector<double> aloc, bloc;
  for (int c = 0; c < mesh_.ncells(); ++c) {
    const ElementTab& tp = Vpsi_->tab(c, qdeg_);
    const ElementTab& ta = VA_->tab(c, qdeg_);
    ploc.resize(tp.nloc);
    aloc.resize(ta.nloc);
    bloc.assign(ta.nloc, 0.0);
    gather(*Vpsi_, psi_, c, ploc.data());
    gather(*VA_, A_, c, aloc.data());
    for (int q = 0; q < tp.nq; ++q) {
      std::complex<double> psi_q(0.0, 0.0);
      std::complex<double> gpsi_q[3] = {{0, 0}, {0, 0}, {0, 0}};
      for (int i = 0; i < tp.nloc; ++i) {
        psi_q += tp.val[0](q, i) * ploc[i];
        for (int d = 0; d < dim; ++d) gpsi_q[d] += tp.der[d](q, i) * ploc[i];
      }
      double A_q[3] = {0, 0, 0};
      for (int j = 0; j < ta.nloc; ++j)
        for (int d = 0; d < dim; ++d) A_q[d] += ta.val[d](q, j) * aloc[j];
      const double p2 = std::norm(psi_q);
      const double w = tp.wq[q];
      double r_q[3];
      for (int d = 0; d < dim; ++d) {
        const double js = ikappa * std::imag(std::conj(psi_q) * gpsi_q[d]);
        r_q[d] = w * ((idt - p2) * A_q[d] + js);
      }
      for (int j = 0; j < ta.nloc; ++j) {
        double acc = 0.0;
        for (int d = 0; d < dim; ++d) acc += r_q[d] * ta.val[d](q, j);
        bloc[j] += acc;
      }
    }
    const int* adofs = VA_->cell_dofs(c);
    for (int j = 0; j < ta.nloc; ++j) b[adofs[j]] += bloc[j];
  }
  if (mc_) {
    const double s = mc_->time_sign();
    for (int m = 0; m < ManufacturedCase::nparts; ++m)
      b += std::exp(s * (m + 1) * tn1) * fmom_[m];
    b += std::exp(s * tn1) * curlH_mom_;
  }
  return b;
}

void TDGLSolver::solve_saddle(const Eigen::VectorXd& bA, double tn1) {
  const int ng = Vg_->ndofs();
  const int na = VA_->ndofs();
  const Eigen::VectorXd gb = gamma_boundary_values(tn1);
  if (!use_schur_) {
    Eigen::VectorXd xc = Eigen::VectorXd::Zero(saddle_->nconstrained());
    xc.head(ng_bdry_) = gb;
    Eigen::VectorXd bfull = Eigen::VectorXd::Zero(ng + na);
    bfull.tail(na) = bA;
    const Eigen::VectorXd xf = saddle_fact_->solve(saddle_->reduce_rhs(bfull, xc));
    const Eigen::VectorXd x = saddle_->expand(xf, xc);
    gamma_ = x.head(ng);
    A_ = x.tail(na);
    return;
  }
  const int naf = static_cast<int>(a_free_.size());
  Eigen::VectorXd rhs(naf);
  for (int k = 0; k < naf; ++k) rhs[k] = bA[a_free_[k]];
  const Eigen::VectorXd mg_b = Mg_fb_ * gb;
  rhs.noalias() += C_ff_.transpose() * mass_solve(mg_b);
  rhs.noalias() -= C_bf_.transpose() * gb;
  const auto apply_schur = [this](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y.noalias() = SA_ff_ * x;
    y.noalias() += C_ff_.transpose() * mass_solve(C_ff_ * x);
  };
  // warm start from the previous A; the reference norm keeps the absolute
  // stopping target of a cold start
  Eigen::VectorXd x0(naf);
  for (int k = 0; k < naf; ++k) x0[k] = A_[a_free_[k]];
  Eigen::VectorXd r0(naf);
  apply_schur(x0, r0);
  r0 = rhs - r0;
  CGResult res = pcg_prec(
      apply_schur, [this](const Eigen::VectorXd& r, Eigen::VectorXd& z) { ic_schur_->apply(r, z); },
      r0, opt_.cg_tol, opt_.cg_maxit, rhs.norm());
  if (!res.converged)
    throw SolverError("Schur complement CG stalled at relative residual " +
                      std::to_string(res.residual));
  stats_.outer_iters += res.iters;
  stats_.last_outer_iters = res.iters;
  res.x += x0;
  const Eigen::VectorXd gf = mass_solve(C_ff_ * res.x - mg_b);
  A_.setZero();
  for (int k = 0; k < naf; ++k) A_[a_free_[k]] = res.x[k];
  for (size_t k = 0; k < g_free_.size(); ++k) gamma_[g_free_[k]] = gf[k];
  for (int k = 0; k < ng_bdry_; ++k) gamma_[g_bdry_[k]] = gb[k];
}

void TDGLSolver::step() {
  const double tn1 = t_ + opt_.dt;
  // both right-hand sides read the step-n fields before either update lands
  const Eigen::VectorXcd bpsi = assemble_psi_rhs(tn1);
  const Eigen::VectorXd bA = assemble_A_rhs(tn1);
  Eigen::VectorXcd psi_new = psi_fact_->solve(bpsi);
  solve_saddle(bA, tn1);
  psi_ = std::move(psi_new);
  t_ = tn1;
  ++n_;
}

void TDGLSolver::check_finite() const {
  if (psi_.allFinite() && A_.allFinite() && gamma_.allFinite()) return;
  std::string bad;
  if (!psi_.allFinite()) bad += " psi";
  if (!A_.allFinite()) bad += " A";
  if (!gamma_.allFinite()) bad += " gamma";
  throw SolverError("non-finite values after step " + std::to_string(n_) + " (t = " +
                    std::to_string(t_) + "):" + bad);
}

std::vector<RunLogEntry> TDGLSolver::run(
    int nsteps, int cadence, const OmegaSchedule& schedule,
    const std::function<void(const TDGLSolver&, const RunLogEntry&)>& observer) {
  if (nsteps < 0) throw SolverError("run: negative step count");
  for (size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i].first <= schedule[i - 1].first)
      throw SolverError("omega schedule steps must be strictly increasing");
  check_finite();  // reject a broken warm start before factor time is spent
  // a warm start may land past some schedule entries; apply the active one
  for (const auto& [at, w] : schedule)
    if (at <= n_) set_omega(w);

  std::vector<RunLogEntry> log;
  double eprev = gibbs_energy();
  RunLogEntry first{n_, t_, eprev, 0.0, -1};
  log.push_back(first);
  if (observer) observer(*this, first);
  for (int k = 0; k < nsteps; ++k) {
    for (const auto& [at, w] : schedule)
      if (at == n_) set_omega(w);
    step();
    check_finite();
    const bool record = cadence > 0 ? ((k + 1) % cadence == 0 || k + 1 == nsteps) : k + 1 == nsteps;
    if (!record) continue;
    const double e = gibbs_energy();
    RunLogEntry entry{n_, t_, e, std::abs(e - eprev) / std::max(std::abs(eprev), 1e-300), -1};
    eprev = e;
    log.push_back(entry);
    if (observer) observer(*this, entry);
  }
  return log;
}

double TDGLSolver::gibbs_energy() const {
  const int dim = mesh_.dim;
  const double ik = 1.0 / opt_.kappa;
  double E = 0.0;
  std::vector<std::complex<double>> ploc;
  std::vector<double> aloc, gloc;
  for (int c = 0; c < mesh_.ncells(); ++c) {
    const ElementTab& tp = Vpsi_->tab(c, qdeg_);
    const ElementTab& ta = VA_->tab(c, qdeg_);
    const ElementTab& tg = Vg_->tab(c, qdeg_);
    ploc.resize(tp.nloc);
    aloc.resize(ta.nloc);
    gloc.resize(tg.nloc);
    gather(*Vpsi_, psi_, c, ploc.data());
    gather(*VA_, A_, c, aloc.data());
    gather(*Vg_, gamma_, c, gloc.data());
    for (int q = 0; q < tp.nq; ++q) {
      std::complex<double> psi_q(0.0, 0.0);
      std::complex<double> gpsi_q[3] = {{0, 0}, {0, 0}, {0, 0}};
      for (int i = 0; i < tp.nloc; ++i) {
        psi_q += tp.val[0](q, i) * ploc[i];
        for (int d = 0; d < dim; ++d) gpsi_q[d] += tp.der[d](q, i) * ploc[i];
      }
      double A_q[3] = {0, 0, 0};
      for (int j = 0; j < ta.nloc; ++j)
        for (int d = 0; d < dim; ++d) A_q[d] += ta.val[d](q, j) * aloc[j];
      double cond = 0.0;  // |(grad/kappa - iA) psi|^2
      for (int d = 0; d < dim; ++d)
        cond += std::norm(ik * gpsi_q[d] - kI * A_q[d] * psi_q);
      double field = 0.0;  // |curl A - H|^2, with gamma standing in for curl A
      const int gcomp = dim == 2 ? 1 : 3;
      for (int d = 0; d < gcomp; ++d) {
        double g_q = 0.0;
        for (int i = 0; i < tg.nloc; ++i) g_q += tg.val[d](q, i) * gloc[i];
        const double diff = g_q - applied_H_[d];
        field += diff * diff;
      }
      const double p2 = std::norm(psi_q);
      E += tp.wq[q] * (0.5 * (p2 - 1.0) * (p2 - 1.0) + cond + field);
    }
  }
  return E;
}

std::array<double, 5> TDGLSolver::errors_vs_exact() const {
  if (!mc_) throw SolverError("errors_vs_exact needs a manufactured case");
  const ManufacturedCase& c = *mc_;
  const double t = t_;
  const int qe = 2 * opt_.degree + 4;
  std::array<double, 5> e{};
  e[0] = l2_error(*Vpsi_, psi_,
                  [&](const std::array<double, 3>& x, double* out) { c.psi(x, t, out); }, qe);
  e[1] = l2_error(*VA_, A_,
                  [&](const std::array<double, 3>& x, double* out) { c.A(x, t, out); }, qe);
  e[2] = l2_error(*Vg_, gamma_,
                  [&](const std::array<double, 3>& x, double* out) { c.gamma(x, t, out); }, qe);
  e[3] = deriv_l2_error(
      *Vg_, gamma_, [&](const std::array<double, 3>& x, double* out) { c.gamma_deriv(x, t, out); },
      qe);
  e[4] = deriv_l2_error(
      *VA_, A_, [&](const std::array<double, 3>& x, double* out) { c.div_A(x, t, out); }, qe);
  return e;
}

double TDGLSolver::gamma_equation_residual() const {
  Eigen::VectorXd r = Mg_ * gamma_ - C_ * A_;
  for (int i : g_bdry_) r[i] = 0.0;
  const double scale = (Mg_ * gamma_).norm() + (C_ * A_).norm();
  return r.norm() / std::max(scale, 1e-300);
}

void TDGLSolver::gauge_transformed(int cell, const std::array<double, 3>& x, double chi,
                                   const double* grad_chi, double dchi_dt, double* zeta_reim,
                                   double* Q, double* theta) const {
  const std::complex<double> z = psi_at(cell, x) * std::exp(kI * opt_.kappa * chi);
  zeta_reim[0] = z.real();
  zeta_reim[1] = z.imag();
  double av[4];
  A_at(cell, x, av);
  const int dim = mesh_.dim;
  for (int d = 0; d < dim; ++d) Q[d] = av[d] + grad_chi[d];
  *theta = -opt_.omega * av[dim] - dchi_dt;
}

std::complex<double> TDGLSolver::psi_at(int cell, const std::array<double, 3>& x) const {
  Eigen::MatrixXd val;
  Vpsi_->eval_basis(cell, x, val);
  std::vector<std::complex<double>> ploc(Vpsi_->ndofs_cell());
  gather(*Vpsi_, psi_, cell, ploc.data());
  std::complex<double> out(0.0, 0.0);
  for (int i = 0; i < Vpsi_->ndofs_cell(); ++i) out += val(i, 0) * ploc[i];
  return out;
}

void TDGLSolver::A_at(int cell, const std::array<double, 3>& x, double* out) const {
  Eigen::MatrixXd val, der;
  VA_->eval_basis(cell, x, val, &der);
  std::vector<double> aloc(VA_->ndofs_cell());
  gather(*VA_, A_, cell, aloc.data());
  const int dim = mesh_.dim;
  for (int d = 0; d <= dim; ++d) out[d] = 0.0;
  for (int j = 0; j < VA_->ndofs_cell(); ++j) {
    for (int d = 0; d < dim; ++d) out[d] += val(j, d) * aloc[j];
    out[dim] += der(j, 0) * aloc[j];
  }
}

void TDGLSolver::gamma_at(int cell, const std::array<double, 3>& x, double* out) const {
  Eigen::MatrixXd val;
  Vg_->eval_basis(cell, x, val);
  std::vector<double> gloc(Vg_->ndofs_cell());
  gather(*Vg_, gamma_, cell, gloc.data());
  const int nc = Vg_->vdim();
  for (int d = 0; d < nc; ++d) out[d] = 0.0;
  for (int i = 0; i < Vg_->ndofs_cell(); ++i)
    for (int d = 0; d < nc; ++d) out[d] += val(i, d) * gloc[i];
}

}  // namespace tdgl
