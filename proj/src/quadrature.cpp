#include "tdgl/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <stdexcept>

namespace tdgl {
namespace {

// Gauss-Jacobi rule for int_0^1 f(v) (1-v)^alpha dv via Golub-Welsch.
// alpha = 0 gives Gauss-Legendre on [0,1].
void gauss_jacobi01(int n, int alpha, std::vector<double>& pts, std::vector<double>& wts) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi01: need n >= 1");
  const double a = alpha, b = 0.0;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double ak;
    if (k == 0)
      ak = (b - a) / (a + b + 2.0);
    else {
      const double s = 2.0 * k + a + b;
      ak = (b * b - a * a) / (s * (s + 2.0));
    }
    J(k, k) = ak;
    if (k >= 1) {
      double bk2;
      if (k == 1)
        bk2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
      else {
        const double s = 2.0 * k + a + b;
        bk2 = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
      }
      const double bk = std::sqrt(bk2);
      J(k, k - 1) = bk;
      J(k - 1, k) = bk;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_jacobi01: eigensolve failed");
  // mu0 = int_{-1}^{1} (1-t)^a dt = 2^{a+1}/(a+1); map to [0,1] with weight (1-v)^a
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  pts.resize(n);
  wts.resize(n);
  for (int i = 0; i < n; ++i) {
    pts[i] = 0.5 * (1.0 + es.eigenvalues()(i));
    const double v0 = es.eigenvectors()(0, i);
    wts[i] = mu0 * v0 * v0 * std::pow(0.5, a + 1.0);
  }
}

QuadratureRule make_rule(int dim, int degree) {
  const int n = std::max(1, (degree + 2) / 2);  // 2n-1 >= degree
  QuadratureRule r;
  r.dim = dim;
  r.degree = 2 * n - 1;
  std::vector<double> pu, wu, pv, wv, pw, ww;
  gauss_jacobi01(n, 0, pu, wu);
  if (dim == 1) {
    for (int i = 0; i < n; ++i) {
      r.points.push_back({pu[i], 0.0, 0.0});
      r.weights.push_back(wu[i]);
    }
    return r;
  }
  gauss_jacobi01(n, 1, pv, wv);
  if (dim == 2) {
    // conical product: x = u(1-v), y = v, jacobian (1-v) absorbed in wv
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        r.points.push_back({pu[i] * (1.0 - pv[j]), pv[j], 0.0});
        r.weights.push_back(wu[i] * wv[j]);
      }
    return r;
  }
  if (dim != 3) throw std::invalid_argument("simplex_rule: dim must be 1, 2 or 3");
  gauss_jacobi01(n, 2, pw, ww);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double w = pw[k], v = pv[j] * (1.0 - w), u = pu[i] * (1.0 - pv[j]) * (1.0 - w);
        r.points.push_back({u, v, w});
        r.weights.push_back(wu[i] * wv[j] * ww[k]);
      }
  return r;
}

}  // namespace

QuadratureRule interval_rule(int degree) {
  const int npoints = std::max(1, (degree + 2) / 2);  // 2n-1 >= degree
  QuadratureRule r;
  r.dim = 1;
  r.degree = 2 * npoints - 1;
  std::vector<double> p, w;
  gauss_jacobi01(npoints, 0, p, w);
  for (int i = 0; i < npoints; ++i) {
    r.points.push_back({p[i], 0.0, 0.0});
    r.weights.push_back(w[i]);
  }
  return r;
}

const QuadratureRule& simplex_rule(int dim, int degree) {
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  auto key = std::make_pair(dim, degree);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make_rule(dim, degree)).first;
  return it->second;
}

}  // namespace tdgl
