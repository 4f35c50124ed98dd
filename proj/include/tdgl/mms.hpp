#pragma once
// Closed-form manufactured solutions of the gauged evolution system on the
// unit square (decaying in time) and unit cube (growing in time), together
// with the forcing fields g (order parameter equation) and f (potential
// equation) that make them exact for any kappa and omega.
//
// Both forcings separate exactly into three spatial parts times
// exp(time_sign * m * t), m = 1..3; solvers cache the parts at quadrature
// points once per mesh and combine them with three scalar weights per step.

#include <array>
#include <complex>

namespace tdgl {

struct ManufacturedCase {
  int dim = 2;  // 2 or 3
  double kappa = 1.0;
  double omega = 1.0;

  static constexpr int nparts = 3;
  double time_sign() const { return dim == 2 ? -1.0 : 1.0; }

  // exact fields
  void psi(const std::array<double, 3>& x, double t, double* reim) const;
  void A(const std::array<double, 3>& x, double t, double* out) const;      // dim entries
  void gamma(const std::array<double, 3>& x, double t, double* out) const;  // curl A: 1 / 3 entries
  void div_A(const std::array<double, 3>& x, double t, double* out) const;
  // gradient of the scalar gamma (2D: 2 entries) or curl of the vector
  // gamma (3D: 3 entries) -- the derivative the gamma space tabulates
  void gamma_deriv(const std::array<double, 3>& x, double t, double* out) const;
  // curl of gamma as a vector field (2D: rotated gradient, 2 entries;
  // 3D: same as gamma_deriv); this is curl H for the manufactured runs
  void curl_gamma(const std::array<double, 3>& x, double t, double* out) const;

  // forcing, assembled from the separated parts
  void g(const std::array<double, 3>& x, double t, double* reim) const;
  void f(const std::array<double, 3>& x, double t, double* out) const;  // dim entries

  // raw separated parts: field(t) = sum_m parts[m] exp(time_sign (m+1) t)
  void g_parts(const std::array<double, 3>& x, std::complex<double>* out3) const;
  void f_parts(const std::array<double, 3>& x, double* out) const;  // [comp*3 + m]
};

// forcing that makes the same psi exact for the order parameter equation
// with the potential frozen to zero (2D only); used to test the psi update
// in isolation
void zero_field_g(const ManufacturedCase& c, const std::array<double, 3>& x, double t,
                  double* reim);

}  // namespace tdgl
