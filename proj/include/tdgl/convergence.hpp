#pragma once
// Mesh-refinement studies for the manufactured runs. Five error columns:
// psi, A, gamma, curl gamma, div A.
//
// Richardson flavor: fixed dt and step count on meshes M, 2M, 4M, ...; the
// error proxy of a pair is the L2 difference between the two solutions,
// integrated on the finer mesh with the coarse one evaluated through the
// nested cells. Sharing the time grid cancels the time error, so the
// spatial rate shows even when dt is not small. The observed order is
// log2 of the ratio of consecutive differences.
//
// Graphical flavor: dt tied to the mesh by dt = M^-3 and errors measured
// against the exact fields at the final time; orders are least-squares
// slopes of log error against log h over the finest three levels.

#include <array>
#include <string>
#include <vector>

#include "tdgl/mms.hpp"
#include "tdgl/solver.hpp"

namespace tdgl {

inline constexpr const char* kErrorColumns[5] = {"psi", "A", "gamma", "curl_gamma", "div_A"};

// log2(e_coarse / e_fine); both inputs must be positive and finite
double richardson_order(double e_coarse, double e_fine);

struct RichardsonLevel {
  int M = 0;                     // finer mesh of the pair
  std::array<double, 5> diff{};  // ||u_{2M} - u_M|| per column
};

struct RichardsonStudy {
  std::vector<RichardsonLevel> levels;
  std::array<double, 5> orders{};  // from the last two difference levels
};

RichardsonStudy richardson_study(const ManufacturedCase& c, int degree, int base_M,
                                 int nlevels, double dt, int nsteps);

struct GraphicalLevel {
  int M = 0;
  double dt = 0;
  std::array<double, 5> error{};
};

struct GraphicalStudy {
  std::vector<GraphicalLevel> levels;
  std::array<double, 5> slopes{};
  std::vector<std::array<double, 5>> segment_slopes;  // between consecutive levels
};

GraphicalStudy graphical_study(const ManufacturedCase& c, int degree, int base_M,
                               int nlevels, double t_final);

// estimator self test: the "numerical" input is the interpolated exact
// solution, so the study must report the plain interpolation rates
GraphicalStudy graphical_study_interpolants(const ManufacturedCase& c, int degree,
                                            int base_M, int nlevels, double t_final);

void write_study_csv(const std::string& path, const RichardsonStudy& st);
void write_study_csv(const std::string& path, const GraphicalStudy& st);

}  // namespace tdgl
