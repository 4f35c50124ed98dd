#include "tdgl/vortices.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace tdgl {

namespace {

constexpr double kPi = std::numbers::pi;

// vertex id -> dof index of the nodal space
std::vector<int> vertex_dofs(const Space& sp) {
  if (sp.family() != Family::Lagrange)
    throw std::invalid_argument("vortex analysis needs a nodal order parameter space");
  if (sp.mesh().dim != 2) throw std::invalid_argument("vortex analysis is 2D only");
  std::vector<int> vd(sp.mesh().nverts(), -1);
  for (int i = 0; i < sp.ndofs(); ++i) {
    const auto e = sp.dof_entity(i);
    if (e.dim == 0) vd[e.id] = i;
  }
  return vd;
}

double wrap_pi(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

double phase(std::complex<double> z) {
  // a vanishing sample would make the phase ill defined; nudge it off zero
  if (z.real() == 0.0 && z.imag() == 0.0) z.real(1e-14);
  return std::arg(z);
}

std::vector<std::vector<int>> edge_to_cells(const Mesh& m) {
  std::vector<std::vector<int>> e2c(m.nedges());
  for (int c = 0; c < m.ncells(); ++c)
    for (int k = 0; k < 3; ++k) e2c[m.cell_edges[c][k]].push_back(c);
  return e2c;
}

// grow edge-connected components of flagged cells
std::vector<std::vector<int>> flagged_clusters(const Mesh& m, const std::vector<uint8_t>& flag) {
  const auto e2c = edge_to_cells(m);
  std::vector<uint8_t> seen(m.ncells(), 0);
  std::vector<std::vector<int>> clusters;
  for (int c0 = 0; c0 < m.ncells(); ++c0) {
    if (!flag[c0] || seen[c0]) continue;
    std::vector<int> stack{c0}, cluster;
    seen[c0] = 1;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      cluster.push_back(c);
      for (int k = 0; k < 3; ++k)
        for (int nb : e2c[m.cell_edges[c][k]])
          if (flag[nb] && !seen[nb]) {
            seen[nb] = 1;
            stack.push_back(nb);
          }
    }
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

}  // namespace

std::vector<Vortex> count_vortices(const Space& psi_space, const Eigen::VectorXcd& psi) {
  const Mesh& m = psi_space.mesh();
  const auto vd = vertex_dofs(psi_space);
  std::vector<uint8_t> flag(m.ncells(), 0);
  std::vector<double> winding(m.ncells(), 0.0), depth(m.ncells(), 0.0);
  for (int c = 0; c < m.ncells(); ++c) {
    double th[3], am = 0.0;
    for (int k = 0; k < 3; ++k) {
      const std::complex<double> z = psi[vd[m.cells[c][k]]];
      th[k] = phase(z);
      am += std::abs(z) / 3.0;
    }
    const double w = wrap_pi(th[1] - th[0]) + wrap_pi(th[2] - th[1]) + wrap_pi(th[0] - th[2]);
    winding[c] = w;
    depth[c] = std::max(0.0, 1.0 - am);
    if (std::abs(w) >= kPi) flag[c] = 1;
  }
  std::vector<Vortex> out;
  for (const auto& cluster : flagged_clusters(m, flag)) {
    Vortex v;
    v.ncells = static_cast<int>(cluster.size());
    double wsum = 0.0, area_sum = 0.0;
    std::array<double, 3> pw = {0, 0, 0}, pa = {0, 0, 0};
    for (int c : cluster) {
      const double area = m.cell_volume(c);
      const auto ctr = m.cell_centroid(c);
      v.winding += winding[c];
      const double w = area * depth[c];
      wsum += w;
      area_sum += area;
      for (int d = 0; d < 2; ++d) {
        pw[d] += w * ctr[d];
        pa[d] += area * ctr[d];
      }
    }
    v.winding /= 2.0 * kPi;
    for (int d = 0; d < 2; ++d)
      v.position[d] = wsum > 1e-300 ? pw[d] / wsum : pa[d] / area_sum;
    out.push_back(v);
  }
  return out;
}

int count_suppressed_regions(const Space& psi_space, const Eigen::VectorXcd& psi, double tau) {
  const Mesh& m = psi_space.mesh();
  const auto vd = vertex_dofs(psi_space);
  std::vector<uint8_t> flag(m.ncells(), 0);
  for (int c = 0; c < m.ncells(); ++c) {
    double am = 0.0;
    for (int k = 0; k < 3; ++k) am += std::abs(psi[vd[m.cells[c][k]]]) / 3.0;
    flag[c] = am < tau;
  }
  int count = 0;
  for (const auto& cluster : flagged_clusters(m, flag)) {
    bool touches = false;
    for (int c : cluster)
      for (int k = 0; k < 3 && !touches; ++k)
        if (m.edge_on_boundary[m.cell_edges[c][k]]) touches = true;
    if (!touches) ++count;
  }
  return count;
}

double renormalized_energy(const std::vector<std::array<double, 3>>& pts, double C) {
  const int n = static_cast<int>(pts.size());
  double inter = 0.0, conf = 0.0;
  for (int i = 0; i < n; ++i) {
    conf += pts[i][0] * pts[i][0] + pts[i][1] * pts[i][1];
    for (int j = i + 1; j < n; ++j) {
      const double dx = pts[i][0] - pts[j][0];
      const double dy = pts[i][1] - pts[j][1];
      const double d2 = dx * dx + dy * dy;
      if (d2 < 1e-24)
        throw std::invalid_argument("renormalized energy: coincident vortex positions");
      inter += std::log(d2);  // log d, twice (ordered pairs)
    }
  }
  return -kPi * inter + C * kPi * n * conf;
}

double normal_zone_fraction(const Space& psi_space, const Eigen::VectorXcd& psi,
                            const std::array<double, 3>& center, double radius,
                            double threshold) {
  const Mesh& m = psi_space.mesh();
  const auto vd = vertex_dofs(psi_space);
  double total = 0.0, bad = 0.0;
  for (int c = 0; c < m.ncells(); ++c) {
    const auto ctr = m.cell_centroid(c);
    const double dx = ctr[0] - center[0], dy = ctr[1] - center[1];
    if (dx * dx + dy * dy > radius * radius) continue;
    const double area = m.cell_volume(c);
    total += area;
    double am = 0.0;
    for (int k = 0; k < 3; ++k) am += std::abs(psi[vd[m.cells[c][k]]]) / 3.0;
    if (am < threshold) bad += area;
  }
  return total > 0.0 ? bad / total : 0.0;
}

}  // namespace tdgl
