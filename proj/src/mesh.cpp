#include "tdgl/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>

namespace tdgl {
namespace {

using V3 = std::array<double, 3>;

V3 sub(const V3& a, const V3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
V3 cross(const V3& a, const V3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const V3& a) { return std::sqrt(dot(a, a)); }

double signed_measure(const Mesh& m, const std::array<int, 4>& c, int dim) {
  const auto& v = m.vertices;
  if (dim == 2) {
    V3 e1 = sub(v[c[1]], v[c[0]]), e2 = sub(v[c[2]], v[c[0]]);
    return 0.5 * (e1[0] * e2[1] - e1[1] * e2[0]);
  }
  V3 e1 = sub(v[c[1]], v[c[0]]), e2 = sub(v[c[2]], v[c[0]]), e3 = sub(v[c[3]], v[c[0]]);
  return dot(cross(e1, e2), e3) / 6.0;
}

}  // namespace

void Mesh::finalize() {
  if (dim != 2 && dim != 3) throw MeshError("mesh: dim must be 2 or 3");
  const int nv = nverts(), nc = ncells(), npc = dim + 1;
  if (nc == 0) throw MeshError("mesh: no cells");

  cell_reordered.assign(nc, 0);
  double scale = 0.0;
  for (int c = 0; c < nc; ++c) {
    for (int k = 0; k < npc; ++k)
      if (cells[c][k] < 0 || cells[c][k] >= nv)
        throw MeshError("mesh: cell " + std::to_string(c) + " references invalid vertex");
    double s = signed_measure(*this, cells[c], dim);
    if (s < 0.0) {
      std::swap(cells[c][npc - 2], cells[c][npc - 1]);
      cell_reordered[c] = 1;
      s = -s;
    }
    scale = std::max(scale, s);
  }
  for (int c = 0; c < nc; ++c) {
    const double s = signed_measure(*this, cells[c], dim);
    if (!(s > 1e-12 * scale))
      throw MeshError("mesh: degenerate cell " + std::to_string(c));
  }

  std::vector<uint8_t> used(nv, 0);
  for (int c = 0; c < nc; ++c)
    for (int k = 0; k < npc; ++k) used[cells[c][k]] = 1;
  for (int v = 0; v < nv; ++v)
    if (!used[v]) throw MeshError("mesh: vertex " + std::to_string(v) + " referenced by no cell");

  // edges: canonical sorted list (independent of cell order)
  const int ne_loc = dim == 2 ? 3 : 6;
  std::vector<std::array<int, 2>> epairs;
  epairs.reserve(static_cast<size_t>(nc) * ne_loc);
  for (int c = 0; c < nc; ++c)
    for (int k = 0; k < ne_loc; ++k) {
      int a = cells[c][dim == 2 ? tri_edge_verts[k][0] : tet_edge_verts[k][0]];
      int b = cells[c][dim == 2 ? tri_edge_verts[k][1] : tet_edge_verts[k][1]];
      if (a > b) std::swap(a, b);
      epairs.push_back({a, b});
    }
  std::sort(epairs.begin(), epairs.end());
  epairs.erase(std::unique(epairs.begin(), epairs.end()), epairs.end());
  edges = std::move(epairs);

  cell_edges.assign(nc, {-1, -1, -1, -1, -1, -1});
  cell_edge_signs.assign(nc, {0, 0, 0, 0, 0, 0});
  for (int c = 0; c < nc; ++c)
    for (int k = 0; k < ne_loc; ++k) {
      int a = cells[c][dim == 2 ? tri_edge_verts[k][0] : tet_edge_verts[k][0]];
      int b = cells[c][dim == 2 ? tri_edge_verts[k][1] : tet_edge_verts[k][1]];
      if (a > b) std::swap(a, b);
      auto it = std::lower_bound(edges.begin(), edges.end(), std::array<int, 2>{a, b});
      cell_edges[c][k] = static_cast<int>(it - edges.begin());
      if (dim == 2) {
        // +1 iff global edge normal (rotate lo->hi by -90 deg) points outward
        const V3 t = sub(vertices[b], vertices[a]);
        const V3 n = {t[1], -t[0], 0.0};
        const int opp = cells[c][0] + cells[c][1] + cells[c][2] - a - b;
        cell_edge_signs[c][k] = dot(n, sub(vertices[opp], vertices[a])) < 0.0 ? 1 : -1;
      }
    }

  if (dim == 3) {
    std::vector<std::array<int, 3>> ftrip;
    ftrip.reserve(static_cast<size_t>(nc) * 4);
    for (int c = 0; c < nc; ++c)
      for (int k = 0; k < 4; ++k) {
        std::array<int, 3> f = {cells[c][tet_face_verts[k][0]], cells[c][tet_face_verts[k][1]],
                                cells[c][tet_face_verts[k][2]]};
        std::sort(f.begin(), f.end());
        ftrip.push_back(f);
      }
    std::sort(ftrip.begin(), ftrip.end());
    ftrip.erase(std::unique(ftrip.begin(), ftrip.end()), ftrip.end());
    faces = std::move(ftrip);

    cell_faces.assign(nc, {-1, -1, -1, -1});
    cell_face_signs.assign(nc, {0, 0, 0, 0});
    for (int c = 0; c < nc; ++c)
      for (int k = 0; k < 4; ++k) {
        std::array<int, 3> f = {cells[c][tet_face_verts[k][0]], cells[c][tet_face_verts[k][1]],
                                cells[c][tet_face_verts[k][2]]};
        std::sort(f.begin(), f.end());
        auto it = std::lower_bound(faces.begin(), faces.end(), f);
        cell_faces[c][k] = static_cast<int>(it - faces.begin());
        const V3 n = cross(sub(vertices[f[1]], vertices[f[0]]), sub(vertices[f[2]], vertices[f[0]]));
        const int opp = cells[c][k];  // face k is opposite local vertex k
        cell_face_signs[c][k] = dot(n, sub(vertices[opp], vertices[f[0]])) < 0.0 ? 1 : -1;
      }
  } else {
    faces.clear();
    cell_faces.clear();
    cell_face_signs.clear();
  }

  // boundary detection via facet incidence counts
  vertex_on_boundary.assign(nv, 0);
  if (dim == 2) {
    std::vector<int> cnt(nedges(), 0);
    for (int c = 0; c < nc; ++c)
      for (int k = 0; k < 3; ++k) cnt[cell_edges[c][k]]++;
    edge_on_boundary.assign(nedges(), 0);
    for (int e = 0; e < nedges(); ++e) {
      if (cnt[e] > 2)
        throw MeshError("mesh: non-manifold edge " + std::to_string(e) + " shared by " +
                        std::to_string(cnt[e]) + " cells");
      if (cnt[e] == 1) {
        edge_on_boundary[e] = 1;
        vertex_on_boundary[edges[e][0]] = 1;
        vertex_on_boundary[edges[e][1]] = 1;
      }
    }
    face_on_boundary.clear();
  } else {
    std::vector<int> cnt(nfaces(), 0);
    for (int c = 0; c < nc; ++c)
      for (int k = 0; k < 4; ++k) cnt[cell_faces[c][k]]++;
    face_on_boundary.assign(nfaces(), 0);
    edge_on_boundary.assign(nedges(), 0);
    for (int f = 0; f < nfaces(); ++f) {
      if (cnt[f] > 2)
        throw MeshError("mesh: non-manifold face " + std::to_string(f) + " shared by " +
                        std::to_string(cnt[f]) + " cells");
      if (cnt[f] == 1) {
        face_on_boundary[f] = 1;
        for (int j = 0; j < 3; ++j) {
          vertex_on_boundary[faces[f][j]] = 1;
          int a = faces[f][j], b = faces[f][(j + 1) % 3];
          if (a > b) std::swap(a, b);
          auto it = std::lower_bound(edges.begin(), edges.end(), std::array<int, 2>{a, b});
          edge_on_boundary[it - edges.begin()] = 1;
        }
      }
    }
  }
  if (edge_tag.size() != edges.size()) edge_tag.assign(edges.size(), 0);
  if (dim == 3 && face_tag.size() != faces.size()) face_tag.assign(faces.size(), 0);
  if (dim == 2) face_tag.clear();
  for (size_t e = 0; e < edges.size(); ++e)
    if (edge_on_boundary[e] && edge_tag[e] == 0) edge_tag[e] = 1;
  if (dim == 3)
    for (size_t f = 0; f < faces.size(); ++f)
      if (face_on_boundary[f] && face_tag[f] == 0) face_tag[f] = 1;
}

double Mesh::cell_volume(int c) const { return std::abs(signed_measure(*this, cells[c], dim)); }

std::array<double, 3> Mesh::cell_centroid(int c) const {
  V3 r = {0, 0, 0};
  const int npc = dim + 1;
  for (int k = 0; k < npc; ++k)
    for (int d = 0; d < 3; ++d) r[d] += vertices[cells[c][k]][d];
  for (int d = 0; d < 3; ++d) r[d] /= npc;
  return r;
}

double Mesh::total_volume() const {
  double s = 0.0;
  for (int c = 0; c < ncells(); ++c) s += cell_volume(c);
  return s;
}

double Mesh::min_angle_deg() const {
  if (dim != 2) throw MeshError("min_angle_deg: 2D only");
  double worst = 180.0;
  for (int c = 0; c < ncells(); ++c)
    for (int k = 0; k < 3; ++k) {
      const V3& a = vertices[cells[c][k]];
      const V3& b = vertices[cells[c][(k + 1) % 3]];
      const V3& d = vertices[cells[c][(k + 2) % 3]];
      V3 u = sub(b, a), w = sub(d, a);
      const double ang = std::acos(std::clamp(dot(u, w) / (norm(u) * norm(w)), -1.0, 1.0));
      worst = std::min(worst, ang * 180.0 / M_PI);
    }
  return worst;
}

double Mesh::max_edge_length() const {
  double m = 0.0;
  for (const auto& e : edges) m = std::max(m, norm(sub(vertices[e[1]], vertices[e[0]])));
  return m;
}

uint64_t Mesh::content_hash() const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  mix(&dim, sizeof dim);
  for (const auto& v : vertices) mix(v.data(), sizeof(double) * 3);
  for (const auto& c : cells) mix(c.data(), sizeof(int) * 4);
  return h;
}

Mesh generate_unit_square_mesh(int M) {
  if (M < 1) throw MeshError("generate_unit_square_mesh: M must be >= 1");
  Mesh m;
  m.dim = 2;
  m.kind = Mesh::Kind::StructuredSquare;
  m.structured_m = M;
  m.vertices.reserve(static_cast<size_t>(M + 1) * (M + 1));
  for (int j = 0; j <= M; ++j)
    for (int i = 0; i <= M; ++i)
      m.vertices.push_back({static_cast<double>(i) / M, static_cast<double>(j) / M, 0.0});
  auto vid = [M](int i, int j) { return j * (M + 1) + i; };
  m.cells.reserve(static_cast<size_t>(2) * M * M);
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < M; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      m.cells.push_back({v00, v10, v11, -1});  // below the lo->hi diagonal
      m.cells.push_back({v00, v11, v01, -1});
    }
  m.finalize();
  return m;
}

namespace {
// Kuhn permutations in lexicographic order; tet k of a cube walks axes perm[k]
constexpr int kuhn_perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
}

Mesh generate_unit_cube_mesh(int M) {
  if (M < 1) throw MeshError("generate_unit_cube_mesh: M must be >= 1");
  Mesh m;
  m.dim = 3;
  m.kind = Mesh::Kind::StructuredCube;
  m.structured_m = M;
  const int S = M + 1;
  m.vertices.reserve(static_cast<size_t>(S) * S * S);
  for (int k = 0; k <= M; ++k)
    for (int j = 0; j <= M; ++j)
      for (int i = 0; i <= M; ++i)
        m.vertices.push_back({static_cast<double>(i) / M, static_cast<double>(j) / M,
                              static_cast<double>(k) / M});
  auto vid = [S](int i, int j, int k) { return (k * S + j) * S + i; };
  m.cells.reserve(static_cast<size_t>(6) * M * M * M);
  for (int k = 0; k < M; ++k)
    for (int j = 0; j < M; ++j)
      for (int i = 0; i < M; ++i)
        for (int p = 0; p < 6; ++p) {
          int idx[3] = {i, j, k};
          std::array<int, 4> cell;
          cell[0] = vid(idx[0], idx[1], idx[2]);
          for (int s = 0; s < 3; ++s) {
            idx[kuhn_perm[p][s]]++;
            cell[s + 1] = vid(idx[0], idx[1], idx[2]);
          }
          m.cells.push_back(cell);
        }
  m.finalize();
  return m;
}

int locate_structured_cell(const Mesh& m, const std::array<double, 3>& p) {
  const int M = m.structured_m;
  if (m.kind == Mesh::Kind::StructuredSquare) {
    int i = std::clamp(static_cast<int>(std::floor(p[0] * M)), 0, M - 1);
    int j = std::clamp(static_cast<int>(std::floor(p[1] * M)), 0, M - 1);
    const double u = p[0] * M - i, v = p[1] * M - j;
    return 2 * (j * M + i) + (v > u ? 1 : 0);
  }
  if (m.kind == Mesh::Kind::StructuredCube) {
    int idx[3];
    double u[3];
    for (int d = 0; d < 3; ++d) {
      idx[d] = std::clamp(static_cast<int>(std::floor(p[d] * M)), 0, M - 1);
      u[d] = p[d] * M - idx[d];
    }
    // permutation with u[perm[0]] >= u[perm[1]] >= u[perm[2]]
    int ord[3] = {0, 1, 2};
    std::stable_sort(ord, ord + 3, [&u](int a, int b) { return u[a] > u[b]; });
    int rank = -1;
    for (int p6 = 0; p6 < 6; ++p6)
      if (kuhn_perm[p6][0] == ord[0] && kuhn_perm[p6][1] == ord[1] && kuhn_perm[p6][2] == ord[2])
        rank = p6;
    const int cube = (idx[2] * M + idx[1]) * M + idx[0];
    return 6 * cube + rank;
  }
  throw MeshError("locate_structured_cell: mesh is not a generated structured mesh");
}

// ---------------------------------------------------------------------------
// notched disk: boundary polyline + hex interior lattice + Bowyer-Watson
// Delaunay, filtered to the domain, with Laplacian smoothing rounds.
// ---------------------------------------------------------------------------
namespace {

struct NotchGeom {
  double R, d, alpha;
  double ray_len;    // apex to circle along the notch edge
  double thetaU;     // polar angle of the upper notch corner on the circle
  V3 apex, U, L;
};

NotchGeom notch_geometry(const NotchedDiskParams& p) {
  NotchGeom g;
  g.R = p.radius;
  g.d = p.notch_depth;
  g.alpha = p.notch_half_angle;
  if (!(g.d > 0.0 && g.d < g.R)) throw MeshError("notched disk: need 0 < depth < radius");
  if (!(g.alpha > 0.0 && g.alpha < M_PI / 2))
    throw MeshError("notched disk: need 0 < half angle < pi/2");
  const double P = g.R - g.d, ca = std::cos(g.alpha);
  g.ray_len = -P * ca + std::sqrt(P * P * ca * ca - P * P + g.R * g.R);
  g.apex = {P, 0.0, 0.0};
  g.U = {P + g.ray_len * std::cos(g.alpha), g.ray_len * std::sin(g.alpha), 0.0};
  g.L = {g.U[0], -g.U[1], 0.0};
  g.thetaU = std::atan2(g.U[1], g.U[0]);
  return g;
}

double dist_point_segment(const V3& p, const V3& a, const V3& b) {
  const V3 ab = sub(b, a), ap = sub(p, a);
  const double t = std::clamp(dot(ap, ab) / dot(ab, ab), 0.0, 1.0);
  const V3 q = {a[0] + t * ab[0], a[1] + t * ab[1], 0.0};
  return norm(sub(p, q));
}

bool inside_domain(const NotchGeom& g, const V3& p) {
  if (p[0] * p[0] + p[1] * p[1] >= g.R * g.R) return false;
  const double qx = p[0] - g.apex[0], qy = p[1] - g.apex[1];
  if (qx <= 0.0) return true;
  return std::atan2(std::abs(qy), qx) > g.alpha;
}

double boundary_distance(const NotchGeom& g, const V3& p) {
  double dmin = g.R - std::sqrt(p[0] * p[0] + p[1] * p[1]);
  dmin = std::min(dmin, dist_point_segment(p, g.apex, g.U));
  dmin = std::min(dmin, dist_point_segment(p, g.apex, g.L));
  return dmin;
}

// deterministic hash jitter in [-1,1]
double hash_unit(uint64_t a, uint64_t b, uint64_t salt) {
  uint64_t x = a * 0x9e3779b97f4a7c15ull ^ b * 0xbf58476d1ce4e5b9ull ^ salt * 0x94d049bb133111ebull;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return 2.0 * (static_cast<double>(x >> 11) * 0x1.0p-53) - 1.0;
}

struct DelTri {
  int v[3];
  double cx, cy, r2;  // circumcircle
};

void circumcircle(const std::vector<V3>& pts, DelTri& t) {
  const V3 &a = pts[t.v[0]], &b = pts[t.v[1]], &c = pts[t.v[2]];
  const double bx = b[0] - a[0], by = b[1] - a[1], cx = c[0] - a[0], cy = c[1] - a[1];
  const double d = 2.0 * (bx * cy - by * cx);
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const double ux = (cy * b2 - by * c2) / d, uy = (bx * c2 - cx * b2) / d;
  t.cx = a[0] + ux;
  t.cy = a[1] + uy;
  t.r2 = ux * ux + uy * uy;
}

// Bowyer-Watson over the given points (all retained; callers filter cells).
std::vector<std::array<int, 3>> delaunay(std::vector<V3> pts) {
  const int n = static_cast<int>(pts.size());
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  for (const auto& p : pts)
    for (int d = 0; d < 2; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  const double cx = 0.5 * (lo[0] + hi[0]), cy = 0.5 * (lo[1] + hi[1]);
  const double span = std::max(hi[0] - lo[0], hi[1] - lo[1]);
  pts.push_back({cx - 20.0 * span, cy - 10.0 * span, 0.0});
  pts.push_back({cx + 20.0 * span, cy - 10.0 * span, 0.0});
  pts.push_back({cx, cy + 20.0 * span, 0.0});

  std::vector<DelTri> tris;
  DelTri super{{n, n + 1, n + 2}, 0, 0, 0};
  circumcircle(pts, super);
  tris.push_back(super);

  std::vector<int> bad;
  std::map<std::pair<int, int>, int> edge_count;
  for (int ip = 0; ip < n; ++ip) {
    const double px = pts[ip][0], py = pts[ip][1];
    bad.clear();
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      const double dx = px - tris[t].cx, dy = py - tris[t].cy;
      if (dx * dx + dy * dy < tris[t].r2 * (1.0 - 1e-12)) bad.push_back(t);
    }
    edge_count.clear();
    for (int t : bad)
      for (int k = 0; k < 3; ++k) {
        int a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
        if (a > b) std::swap(a, b);
        edge_count[{a, b}]++;
      }
    // delete bad triangles (descending order keeps indices valid)
    for (int i = static_cast<int>(bad.size()) - 1; i >= 0; --i) {
      tris[bad[i]] = tris.back();
      tris.pop_back();
    }
    for (const auto& [e, cnt] : edge_count) {
      if (cnt != 1) continue;  // interior cavity edge
      DelTri t{{e.first, e.second, ip}, 0, 0, 0};
      const V3 &a = pts[t.v[0]], &b = pts[t.v[1]], &c = pts[t.v[2]];
      const double area2 =
          (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
      if (std::abs(area2) < 1e-14 * span * span) continue;
      circumcircle(pts, t);
      tris.push_back(t);
    }
  }
  std::vector<std::array<int, 3>> out;
  for (const auto& t : tris)
    if (t.v[0] < n && t.v[1] < n && t.v[2] < n) out.push_back({t.v[0], t.v[1], t.v[2]});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double notched_disk_area(const NotchedDiskParams& p) {
  const NotchGeom g = notch_geometry(p);
  return g.R * g.R * (M_PI - g.thetaU) + (g.R - g.d) * g.R * std::sin(g.thetaU);
}

std::array<double, 3> notched_disk_corner(const NotchedDiskParams& p) {
  return {p.radius - p.notch_depth, 0.0, 0.0};
}

Mesh generate_notched_disk_mesh(const NotchedDiskParams& prm) {
  const NotchGeom g = notch_geometry(prm);
  const double h = prm.target_h;
  if (!(h > 0.0 && h < g.R)) throw MeshError("notched disk: bad target_h");

  // boundary polyline, ccw: U --arc--> L --seg--> apex --seg--> U
  std::vector<V3> pts;
  const double arc_span = 2.0 * M_PI - 2.0 * g.thetaU;
  const int n_arc = std::max(8, static_cast<int>(std::ceil(arc_span * g.R / (0.95 * h))));
  for (int k = 0; k <= n_arc; ++k) {
    const double th = g.thetaU + arc_span * k / n_arc;
    pts.push_back({g.R * std::cos(th), g.R * std::sin(th), 0.0});
  }
  const int n_seg = std::max(2, static_cast<int>(std::ceil(g.ray_len / (0.95 * h))));
  for (int k = 1; k <= n_seg; ++k) {  // L -> apex, excluding L (already present)
    const double s = static_cast<double>(k) / n_seg;
    pts.push_back({g.L[0] + s * (g.apex[0] - g.L[0]), g.L[1] + s * (g.apex[1] - g.L[1]), 0.0});
  }
  const int apex_index = static_cast<int>(pts.size()) - 1;
  for (int k = 1; k < n_seg; ++k) {  // apex -> U, excluding both endpoints
    const double s = static_cast<double>(k) / n_seg;
    pts.push_back({g.apex[0] + s * (g.U[0] - g.apex[0]), g.apex[1] + s * (g.U[1] - g.apex[1]), 0.0});
  }
  const int n_boundary = static_cast<int>(pts.size());

  // boundary layer: one ring offset inward and staggered half a spacing,
  // kept fixed during smoothing; avoids holes along the arc that lattice
  // culling alone would leave
  const double delta = 0.75 * h;
  std::vector<V3> ring;
  auto push_ring = [&](const V3& q) {
    if (!inside_domain(g, q)) return;
    if (boundary_distance(g, q) < 0.5 * h) return;
    for (const auto& r : ring)
      if (norm(sub(q, r)) < 0.55 * h) return;
    ring.push_back(q);
  };
  for (int k = 0; k < n_arc; ++k) {
    const double th = g.thetaU + arc_span * (k + 0.5) / n_arc;
    push_ring({(g.R - delta) * std::cos(th), (g.R - delta) * std::sin(th), 0.0});
  }
  const double sa = std::sin(g.alpha), ca2 = std::cos(g.alpha);
  for (int k = 0; k < n_seg; ++k) {
    const double s = (k + 0.5) / n_seg * g.ray_len;
    // offsets of both notch edges along the inward (away from wedge) normal
    push_ring({g.apex[0] + s * ca2 - delta * sa, s * sa + delta * ca2, 0.0});
    push_ring({g.apex[0] + s * ca2 - delta * sa, -s * sa - delta * ca2, 0.0});
  }
  {
    // two fans around the reflex apex corner; the outer one fills the dead
    // zone between the inner fan and the culled lattice
    const double th0 = M_PI / 2 + g.alpha, th1 = 3 * M_PI / 2 - g.alpha;
    for (const double rad : {delta, delta + 0.9 * h}) {
      const int nfan = std::max(2, static_cast<int>(std::ceil(rad * (th1 - th0) / (0.95 * h))));
      for (int k = 0; k <= nfan; ++k) {
        const double th = th0 + (th1 - th0) * k / nfan;
        push_ring({g.apex[0] + rad * std::cos(th), rad * std::sin(th), 0.0});
      }
    }
  }
  for (const auto& q : ring) pts.push_back(q);
  const int n_fixed = static_cast<int>(pts.size());

  // interior hex lattice with jitter, culled near boundary and ring; pitch
  // slightly below h keeps natural circumradii clear of the refinement
  // threshold so the interior is not refined wholesale
  const double pitch = 0.92 * h;
  const double row_h = pitch * std::sqrt(3.0) / 2.0;
  const int jmax = static_cast<int>(std::ceil(g.R / row_h)) + 1;
  const int imax = static_cast<int>(std::ceil(g.R / pitch)) + 1;
  for (int j = -jmax; j <= jmax; ++j)
    for (int i = -imax; i <= imax; ++i) {
      V3 p = {i * pitch + (j & 1 ? 0.5 * pitch : 0.0), j * row_h, 0.0};
      p[0] += 0.05 * pitch * hash_unit(i + 40000, j + 40000, 17);
      p[1] += 0.05 * pitch * hash_unit(i + 40000, j + 40000, 91);
      if (!inside_domain(g, p)) continue;
      if (boundary_distance(g, p) < delta + 0.45 * h) continue;
      bool near_ring = false;
      for (const auto& r : ring)
        if (norm(sub(p, r)) < 0.6 * h) {
          near_ring = true;
          break;
        }
      if (near_ring) continue;
      pts.push_back(p);
    }

  // alternate Delaunay refinement (insert circumcenters of oversized or
  // skinny triangles) with Laplacian smoothing until sizes settle
  std::vector<std::array<int, 3>> tris;
  auto retriangulate = [&]() {
    tris = delaunay(pts);
    std::vector<std::array<int, 3>> kept;
    for (const auto& t : tris) {
      V3 c = {(pts[t[0]][0] + pts[t[1]][0] + pts[t[2]][0]) / 3.0,
              (pts[t[0]][1] + pts[t[1]][1] + pts[t[2]][1]) / 3.0, 0.0};
      if (inside_domain(g, c)) kept.push_back(t);
    }
    tris = std::move(kept);
  };
  auto smooth_once = [&]() {
    std::vector<V3> acc(pts.size(), {0, 0, 0});
    std::vector<int> cnt(pts.size(), 0);
    for (const auto& t : tris)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          if (l != k) {
            acc[t[k]][0] += pts[t[l]][0];
            acc[t[k]][1] += pts[t[l]][1];
            cnt[t[k]]++;
          }
    for (int v = n_fixed; v < static_cast<int>(pts.size()); ++v) {
      if (cnt[v] == 0) continue;
      V3 q = {acc[v][0] / cnt[v], acc[v][1] / cnt[v], 0.0};
      if (inside_domain(g, q) && boundary_distance(g, q) > 0.4 * h) pts[v] = q;
    }
  };
  auto insert_pass = [&]() -> int {
    std::vector<V3> inserts;
    for (const auto& t : tris) {
      const V3 &a = pts[t[0]], &b = pts[t[1]], &c = pts[t[2]];
      const double bx = b[0] - a[0], by = b[1] - a[1], cx = c[0] - a[0], cy = c[1] - a[1];
      const double d = 2.0 * (bx * cy - by * cx);
      const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
      const double ux = (cy * b2 - by * c2) / d, uy = (bx * c2 - cx * b2) / d;
      const double rc = std::sqrt(ux * ux + uy * uy);
      double emin = 1e300;
      for (int k = 0; k < 3; ++k)
        emin = std::min(emin, norm(sub(pts[t[(k + 1) % 3]], pts[t[k]])));
      const bool oversized = rc > 0.57 * h;
      const bool skinny = rc > 1.45 * emin && rc > 0.42 * h;  // angle below ~20 deg
      if (!oversized && !skinny) continue;
      const V3 q = {a[0] + ux, a[1] + uy, 0.0};
      if (!inside_domain(g, q) || boundary_distance(g, q) < 0.45 * h) continue;
      bool crowded = false;
      for (const auto& r : inserts)
        if (norm(sub(q, r)) < 0.5 * h) {
          crowded = true;
          break;
        }
      for (size_t v = 0; v < pts.size() && !crowded; ++v)
        if (norm(sub(q, pts[v])) < 0.5 * h) crowded = true;
      if (!crowded) inserts.push_back(q);
    }
    for (const auto& q : inserts) pts.push_back(q);
    return static_cast<int>(inserts.size());
  };

  int quiet = 0;
  for (int iter = 0; iter < 40 && quiet < 4; ++iter) {
    retriangulate();
    if (iter % 2 == 0) {
      quiet = insert_pass() == 0 ? quiet + 1 : 0;
    } else {
      smooth_once();
    }
  }
  retriangulate();

  Mesh m;
  m.dim = 2;
  m.vertices = pts;
  for (const auto& t : tris) m.cells.push_back({t[0], t[1], t[2], -1});
  m.finalize();

  // quality and topology validation
  const double area = m.total_volume();
  const double exact = notched_disk_area(prm);
  if (std::abs(area - exact) > 0.02 * exact)
    throw MeshError("notched disk: mesh area " + std::to_string(area) +
                    " deviates from domain area " + std::to_string(exact));
  const double minang = m.min_angle_deg();
  if (minang < 20.0)
    throw MeshError("notched disk: min angle " + std::to_string(minang) + " deg below 20");
  const double maxe = m.max_edge_length();
  if (maxe > 1.2 * h) {
    std::string where;
    for (const auto& e : m.edges)
      if (std::abs(norm(sub(m.vertices[e[1]], m.vertices[e[0]])) - maxe) < 1e-12)
        where = "(" + std::to_string(m.vertices[e[0]][0]) + "," + std::to_string(m.vertices[e[0]][1]) +
                (e[0] < n_boundary ? " b" : " i") + ")-(" + std::to_string(m.vertices[e[1]][0]) +
                "," + std::to_string(m.vertices[e[1]][1]) + (e[1] < n_boundary ? " b" : " i") + ")";
    throw MeshError("notched disk: max edge " + std::to_string(maxe) +
                    " exceeds 1.2*target_h at " + where);
  }
  if (!m.vertex_on_boundary[apex_index])
    throw MeshError("notched disk: notch apex is not a boundary vertex");
  const int euler = m.nverts() - m.nedges() + m.ncells();
  if (euler != 1)
    throw MeshError("notched disk: Euler characteristic " + std::to_string(euler) +
                    ", mesh has holes or disconnected parts");
  return m;
}

}  // namespace tdgl
