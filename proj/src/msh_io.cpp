// Minimal MSH 2.2 ASCII reader/writer. Elements of type 1 (line) and 2
// (triangle) carry boundary tags in 2D; type 4 (tet) and 2 in 3D.
#include "tdgl/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace tdgl {
namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw MeshError("msh parse error at line " + std::to_string(line) + ": " + what);
}

struct LineReader {
  std::istream& in;
  int lineno = 0;
  bool next(std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      // strip trailing CR from files written on other platforms
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (!out.empty()) return true;
    }
    return false;
  }
};

}  // namespace

Mesh read_msh_string(const std::string& text) {
  std::istringstream in(text);
  LineReader rd{in};
  std::string line;

  if (!rd.next(line) || line != "$MeshFormat") fail(rd.lineno, "expected $MeshFormat");
  if (!rd.next(line)) fail(rd.lineno, "truncated header");
  {
    std::istringstream ss(line);
    double version;
    int ftype, dsize;
    if (!(ss >> version >> ftype >> dsize)) fail(rd.lineno, "bad format line");
    if (version < 2.0 || version >= 3.0) fail(rd.lineno, "only MSH 2.x supported");
    if (ftype != 0) fail(rd.lineno, "only ASCII files supported");
  }
  if (!rd.next(line) || line != "$EndMeshFormat") fail(rd.lineno, "expected $EndMeshFormat");

  std::map<long, int> node_id;  // file id -> dense index
  Mesh m;
  m.dim = 0;
  std::vector<std::array<int, 4>> tris, tets;
  std::vector<int> tri_tags, tet_tags;
  std::vector<std::pair<std::array<int, 2>, int>> tagged_lines;

  while (rd.next(line)) {
    if (line == "$Nodes") {
      if (!rd.next(line)) fail(rd.lineno, "truncated $Nodes");
      long n = 0;
      {
        std::istringstream ss(line);
        if (!(ss >> n) || n < 0) fail(rd.lineno, "bad node count");
      }
      for (long i = 0; i < n; ++i) {
        if (!rd.next(line)) fail(rd.lineno, "truncated node list");
        std::istringstream ss(line);
        long id;
        double x, y, z;
        if (!(ss >> id >> x >> y >> z)) fail(rd.lineno, "bad node line");
        if (node_id.count(id)) fail(rd.lineno, "duplicate node id");
        node_id[id] = static_cast<int>(m.vertices.size());
        m.vertices.push_back({x, y, z});
      }
      if (!rd.next(line) || line != "$EndNodes") fail(rd.lineno, "expected $EndNodes");
    } else if (line == "$Elements") {
      if (!rd.next(line)) fail(rd.lineno, "truncated $Elements");
      long n = 0;
      {
        std::istringstream ss(line);
        if (!(ss >> n) || n < 0) fail(rd.lineno, "bad element count");
      }
      for (long i = 0; i < n; ++i) {
        if (!rd.next(line)) fail(rd.lineno, "truncated element list");
        std::istringstream ss(line);
        long id;
        int etype, ntags;
        if (!(ss >> id >> etype >> ntags)) fail(rd.lineno, "bad element line");
        int phys = 0;
        for (int t = 0; t < ntags; ++t) {
          int tag;
          if (!(ss >> tag)) fail(rd.lineno, "missing element tag");
          if (t == 0) phys = tag;
        }
        auto node = [&](int k) -> int {
          long nid;
          if (!(ss >> nid)) fail(rd.lineno, "missing element node " + std::to_string(k));
          auto it = node_id.find(nid);
          if (it == node_id.end()) fail(rd.lineno, "element references unknown node");
          return it->second;
        };
        switch (etype) {
          case 15:  // point, ignored
            node(0);
            break;
          case 1: {
            int a = node(0), b = node(1);
            if (a > b) std::swap(a, b);
            tagged_lines.push_back({{a, b}, phys});
            break;
          }
          case 2: {
            int a = node(0), b = node(1), c = node(2);
            tris.push_back({a, b, c, -1});
            tri_tags.push_back(phys);
            break;
          }
          case 4: {
            int a = node(0), b = node(1), c = node(2), d = node(3);
            tets.push_back({a, b, c, d});
            tet_tags.push_back(phys);
            break;
          }
          default:
            fail(rd.lineno, "unsupported element type " + std::to_string(etype));
        }
      }
      if (!rd.next(line) || line != "$EndElements") fail(rd.lineno, "expected $EndElements");
    } else if (!line.empty() && line[0] == '$') {
      // skip unknown section
      const std::string end = "$End" + line.substr(1);
      bool closed = false;
      while (rd.next(line))
        if (line == end) {
          closed = true;
          break;
        }
      if (!closed) fail(rd.lineno, "unterminated section");
    } else {
      fail(rd.lineno, "unexpected content outside a section");
    }
  }

  if (m.vertices.empty()) throw MeshError("msh: file contains no nodes");
  if (!tets.empty()) {
    m.dim = 3;
    m.cells = std::move(tets);
  } else if (!tris.empty()) {
    m.dim = 2;
    m.cells = std::move(tris);
  } else {
    throw MeshError("msh: file contains no triangles or tetrahedra");
  }
  m.finalize();

  if (m.dim == 2 && !tagged_lines.empty()) {
    for (const auto& [ev, tag] : tagged_lines) {
      auto it = std::lower_bound(m.edges.begin(), m.edges.end(), ev);
      if (it != m.edges.end() && *it == ev) m.edge_tag[it - m.edges.begin()] = tag;
    }
  }
  if (m.dim == 3) {
    // triangles are boundary facets in a tet mesh
    for (size_t i = 0; i < tris.size(); ++i) {
      std::array<int, 3> f = {tris[i][0], tris[i][1], tris[i][2]};
      std::sort(f.begin(), f.end());
      auto it = std::lower_bound(m.faces.begin(), m.faces.end(), f);
      if (it != m.faces.end() && *it == f) m.face_tag[it - m.faces.begin()] = tri_tags[i];
    }
  }
  return m;
}

Mesh read_msh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_msh_string(ss.str());
}

void write_msh(const Mesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open for writing: " + path);
  out.precision(17);
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << m.nverts() << "\n";
  for (int v = 0; v < m.nverts(); ++v)
    out << (v + 1) << " " << m.vertices[v][0] << " " << m.vertices[v][1] << " "
        << m.vertices[v][2] << "\n";
  out << "$EndNodes\n";

  long nelem = m.ncells();
  if (m.dim == 2) {
    for (int e = 0; e < m.nedges(); ++e)
      if (m.edge_on_boundary[e]) ++nelem;
  } else {
    for (int f = 0; f < m.nfaces(); ++f)
      if (m.face_on_boundary[f]) ++nelem;
  }
  out << "$Elements\n" << nelem << "\n";
  long id = 1;
  if (m.dim == 2) {
    for (int e = 0; e < m.nedges(); ++e)
      if (m.edge_on_boundary[e])
        out << id++ << " 1 2 " << m.edge_tag[e] << " 0 " << (m.edges[e][0] + 1) << " "
            << (m.edges[e][1] + 1) << "\n";
    for (int c = 0; c < m.ncells(); ++c)
      out << id++ << " 2 2 0 0 " << (m.cells[c][0] + 1) << " " << (m.cells[c][1] + 1) << " "
          << (m.cells[c][2] + 1) << "\n";
  } else {
    for (int f = 0; f < m.nfaces(); ++f)
      if (m.face_on_boundary[f])
        out << id++ << " 2 2 " << m.face_tag[f] << " 0 " << (m.faces[f][0] + 1) << " "
            << (m.faces[f][1] + 1) << " " << (m.faces[f][2] + 1) << "\n";
    for (int c = 0; c < m.ncells(); ++c)
      out << id++ << " 4 2 0 0 " << (m.cells[c][0] + 1) << " " << (m.cells[c][1] + 1) << " "
          << (m.cells[c][2] + 1) << " " << (m.cells[c][3] + 1) << "\n";
  }
  out << "$EndElements\n";
  if (!out) throw MeshError("write failed: " + path);
}

}  // namespace tdgl
