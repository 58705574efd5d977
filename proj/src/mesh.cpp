#include "softgrid/mesh.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "softgrid/format.hpp"

namespace softgrid {

GridMesh build_grid(int nx, int ny, double cell_size, double node_mass) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("build_grid: need at least one cell per axis");
  }
  if (!(cell_size > 0.0)) {
    throw std::invalid_argument("build_grid: cell_size must be positive");
  }
  if (!(node_mass > 0.0)) {
    throw std::invalid_argument("build_grid: node_mass must be positive");
  }

  GridMesh mesh;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.cell_size = cell_size;
  mesh.nodes.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int iy = 0; iy <= ny; ++iy) {
    for (int ix = 0; ix <= nx; ++ix) {
      Node n;
      n.pos = {ix * cell_size, iy * cell_size};
      n.mass = node_mass;
      mesh.nodes.push_back(n);
    }
  }

  const double diag = diag_rest_length(cell_size);
  mesh.springs.reserve(static_cast<size_t>(6) * nx * ny);
  auto add = [&](int a, int b, SpringKind kind, double rest) {
    mesh.springs.push_back({a, b, kind, rest, cell_size});
  };
  for (int cy = 0; cy < ny; ++cy) {
    for (int cx = 0; cx < nx; ++cx) {
      const int n00 = mesh.node_index(cx, cy);
      const int n10 = mesh.node_index(cx + 1, cy);
      const int n01 = mesh.node_index(cx, cy + 1);
      const int n11 = mesh.node_index(cx + 1, cy + 1);
      add(n00, n10, SpringKind::Edge, cell_size);
      add(n01, n11, SpringKind::Edge, cell_size);
      add(n00, n01, SpringKind::Edge, cell_size);
      add(n10, n11, SpringKind::Edge, cell_size);
      add(n00, n11, SpringKind::Diagonal, diag);
      add(n10, n01, SpringKind::Diagonal, diag);
    }
  }
  return mesh;
}

Box bounding_box(const GridMesh& mesh) {
  if (mesh.nodes.empty()) {
    throw std::invalid_argument("bounding_box: empty mesh");
  }
  Box box{mesh.nodes.front().pos, mesh.nodes.front().pos};
  for (const auto& n : mesh.nodes) {
    box.lo.x = std::min(box.lo.x, n.pos.x);
    box.lo.y = std::min(box.lo.y, n.pos.y);
    box.hi.x = std::max(box.hi.x, n.pos.x);
    box.hi.y = std::max(box.hi.y, n.pos.y);
  }
  return box;
}

std::vector<BoundaryNode> boundary_nodes(const GridMesh& mesh, Side side) {
  std::vector<BoundaryNode> out;
  const bool vertical = side == Side::Left || side == Side::Right;
  const int count = vertical ? mesh.ny : mesh.nx;
  out.reserve(count + 1);
  for (int j = 0; j <= count; ++j) {
    int idx = 0;
    switch (side) {
      case Side::Left: idx = mesh.node_index(0, j); break;
      case Side::Right: idx = mesh.node_index(mesh.nx, j); break;
      case Side::Bottom: idx = mesh.node_index(j, 0); break;
      case Side::Top: idx = mesh.node_index(j, mesh.ny); break;
    }
    out.push_back({idx, (j == 0 || j == count) ? 1 : 2});
  }
  return out;
}

void write_positions_csv(const GridMesh& mesh, std::ostream& out) {
  out << "index,x,y\n";
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    out << i << ',' << fmt_g17(mesh.nodes[i].pos.x) << ',' << fmt_g17(mesh.nodes[i].pos.y) << '\n';
  }
}

void write_springs_csv(const GridMesh& mesh, std::ostream& out) {
  out << "a,b,kind,rest_length\n";
  for (const auto& s : mesh.springs) {
    out << s.a << ',' << s.b << ',' << (s.kind == SpringKind::Edge ? "edge" : "diagonal") << ','
        << fmt_g17(s.rest_length) << '\n';
  }
}

}  // namespace softgrid
