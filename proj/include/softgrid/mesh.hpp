#pragma once

#include <iosfwd>
#include <vector>

#include "softgrid/springs.hpp"
#include "softgrid/vec2.hpp"

namespace softgrid {

struct Node {
  Vec2 pos;
  Vec2 vel;
  double mass = 1.0;
  Vec2 force;  // accumulation scratch, valid after accumulate_forces
};

struct SpringInstance {
  int a = 0;
  int b = 0;
  SpringKind kind = SpringKind::Edge;
  double rest_length = 0.0;
  double section = 0.0;
};

enum class Side { Left, Right, Bottom, Top };

struct BoundaryNode {
  int node = 0;
  int multiplicity = 0;  // cells on that side owning the node: 1 corner, 2 interior
};

struct Box {
  Vec2 lo;
  Vec2 hi;

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
};

// Square-grid sample. Each cell carries its own 4 edge + 2 diagonal spring
// instances (interior lattice edges are doubly represented), making every
// cell a self-similar unit; per-instance section Sq equals cell_size.
struct GridMesh {
  std::vector<Node> nodes;
  std::vector<SpringInstance> springs;
  double cell_size = 1.0;
  int nx = 0;
  int ny = 0;

  int node_index(int ix, int iy) const { return iy * (nx + 1) + ix; }
};

GridMesh build_grid(int nx, int ny, double cell_size, double node_mass = 1.0);

Box bounding_box(const GridMesh& mesh);

// Boundary nodes of one side, in ascending coordinate order.
std::vector<BoundaryNode> boundary_nodes(const GridMesh& mesh, Side side);

// Snapshot exports: "index,x,y" and "a,b,kind,rest_length".
void write_positions_csv(const GridMesh& mesh, std::ostream& out);
void write_springs_csv(const GridMesh& mesh, std::ostream& out);

}  // namespace softgrid
