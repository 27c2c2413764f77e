#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "shrinkflow/core.hpp"
#include "shrinkflow/mesh.hpp"

namespace shrinkflow {

// Uniform axis-aligned node grid. extents are node counts per axis;
// planar grids use extents[2] == 1. Layout is row-major with x fastest.
struct GridMeta {
  int dim = 3;
  Vec3 origin{};
  double spacing = 1.0;
  std::array<int, 3> extents{0, 0, 1};

  std::size_t node_count() const {
    return static_cast<std::size_t>(extents[0]) * extents[1] * extents[2];
  }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * extents[1] + j) * extents[0] + i;
  }
  Vec3 position(int i, int j, int k) const {
    return {origin.x + spacing * i, origin.y + spacing * j, origin.z + spacing * k};
  }
  // Euclidean diameter of the grid box.
  double diameter() const;
  bool same_layout(const GridMeta& o) const;
  void validate() const;  // spacing > 0, extents >= 4 per axis (z exempt in 2-d)
};

struct GridField {
  GridMeta meta;
  std::vector<double> values;

  double& at(int i, int j, int k) { return values[meta.index(i, j, k)]; }
  double at(int i, int j, int k) const { return values[meta.index(i, j, k)]; }
};

struct VoxelSet {
  GridMeta meta;
  std::vector<uint8_t> indicator;  // node-centred {0,1} samples
};

// Labels of the connected components of {u != 0} within a query ball.
struct ComponentSet {
  GridMeta meta;
  Vec3 center{};
  double radius = 0;
  std::vector<int32_t> labels;    // -1 outside ball or on the zero set
  int count = 0;
  std::vector<double> inradius;   // per label: max distance to {u=0} or ball boundary
  std::vector<int8_t> side;       // per label: sign of u on the component
  std::vector<std::int64_t> size; // per label: node count
};

// Analytic shape descriptors for signed-distance initialisation.
// Sign convention: positive inside, following E = {u > 0}.
struct Shape {
  enum class Kind { Sphere, Cylinder, Ellipsoid, Torus, RoundedBox, HalfSpace, Union, Difference };
  Kind kind = Kind::Sphere;
  Vec3 center{};
  Vec3 axis{0, 0, 1};      // cylinder/torus axis direction
  Vec3 half_extents{};     // rounded box
  double radius = 1;       // sphere/cylinder/torus minor radius
  double major = 2;        // torus major radius
  double rounding = 0.1;   // rounded box corner radius
  Vec3 semi_axes{1, 1, 1}; // ellipsoid
  Vec3 normal{1, 0, 0};    // halfspace: inside where dot(normal, x) < offset
  double offset = 0;
  std::vector<Shape> children;  // union/difference operands

  static Shape sphere(const Vec3& c, double r);
  static Shape cylinder(const Vec3& point, const Vec3& axis, double r);
  static Shape ellipsoid(const Vec3& c, const Vec3& semi_axes);
  static Shape torus(const Vec3& c, const Vec3& axis, double major, double minor);
  static Shape rounded_box(const Vec3& c, const Vec3& half_extents, double rounding);
  static Shape half_space(const Vec3& normal, double offset);
  static Shape unite(Shape a, Shape b);
  static Shape subtract(Shape a, Shape b);

  double signed_distance(const Vec3& p) const;  // exact for primitives
  bool bounded() const;
  void bounding_box(Vec3& lo, Vec3& hi) const;  // only valid when bounded
};

// Signed distance to the shape boundary sampled at grid nodes, positive
// inside, clamped to +-C with C = 10 * grid diameter.
GridField signed_distance_init(const Shape& shape, const GridMeta& grid);

// Zero-level (or iso-level) interface as a watertight mesh: marching squares
// with the asymptotic decider in the plane, marching tetrahedra on the
// Freudenthal 6-tet cube split in space. Outward orientation follows -grad u.
SurfaceMesh extract_interface(const GridField& field, double iso);

ComponentSet flood_components(const GridField& field, const Vec3& center, double R);

// Smoothed indicator: discrete convolution with the normalised bump
// (1 - |x/eps|^2)^4, minus 1/2 so the interface sits at level zero.
GridField mollify_indicator(const VoxelSet& set, double eps);

double perimeter(const VoxelSet& set, double eps);

// Exact Euclidean distance (length units) to the seed set, two-pass
// lower-envelope transform per axis.
std::vector<double> distance_to_seeds(const GridMeta& meta, const std::vector<uint8_t>& seeds);

// Distance to the zero set of u, seeded at nodes adjacent to a sign change.
std::vector<double> distance_to_interface(const GridField& field);

// --- io: binary little-endian dump with a JSON sidecar ----------------------

void write_grid(const std::string& path_base, const GridField& field);
GridField read_grid(const std::string& path_base);
void write_voxels(const std::string& path_base, const VoxelSet& set);
VoxelSet read_voxels(const std::string& path_base);

}  // namespace shrinkflow
