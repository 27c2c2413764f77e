#pragma once

#include <array>
#include <string>
#include <vector>

#include "shrinkflow/core.hpp"

namespace shrinkflow {

// Discrete hypersurface with unit-multiplicity area measure: a closed (or
// explicitly open) polyline in R^2, or a triangle mesh in R^3.
struct SurfaceMesh {
  int dim = 3;  // ambient dimension n+1, 2 or 3
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 2>> segments;   // used when dim == 2
  std::vector<std::array<int, 3>> triangles;  // used when dim == 3
  // Set by constructors/generators when the surface has boundary and the
  // caller accepts that (truncated cylinders, planes, disks).
  bool open_allowed = false;

  int n() const { return dim - 1; }
  std::size_t element_count() const { return dim == 2 ? segments.size() : triangles.size(); }
  bool empty() const { return element_count() == 0; }
};

struct CurvatureData {
  std::vector<Vec3> mean_curvature;  // H = -H n, points inward for spheres
  std::vector<Vec3> normal;          // outward unit normal
  std::vector<double> dual_area;     // sums to total area
  std::vector<uint8_t> boundary;     // 1 on boundary vertices of open meshes
};

double element_measure(const SurfaceMesh& mesh, std::size_t e);
double area(const SurfaceMesh& mesh);
Vec3 area_centroid(const SurfaceMesh& mesh);
void bounding_box(const SurfaceMesh& mesh, Vec3& lo, Vec3& hi);
double bounding_diameter(const SurfaceMesh& mesh);

// Edge-manifold closedness: every edge (vertex, for polylines) shared by
// exactly two elements with opposite induced orientation.
bool is_closed(const SurfaceMesh& mesh);

// Throws when connectivity is broken; when `strict`, also rejects elements
// with measure <= 1e-12 * diameter^n, naming the offending element.
void validate(const SurfaceMesh& mesh, bool strict = false);

// mu^{y,rho}: vertices map x -> rho (x - y), connectivity unchanged.
SurfaceMesh rescale_measure(const SurfaceMesh& mesh, const Vec3& y, double rho);

void reverse_orientation(SurfaceMesh& mesh);

// Cotangent Laplace-Beltrami of the position with mixed dual areas for
// triangle meshes; circumscribed-circle curvature for polylines. Closed
// meshes required unless mesh.open_allowed; boundary vertices of open
// meshes are masked out with H = 0.
CurvatureData curvature(const SurfaceMesh& mesh);

// --- generators ------------------------------------------------------------

SurfaceMesh make_icosphere(double radius, int level, const Vec3& center = {});
SurfaceMesh make_ellipsoid(double a, double b, double c, int level, const Vec3& center = {});
SurfaceMesh make_torus(double major, double minor, int nu, int nv, const Vec3& center = {});
// Tube S^1(radius) x [-half_length, half_length] along the x-axis, open.
SurfaceMesh make_tube_x(double radius, double half_length, int around, int along);
// Square patch [-half, half]^2 in the plane z = 0, open.
SurfaceMesh make_plane_patch(double half, int per_side);
// Disk of given radius in the plane z = 0 centred at the origin, open.
SurfaceMesh make_disk(double radius, int rings, int sectors);
SurfaceMesh make_circle(double radius, int count, const Vec3& center = {});
SurfaceMesh make_ellipse(double a, double b, int count, const Vec3& center = {});

// --- io ---------------------------------------------------------------------

void write_obj(const std::string& path, const SurfaceMesh& mesh);
SurfaceMesh read_obj(const std::string& path);
// Polyline CSV: one "x,y" row per vertex, closed by convention.
void write_polyline_csv(const std::string& path, const SurfaceMesh& mesh);
SurfaceMesh read_polyline_csv(const std::string& path);

}  // namespace shrinkflow
