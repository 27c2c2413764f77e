#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "shrinkflow/fields.hpp"

namespace shrinkflow {

double GridMeta::diameter() const {
  double dx = spacing * (extents[0] - 1);
  double dy = spacing * (extents[1] - 1);
  double dz = dim == 3 ? spacing * (extents[2] - 1) : 0.0;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool GridMeta::same_layout(const GridMeta& o) const {
  return dim == o.dim && extents == o.extents && spacing == o.spacing &&
         norm(origin - o.origin) < 1e-12 * spacing;
}

void GridMeta::validate() const {
  if (dim != 2 && dim != 3) throw std::invalid_argument("grid: dim must be 2 or 3");
  if (!(spacing > 0)) throw std::invalid_argument("grid: spacing must be positive");
  int axes = dim;
  for (int a = 0; a < axes; ++a)
    if (extents[a] < 4) throw std::invalid_argument("grid: extents must be >= 4 per axis");
  if (dim == 2 && extents[2] != 1) throw std::invalid_argument("grid: planar grids use extents[2] == 1");
}

// --- shapes -----------------------------------------------------------------

Shape Shape::sphere(const Vec3& c, double r) {
  Shape s;
  s.kind = Kind::Sphere;
  s.center = c;
  s.radius = r;
  return s;
}

Shape Shape::cylinder(const Vec3& point, const Vec3& axis, double r) {
  Shape s;
  s.kind = Kind::Cylinder;
  s.center = point;
  s.axis = normalized(axis);
  s.radius = r;
  return s;
}

Shape Shape::ellipsoid(const Vec3& c, const Vec3& semi_axes) {
  Shape s;
  s.kind = Kind::Ellipsoid;
  s.center = c;
  s.semi_axes = semi_axes;
  return s;
}

Shape Shape::torus(const Vec3& c, const Vec3& axis, double major, double minor) {
  Shape s;
  s.kind = Kind::Torus;
  s.center = c;
  s.axis = normalized(axis);
  s.major = major;
  s.radius = minor;
  return s;
}

Shape Shape::rounded_box(const Vec3& c, const Vec3& half_extents, double rounding) {
  Shape s;
  s.kind = Kind::RoundedBox;
  s.center = c;
  s.half_extents = half_extents;
  s.rounding = rounding;
  return s;
}

Shape Shape::half_space(const Vec3& n, double offset) {
  Shape s;
  s.kind = Kind::HalfSpace;
  s.normal = normalized(n);
  s.offset = offset;
  return s;
}

Shape Shape::unite(Shape a, Shape b) {
  Shape s;
  s.kind = Kind::Union;
  s.children = {std::move(a), std::move(b)};
  return s;
}

Shape Shape::subtract(Shape a, Shape b) {
  Shape s;
  s.kind = Kind::Difference;
  s.children = {std::move(a), std::move(b)};
  return s;
}

namespace {

// Distance from q (componentwise non-negative) to the axis-aligned ellipsoid
// surface, by bisection on the Lagrange parameter. Exact for generic points;
// on-axis interior points fall back to the axis-vertex distance.
double ellipsoid_boundary_distance(Vec3 q, const Vec3& a) {
  q = {std::fabs(q.x), std::fabs(q.y), std::fabs(q.z)};
  double ax[3] = {a.x, a.y, a.z};
  double qq[3] = {q.x, q.y, q.z};
  double t_lo = -std::numeric_limits<double>::max();
  bool any = false;
  for (int i = 0; i < 3; ++i) {
    if (ax[i] <= 0) continue;  // planar ellipse uses a.z == 0
    if (qq[i] > 0) {
      t_lo = std::max(t_lo, -ax[i] * ax[i]);
      any = true;
    }
  }
  if (!any) {
    // centre: nearest boundary point along the smallest semi-axis
    double amin = std::numeric_limits<double>::max();
    for (int i = 0; i < 3; ++i)
      if (ax[i] > 0) amin = std::min(amin, ax[i]);
    return amin;
  }
  auto F = [&](double t) {
    double s = 0;
    for (int i = 0; i < 3; ++i) {
      if (ax[i] <= 0 || qq[i] <= 0) continue;
      double w = ax[i] * qq[i] / (t + ax[i] * ax[i]);
      s += w * w;
    }
    return s;
  };
  double span = 0;
  for (int i = 0; i < 3; ++i) span = std::max(span, ax[i]);
  double t_hi = span * (norm(q) + span);
  while (F(t_hi) > 1.0) t_hi *= 2.0;
  double lo = t_lo, hi = t_hi;
  for (int it = 0; it < 120; ++it) {
    double mid = 0.5 * (lo + hi);
    if (!(mid > lo) || !(mid < hi)) break;
    if (F(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  double t = 0.5 * (lo + hi);
  Vec3 closest{};
  for (int i = 0; i < 3; ++i) {
    if (ax[i] <= 0) continue;
    closest[i] = ax[i] * ax[i] * qq[i] / (t + ax[i] * ax[i]);
  }
  return norm(closest - Vec3{qq[0], qq[1], qq[2]});
}

}  // namespace

double Shape::signed_distance(const Vec3& p) const {
  switch (kind) {
    case Kind::Sphere:
      return radius - norm(p - center);
    case Kind::Cylinder: {
      Vec3 d = p - center;
      Vec3 perp = d - axis * dot(d, axis);
      return radius - norm(perp);
    }
    case Kind::Ellipsoid: {
      Vec3 q = p - center;
      double g = 0;
      double ax[3] = {semi_axes.x, semi_axes.y, semi_axes.z};
      double qv[3] = {q.x, q.y, q.z};
      for (int i = 0; i < 3; ++i)
        if (ax[i] > 0) g += sq(qv[i] / ax[i]);
      double d = ellipsoid_boundary_distance(q, semi_axes);
      return g < 1.0 ? d : -d;
    }
    case Kind::Torus: {
      Vec3 d = p - center;
      double par = dot(d, axis);
      double perp = norm(d - axis * par);
      return radius - std::sqrt(sq(perp - major) + sq(par));
    }
    case Kind::RoundedBox: {
      Vec3 d = p - center;
      Vec3 q{std::fabs(d.x) - half_extents.x, std::fabs(d.y) - half_extents.y,
             std::fabs(d.z) - half_extents.z};
      Vec3 qp{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
      double sd_box = norm(qp) + std::min(std::max(q.x, std::max(q.y, q.z)), 0.0);
      return rounding - sd_box;
    }
    case Kind::HalfSpace:
      return offset - dot(normal, p);
    case Kind::Union:
      return std::max(children[0].signed_distance(p), children[1].signed_distance(p));
    case Kind::Difference:
      return std::min(children[0].signed_distance(p), -children[1].signed_distance(p));
  }
  return 0;
}

bool Shape::bounded() const {
  switch (kind) {
    case Kind::Cylinder:
    case Kind::HalfSpace:
      return false;
    case Kind::Union:
      return children[0].bounded() && children[1].bounded();
    case Kind::Difference:
      return children[0].bounded();
    default:
      return true;
  }
}

void Shape::bounding_box(Vec3& lo, Vec3& hi) const {
  switch (kind) {
    case Kind::Sphere:
      lo = center - Vec3{radius, radius, radius};
      hi = center + Vec3{radius, radius, radius};
      return;
    case Kind::Ellipsoid:
      lo = center - semi_axes;
      hi = center + semi_axes;
      return;
    case Kind::Torus: {
      double r = major + radius;
      lo = center - Vec3{r, r, r};
      hi = center + Vec3{r, r, r};
      return;
    }
    case Kind::RoundedBox: {
      Vec3 r = half_extents + Vec3{rounding, rounding, rounding};
      lo = center - r;
      hi = center + r;
      return;
    }
    case Kind::Union: {
      Vec3 lo2, hi2;
      children[0].bounding_box(lo, hi);
      children[1].bounding_box(lo2, hi2);
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], lo2[a]);
        hi[a] = std::max(hi[a], hi2[a]);
      }
      return;
    }
    case Kind::Difference:
      children[0].bounding_box(lo, hi);
      return;
    default:
      throw std::invalid_argument("shape: bounding box of unbounded shape");
  }
}

GridField signed_distance_init(const Shape& shape, const GridMeta& grid) {
  grid.validate();
  if (shape.bounded()) {
    Vec3 lo, hi;
    shape.bounding_box(lo, hi);
    double m = 2.0 * grid.spacing;
    Vec3 glo = grid.origin;
    Vec3 ghi = grid.position(grid.extents[0] - 1, grid.extents[1] - 1,
                             grid.dim == 3 ? grid.extents[2] - 1 : 0);
    int axes = grid.dim;
    for (int a = 0; a < axes; ++a) {
      if (lo[a] < glo[a] + m || hi[a] > ghi[a] - m) {
        std::ostringstream msg;
        msg << "signed_distance_init: shape exceeds grid bounds on axis " << a
            << "; need grid covering [" << lo[a] - m << ", " << hi[a] + m << "] (have ["
            << glo[a] << ", " << ghi[a] << "])";
        throw std::invalid_argument(msg.str());
      }
    }
  }
  GridField field;
  field.meta = grid;
  field.values.resize(grid.node_count());
  const double clamp_c = 10.0 * grid.diameter();
  const int nz = grid.dim == 3 ? grid.extents[2] : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < grid.extents[1]; ++j)
      for (int i = 0; i < grid.extents[0]; ++i) {
        double u = shape.signed_distance(grid.position(i, j, k));
        field.values[grid.index(i, j, k)] = std::clamp(u, -clamp_c, clamp_c);
      }
  return field;
}

// --- io ----------------------------------------------------------------------

void write_grid(const std::string& path_base, const GridField& field) {
  nlohmann::json sidecar = {
      {"dim", field.meta.dim},
      {"origin", {field.meta.origin.x, field.meta.origin.y, field.meta.origin.z}},
      {"spacing", field.meta.spacing},
      {"extents", {field.meta.extents[0], field.meta.extents[1], field.meta.extents[2]}},
  };
  std::ofstream js(path_base + ".json");
  if (!js) throw std::runtime_error("write_grid: cannot open " + path_base + ".json");
  js << sidecar.dump(2) << "\n";
  std::ofstream bin(path_base + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("write_grid: cannot open " + path_base + ".bin");
  bin.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
}

namespace {

GridMeta read_sidecar(const std::string& path) {
  std::ifstream js(path);
  if (!js) throw std::runtime_error("read_grid: cannot open " + path);
  nlohmann::json sidecar = nlohmann::json::parse(js);
  GridMeta meta;
  meta.dim = sidecar.at("dim").get<int>();
  auto o = sidecar.at("origin");
  meta.origin = {o[0].get<double>(), o[1].get<double>(), o[2].get<double>()};
  meta.spacing = sidecar.at("spacing").get<double>();
  auto e = sidecar.at("extents");
  meta.extents = {e[0].get<int>(), e[1].get<int>(), e[2].get<int>()};
  meta.validate();
  return meta;
}

}  // namespace

GridField read_grid(const std::string& path_base) {
  GridField field;
  field.meta = read_sidecar(path_base + ".json");
  field.values.resize(field.meta.node_count());
  std::ifstream bin(path_base + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("read_grid: cannot open " + path_base + ".bin");
  bin.read(reinterpret_cast<char*>(field.values.data()),
           static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!bin) throw std::runtime_error("read_grid: truncated " + path_base + ".bin");
  return field;
}

void write_voxels(const std::string& path_base, const VoxelSet& set) {
  nlohmann::json sidecar = {
      {"dim", set.meta.dim},
      {"origin", {set.meta.origin.x, set.meta.origin.y, set.meta.origin.z}},
      {"spacing", set.meta.spacing},
      {"extents", {set.meta.extents[0], set.meta.extents[1], set.meta.extents[2]}},
  };
  std::ofstream js(path_base + ".json");
  if (!js) throw std::runtime_error("write_voxels: cannot open " + path_base + ".json");
  js << sidecar.dump(2) << "\n";
  std::ofstream bin(path_base + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("write_voxels: cannot open " + path_base + ".bin");
  bin.write(reinterpret_cast<const char*>(set.indicator.data()),
            static_cast<std::streamsize>(set.indicator.size()));
}

VoxelSet read_voxels(const std::string& path_base) {
  VoxelSet set;
  set.meta = read_sidecar(path_base + ".json");
  set.indicator.resize(set.meta.node_count());
  std::ifstream bin(path_base + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("read_voxels: cannot open " + path_base + ".bin");
  bin.read(reinterpret_cast<char*>(set.indicator.data()),
           static_cast<std::streamsize>(set.indicator.size()));
  if (!bin) throw std::runtime_error("read_voxels: truncated " + path_base + ".bin");
  return set;
}

}  // namespace shrinkflow
