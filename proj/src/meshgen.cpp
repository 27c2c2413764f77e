#include <cmath>
#include <map>
#include <stdexcept>

#include "shrinkflow/mesh.hpp"

namespace shrinkflow {

namespace {

// Midpoint cache for icosphere subdivision.
struct EdgeSplit {
  std::map<std::pair<int, int>, int> midpoint;
  int get(std::vector<Vec3>& verts, int a, int b) {
    auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec3 m = (verts[a] + verts[b]) * 0.5;
    verts.push_back(m);
    int id = static_cast<int>(verts.size()) - 1;
    midpoint[key] = id;
    return id;
  }
};

}  // namespace

SurfaceMesh make_icosphere(double radius, int level, const Vec3& center) {
  if (radius <= 0) throw std::invalid_argument("make_icosphere: radius must be positive");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
      {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
      {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    EdgeSplit split;
    std::vector<std::array<int, 3>> nf;
    nf.reserve(f.size() * 4);
    for (const auto& tri : f) {
      int ab = split.get(v, tri[0], tri[1]);
      int bc = split.get(v, tri[1], tri[2]);
      int ca = split.get(v, tri[2], tri[0]);
      nf.push_back({tri[0], ab, ca});
      nf.push_back({tri[1], bc, ab});
      nf.push_back({tri[2], ca, bc});
      nf.push_back({ab, bc, ca});
    }
    f.swap(nf);
  }
  SurfaceMesh mesh;
  mesh.dim = 3;
  mesh.vertices.reserve(v.size());
  for (const Vec3& p : v) mesh.vertices.push_back(center + normalized(p) * radius);
  mesh.triangles = std::move(f);
  return mesh;
}

SurfaceMesh make_ellipsoid(double a, double b, double c, int level, const Vec3& center) {
  SurfaceMesh mesh = make_icosphere(1.0, level);
  for (Vec3& p : mesh.vertices) {
    p = {center.x + a * p.x, center.y + b * p.y, center.z + c * p.z};
  }
  return mesh;
}

SurfaceMesh make_torus(double major, double minor, int nu, int nv, const Vec3& center) {
  if (minor <= 0 || major <= minor) throw std::invalid_argument("make_torus: need major > minor > 0");
  SurfaceMesh mesh;
  mesh.dim = 3;
  mesh.vertices.reserve(static_cast<std::size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i) {
    double u = 2 * kPi * i / nu;
    for (int j = 0; j < nv; ++j) {
      double v = 2 * kPi * j / nv;
      double w = major + minor * std::cos(v);
      mesh.vertices.push_back(center + Vec3{w * std::cos(u), w * std::sin(u), minor * std::sin(v)});
    }
  }
  auto id = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      int p00 = id(i, j), p10 = id(i + 1, j), p01 = id(i, j + 1), p11 = id(i + 1, j + 1);
      mesh.triangles.push_back({p00, p10, p11});
      mesh.triangles.push_back({p00, p11, p01});
    }
  return mesh;
}

SurfaceMesh make_tube_x(double radius, double half_length, int around, int along) {
  if (radius <= 0 || half_length <= 0) throw std::invalid_argument("make_tube_x: bad dimensions");
  SurfaceMesh mesh;
  mesh.dim = 3;
  mesh.open_allowed = true;
  for (int i = 0; i <= along; ++i) {
    double x = -half_length + 2.0 * half_length * i / along;
    for (int j = 0; j < around; ++j) {
      double th = 2 * kPi * j / around;
      mesh.vertices.push_back({x, radius * std::cos(th), radius * std::sin(th)});
    }
  }
  auto id = [&](int i, int j) { return i * around + (j % around); };
  for (int i = 0; i < along; ++i)
    for (int j = 0; j < around; ++j) {
      int p00 = id(i, j), p01 = id(i, j + 1), p10 = id(i + 1, j), p11 = id(i + 1, j + 1);
      mesh.triangles.push_back({p00, p11, p10});
      mesh.triangles.push_back({p00, p01, p11});
    }
  return mesh;
}

SurfaceMesh make_plane_patch(double half, int per_side) {
  SurfaceMesh mesh;
  mesh.dim = 3;
  mesh.open_allowed = true;
  int n = per_side;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.push_back({-half + 2 * half * i / n, -half + 2 * half * j / n, 0});
  auto id = [&](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return mesh;
}

SurfaceMesh make_disk(double radius, int rings, int sectors) {
  SurfaceMesh mesh;
  mesh.dim = 3;
  mesh.open_allowed = true;
  mesh.vertices.push_back({0, 0, 0});
  for (int r = 1; r <= rings; ++r) {
    double rad = radius * r / rings;
    for (int s = 0; s < sectors; ++s) {
      double th = 2 * kPi * s / sectors;
      mesh.vertices.push_back({rad * std::cos(th), rad * std::sin(th), 0});
    }
  }
  auto id = [&](int r, int s) { return 1 + (r - 1) * sectors + (s % sectors); };
  for (int s = 0; s < sectors; ++s) mesh.triangles.push_back({0, id(1, s), id(1, s + 1)});
  for (int r = 1; r < rings; ++r)
    for (int s = 0; s < sectors; ++s) {
      mesh.triangles.push_back({id(r, s), id(r + 1, s), id(r + 1, s + 1)});
      mesh.triangles.push_back({id(r, s), id(r + 1, s + 1), id(r, s + 1)});
    }
  return mesh;
}

SurfaceMesh make_circle(double radius, int count, const Vec3& center) {
  SurfaceMesh mesh;
  mesh.dim = 2;
  for (int i = 0; i < count; ++i) {
    double th = 2 * kPi * i / count;
    mesh.vertices.push_back({center.x + radius * std::cos(th), center.y + radius * std::sin(th), 0});
  }
  // Counter-clockwise: the enclosed (positive) region lies left of travel.
  for (int i = 0; i < count; ++i) mesh.segments.push_back({i, (i + 1) % count});
  return mesh;
}

SurfaceMesh make_ellipse(double a, double b, int count, const Vec3& center) {
  SurfaceMesh mesh = make_circle(1.0, count, {0, 0, 0});
  for (Vec3& p : mesh.vertices) p = {center.x + a * p.x, center.y + b * p.y, 0};
  return mesh;
}

}  // namespace shrinkflow
